"""Achievable-rate regions: flat coding, time sharing, dual index coding,
and composite coding with checkable certificates.

Composite coding sends one random index W_J per message subset J at rate
S_J; receiver j recovers the indices it cannot rule out (those with
J not inside A_j) from the single channel use, then decodes a chosen set
K_j of messages from the indices inside K_j u A_j. Its rate region is,
per decoding choice, the polymatroidal system

    sum_{i in J} R_i <= sum_{J' subset of K_j u A_j, J' meets J} S_J'
                                  for all nonempty J subset of K_j \\ A_j,

intersected over receivers, plus the per-receiver recovery budgets
sum_{J not subset of A_j} S_J <= 1, all under S >= 0.

Everything here is closed-form exact; regions are closures of the open
achievable sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .problem import Problem
from .rat import Rat, rat, rat_str
from .geometry import (
    LinearSystem,
    Region,
    fm_eliminate_all,
    irredundant,
    lp_feasible,
    lp_solve,
    normalize_row,
    rate_vars,
    region_from_inequalities,
    region_from_points,
)
from .outer_bound import build_lifted_outer, rowgen_max

FIXED_SUPPORT_LIMIT = 12


def _subsets_of(items):
    """Nonempty subsets as sorted tuples, smallest first."""
    items = sorted(items)
    out = []
    for size in range(1, len(items) + 1):
        out.extend(combinations(items, size))
    return out


def subset_key(js):
    return "{%s}" % ",".join(str(j) for j in sorted(js))


def _svar(js):
    return "S" + "".join(str(j) for j in sorted(js))


@dataclass(frozen=True)
class CompositeRates:
    """Rates S_J of the composite indices, nonzero entries only."""

    rates: tuple  # ((subset tuple, Rat), ...) sorted

    @classmethod
    def make(cls, mapping):
        items = []
        for js, v in dict(mapping).items():
            v = rat(v)
            if v < 0:
                raise ValueError("composite rate for %s is negative" % (subset_key(js),))
            if v:
                items.append((tuple(sorted(js)), v))
        items.sort(key=lambda kv: (len(kv[0]), kv[0]))
        return cls(tuple(items))

    def rate(self, js):
        js = tuple(sorted(js))
        for key, v in self.rates:
            if key == js:
                return v
        return Rat(0)

    def as_dict(self):
        return {js: v for js, v in self.rates}

    def budgets_ok(self, p: Problem) -> bool:
        for j in range(1, p.n + 1):
            a = set(p.side_info[j - 1])
            used = sum((v for js, v in self.rates if not set(js) <= a), Rat(0))
            if used > 1:
                return False
        return True

    def to_json_dict(self):
        return {subset_key(js): rat_str(v) for js, v in self.rates}


@dataclass(frozen=True)
class DecodingConfig:
    """One decoding set K_j per receiver, with j in K_j."""

    sets: tuple  # tuple of sorted tuples

    @classmethod
    def make(cls, sets, n=None):
        fixed = []
        for j, ks in enumerate(sets, start=1):
            ks = tuple(sorted(set(int(k) for k in ks)))
            if j not in ks:
                raise ValueError("decoding set for receiver %d must contain %d" % (j, j))
            if n is not None and any(k < 1 or k > n for k in ks):
                raise ValueError("decoding set %r out of range for %d messages" % (ks, n))
            fixed.append(ks)
        return cls(tuple(fixed))

    def to_json_list(self):
        return [list(ks) for ks in self.sets]


@dataclass(frozen=True)
class AchievabilityCertificate:
    config: DecodingConfig
    rates: CompositeRates
    point: tuple

    def to_json_dict(self):
        return {
            "config": self.config.to_json_list(),
            "S": self.rates.to_json_dict(),
            "point": [rat_str(x) for x in self.point],
        }


def certificate_valid(p: Problem, cert: AchievabilityCertificate) -> bool:
    """Re-check a certificate by direct substitution."""
    if len(cert.point) != p.n or len(cert.config.sets) != p.n:
        return False
    point = [rat(x) for x in cert.point]
    if not cert.rates.budgets_ok(p):
        return False
    s = cert.rates.as_dict()
    for j in range(1, p.n + 1):
        kj = set(cert.config.sets[j - 1])
        if j not in kj:
            return False
        a = set(p.side_info[j - 1])
        pool = kj | a
        free = sorted(kj - a)
        for js in _subsets_of(free):
            need = sum((point[i - 1] for i in js), Rat(0))
            have = sum(
                (v for key, v in s.items() if set(key) <= pool and set(key) & set(js)),
                Rat(0),
            )
            if need > have:
                return False
    return True


def flat_region(p: Problem) -> Region:
    """Closure of the rates within reach of a single flat code."""
    n = p.n
    rows = []
    for j in range(1, n + 1):
        b = p.interfering(j)
        coeffs = tuple(1 if (k == j or k in b) else 0 for k in range(1, n + 1))
        rows.append((coeffs, 1))
    for j in range(n):
        e = [0] * n
        e[j] = -1
        rows.append((tuple(e), 0))
    return region_from_inequalities(LinearSystem.make(rate_vars(n), rows))


def flat_timeshare_region(p: Problem) -> Region:
    """Hull of flat regions of all induced subproblems, zero outside."""
    n = p.n
    points = set()
    for us in _subsets_of(range(1, n + 1)):
        relabel = {j: i + 1 for i, j in enumerate(us)}
        side = []
        for j in us:
            side.append(tuple(relabel[k] for k in p.side_info[j - 1] if k in relabel))
        sub = Problem.from_side_info(len(us), side)
        for v in flat_region(sub).vertices:
            full = [Rat(0)] * n
            for i, j in enumerate(us):
                full[j - 1] = v[i]
            points.add(tuple(full))
    return region_from_points(rate_vars(n), sorted(points))


def dual_region(messages, side_info, s) -> LinearSystem:
    """Rate system a composite-rate allocation grants the receivers of
    messages K decoding against side information A.

    One row per nonempty J inside K \\ A: the rates in J are covered by
    the composite indices inside K u A that meet J. Rates outside K u A
    in s are ignored.
    """
    k = set(int(j) for j in messages)
    a = set(int(j) for j in side_info)
    if isinstance(s, CompositeRates):
        s = s.as_dict()
    pool = k | a
    inside = {
        tuple(sorted(js)): rat(v)
        for js, v in dict(s).items()
        if set(js) <= pool and len(set(js)) > 0
    }
    free = sorted(k - a)
    variables = tuple("R%d" % j for j in free)
    rows = []
    for js in _subsets_of(free):
        coeffs = tuple(1 if j in js else 0 for j in free)
        rhs = sum((v for key, v in inside.items() if set(key) & set(js)), Rat(0))
        rows.append((coeffs, rhs))
    return LinearSystem.make(variables, rows)


def dual_region_reduced(messages, side_info, s, deadline=None) -> LinearSystem:
    """dual_region with redundant rows dropped (rates nonnegative).

    The nonnegativity rows participate in the redundancy test but are
    not listed in the result.
    """
    sys = dual_region(messages, side_info, s)
    nvar = len(sys.variables)
    nonneg = [
        (tuple(-1 if i == k else 0 for i in range(nvar)), 0)
        for k in range(nvar)
    ]
    reduced = irredundant(sys.with_rows(nonneg), deadline)
    keep = [row for row in reduced.rows if any(c > 0 for c in row[0])]
    return LinearSystem.make(sys.variables, keep)


def _candidate_sets(p: Problem, j: int):
    """Decoding choices for receiver j, deduplicated and small first.

    Two decoding sets act identically when they leave the same set
    beyond the side information, so candidates are the sets D with
    j in D, D disjoint from A_j; D stands for every K_j with
    K_j \\ A_j = D.
    """
    b = p.interfering(j)
    rest = [k for k in b]
    out = [(j,)]
    for size in range(1, len(rest) + 1):
        for extra in combinations(rest, size):
            out.append(tuple(sorted((j,) + extra)))
    out.sort(key=lambda d: (len(d), d))
    return out


def _member_rows(p: Problem, j, d, point, svars, col):
    """Rows over the S variables pinning receiver j's decode of D at point."""
    a = set(p.side_info[j - 1])
    pool = set(d) | a
    rows = []
    for js in _subsets_of(d):
        need = sum((point[i - 1] for i in js), Rat(0))
        coeffs = [0] * len(svars)
        for key in svars:
            if set(key) <= pool and set(key) & set(js):
                coeffs[col[key]] = -1
        rows.append(normalize_row(coeffs, -need))
    return [r for r in rows if r is not None]


def _budget_rows(p: Problem, svars, col):
    rows = []
    for j in range(1, p.n + 1):
        a = set(p.side_info[j - 1])
        coeffs = [0] * len(svars)
        for key in svars:
            if not set(key) <= a:
                coeffs[col[key]] = 1
        rows.append((tuple(coeffs), Rat(1)))
    for key in svars:
        coeffs = [0] * len(svars)
        coeffs[col[key]] = -1
        rows.append((tuple(coeffs), Rat(0)))
    return rows


def composite_member(p: Problem, point, deadline=None):
    """Certificate placing a rate point inside the composite-coding bound,
    or None when no decoding configuration covers it.

    Searches decoding configurations receiver by receiver, smallest
    decode sets first, pruning any prefix whose accumulated rows are
    already infeasible; the first feasible full configuration (which is
    the lexicographically smallest) is returned with its rates.
    """
    point = tuple(rat(x) for x in point)
    if len(point) != p.n:
        raise ValueError(
            "point has %d coordinates for %d messages" % (len(point), p.n)
        )
    if any(x < 0 or x > 1 for x in point):
        return None
    svars = [tuple(js) for js in _subsets_of(range(1, p.n + 1))]
    col = {key: i for i, key in enumerate(svars)}
    names = tuple(_svar(js) for js in svars)
    base = _budget_rows(p, svars, col)
    # weakest possible covering row per receiver; rejects most outsiders
    relaxed = list(base)
    for j in range(1, p.n + 1):
        coeffs = [0] * len(svars)
        for key in svars:
            if j in key:
                coeffs[col[key]] = -1
        row = normalize_row(coeffs, -point[j - 1])
        if row is not None:
            relaxed.append(row)
    if lp_feasible(LinearSystem(names, tuple(relaxed)), deadline) is None:
        return None
    candidates = [_candidate_sets(p, j) for j in range(1, p.n + 1)]
    chosen = []

    def descend(depth, rows):
        if depth == p.n:
            return lp_feasible(LinearSystem(names, tuple(rows)), deadline)
        for d in candidates[depth]:
            extra = _member_rows(p, depth + 1, d, point, svars, col)
            trial = rows + extra
            if lp_feasible(LinearSystem(names, tuple(trial)), deadline) is None:
                continue
            chosen.append(d)
            found = descend(depth + 1, trial)
            if found is not None:
                return found
            chosen.pop()
        return None

    witness = descend(0, base)
    if witness is None:
        return None
    rates = CompositeRates.make(
        {key: witness[col[key]] for key in svars if witness[col[key]]}
    )
    config = DecodingConfig.make(list(chosen), p.n)
    return AchievabilityCertificate(config, rates, point)


def composite_region_fixed(p: Problem, config, support, deadline=None) -> Region:
    """Rate region of one decoding configuration over a fixed support,
    with the composite rates eliminated exactly.
    """
    if not isinstance(config, DecodingConfig):
        config = DecodingConfig.make(config, p.n)
    if len(config.sets) != p.n:
        raise ValueError(
            "%d decoding sets for %d receivers" % (len(config.sets), p.n)
        )
    supp = []
    seen = set()
    for js in support:
        key = tuple(sorted(set(int(j) for j in js)))
        if not key:
            raise ValueError("empty subset in support")
        if any(j < 1 or j > p.n for j in key):
            raise ValueError("support subset %r out of range" % (key,))
        if key not in seen:
            seen.add(key)
            supp.append(key)
    if len(supp) > FIXED_SUPPORT_LIMIT:
        raise ValueError(
            "support of %d subsets exceeds the elimination guard %d"
            % (len(supp), FIXED_SUPPORT_LIMIT)
        )
    supp.sort(key=lambda js: (len(js), js))
    n = p.n
    rvars = rate_vars(n)
    svars = tuple(_svar(js) for js in supp)
    variables = rvars + svars
    scol = {js: n + i for i, js in enumerate(supp)}
    rows = []
    for j in range(1, n + 1):
        a = set(p.side_info[j - 1])
        kj = set(config.sets[j - 1])
        pool = kj | a
        for js in _subsets_of(kj - a):
            coeffs = [0] * len(variables)
            for i in js:
                coeffs[i - 1] = 1
            for key in supp:
                if set(key) <= pool and set(key) & set(js):
                    coeffs[scol[key]] = -1
            rows.append((tuple(coeffs), 0))
        coeffs = [0] * len(variables)
        for key in supp:
            if not set(key) <= a:
                coeffs[scol[key]] = 1
        rows.append((tuple(coeffs), 1))
    for i in range(len(variables)):
        coeffs = [0] * len(variables)
        coeffs[i] = -1
        rows.append((tuple(coeffs), 0))
    sys = LinearSystem.make(variables, rows)
    projected = fm_eliminate_all(sys, svars, deadline=deadline)
    return region_from_inequalities(projected, deadline)


def symmetric_outer(p: Problem, deadline=None) -> Rat:
    """Largest t with (t, ..., t) in the lifted outer bound's shadow."""
    lifted = build_lifted_outer(p)
    n = p.n

    def merge(row):
        coeffs, rhs = row
        t = sum(coeffs[:n])
        return normalize_row((t,) + tuple(coeffs[n:]), rhs)

    core = [r for r in (merge(row) for row in lifted.core_rows) if r is not None]
    elem = [r for r in (merge(row) for row in lifted.elemental_rows) if r is not None]
    variables = ("t",) + lifted.system.variables[n:]
    obj = [Rat(0)] * len(variables)
    obj[0] = Rat(1)
    value, _ = rowgen_max(variables, core, elem, obj, deadline)
    return value


def symmetric_inner(p: Problem, deadline=None) -> Rat:
    """Best symmetric rate of composite coding, exact branch and bound.

    Explores decoding configurations receiver by receiver; the LP bound
    of a partial configuration can only shrink as receivers are pinned,
    so subtrees whose bound does not beat the incumbent are dropped.
    """
    n = p.n
    svars = [tuple(js) for js in _subsets_of(range(1, n + 1))]
    col = {key: i + 1 for i, key in enumerate(svars)}
    names = ("t",) + tuple(_svar(js) for js in svars)
    width = len(names)
    base = []
    for j in range(1, n + 1):
        a = set(p.side_info[j - 1])
        coeffs = [0] * width
        for key in svars:
            if not set(key) <= a:
                coeffs[col[key]] = 1
        base.append((tuple(coeffs), Rat(1)))
    for key in svars:
        coeffs = [0] * width
        coeffs[col[key]] = -1
        base.append((tuple(coeffs), Rat(0)))
    guard = [0] * width
    guard[0] = 1
    base.append((tuple(guard), Rat(1)))
    neg = [0] * width
    neg[0] = -1
    base.append((tuple(neg), Rat(0)))
    obj = [Rat(0)] * width
    obj[0] = Rat(1)
    candidates = [_candidate_sets(p, j) for j in range(1, n + 1)]
    best = Rat(0)

    def config_rows(j, d):
        a = set(p.side_info[j - 1])
        pool = set(d) | a
        rows = []
        for js in _subsets_of(d):
            coeffs = [0] * width
            coeffs[0] = len(js)
            for key in svars:
                if set(key) <= pool and set(key) & set(js):
                    coeffs[col[key]] = -1
            rows.append((tuple(coeffs), Rat(0)))
        return rows

    def bound(rows):
        res = lp_solve(LinearSystem(names, tuple(rows)), obj, "max", deadline)
        if res[0] != "optimal":
            raise AssertionError("symmetric search LP must stay bounded")
        return res[1]

    def descend(depth, rows):
        nonlocal best
        for d in candidates[depth]:
            trial = rows + config_rows(depth + 1, d)
            value = bound(trial)
            if value <= best:
                continue
            if depth + 1 == n:
                best = value
            else:
                descend(depth + 1, trial)

    if n >= 1:
        descend(0, base)
    return best


def symmetric_capacity(p: Problem, deadline=None) -> dict:
    """Exact symmetric-rate bounds; they agree when capacity is known."""
    inner = symmetric_inner(p, deadline)
    outer = symmetric_outer(p, deadline)
    return {"inner": inner, "outer": outer}
