"""Submodular lifted outer bound and the acyclic-subset relaxation.

The lifted system lives over rates R_1..R_n plus one variable T_J per
nonempty subset J of messages, constrained to be a normalized polymatroid
(elemental monotonicity and submodularity rows, T of the full set pinned
to 1) and coupled to the rates by R_j <= T_{{j} u B_j} - T_{B_j}, where
B_j is receiver j's interfering set. T of the empty set is substituted
away as 0.

The rate-space region is recovered by a support-function loop: grow a
convex hull of known feasible rate points, and for each tentative hull
facet ask an exact LP over the lifted system whether some lifted point
beats it. Confirmed facets certify the hull from outside, hull points
certify it from inside, so the returned double description is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .problem import CANONICAL_LIMIT, Problem, ProblemError
from .rat import Rat
from .geometry import (
    IncrementalHull,
    LinearSystem,
    Region,
    lp_solve,
    normalize_row,
    rate_vars,
    region_from_inequalities,
    region_from_points,
    vertex_enumerate,
)


def subset_var(js):
    return "T" + "".join(str(j) for j in sorted(js))


def _nonempty_subsets(n):
    out = []
    for size in range(1, n + 1):
        out.extend(combinations(range(1, n + 1), size))
    return out


@dataclass(frozen=True)
class LiftedOuterSystem:
    n: int
    system: LinearSystem
    tvar: dict
    core_rows: tuple = ()
    elemental_rows: tuple = ()

    def t_index(self, js):
        return self.system.var_index(self.tvar[frozenset(js)])


def build_lifted_outer(p: Problem) -> LiftedOuterSystem:
    """Lifted polymatroid system whose rate shadow is the outer bound."""
    n = p.n
    if n > CANONICAL_LIMIT:
        raise ProblemError("%d messages exceed the supported limit %d" % (n, CANONICAL_LIMIT))
    subsets = _nonempty_subsets(n)
    tvar = {frozenset(js): subset_var(js) for js in subsets}
    variables = rate_vars(n) + tuple(subset_var(js) for js in subsets)
    nvar = len(variables)
    col = {name: k for k, name in enumerate(variables)}

    def trow(entries, rhs):
        coeffs = [0] * nvar
        for name, c in entries:
            coeffs[col[name]] += c
        return normalize_row(coeffs, rhs)

    core = []
    full = subset_var(range(1, n + 1))
    core.append(trow([(full, 1)], 1))
    core.append(trow([(full, -1)], -1))
    for j in range(1, n + 1):
        rj = "R%d" % j
        b = p.interfering(j)
        entries = [(rj, 1), (subset_var(set(b) | {j}), -1)]
        if b:
            entries.append((subset_var(b), 1))
        core.append(trow(entries, 0))
        core.append(trow([(rj, -1)], 0))
    elemental = []
    ground = list(range(1, n + 1))
    for size in range(0, n):
        for base in combinations(ground, size):
            rest = [i for i in ground if i not in base]
            for i in rest:
                # T_{J u i} >= T_J
                entries = [(subset_var(set(base) | {i}), -1)]
                if base:
                    entries.append((subset_var(base), 1))
                elemental.append(trow(entries, 0))
            for i, k in combinations(rest, 2):
                # T_{J u i} + T_{J u k} >= T_J + T_{J u i u k}
                entries = [
                    (subset_var(set(base) | {i}), -1),
                    (subset_var(set(base) | {k}), -1),
                    (subset_var(set(base) | {i, k}), 1),
                ]
                if base:
                    entries.append((subset_var(base), 1))
                elemental.append(trow(entries, 0))
    return LiftedOuterSystem(
        n,
        LinearSystem.make(variables, core + elemental),
        tvar,
        tuple(core),
        tuple(elemental),
    )


_ROWGEN_BATCH = 32


def rowgen_max(variables, core_rows, elemental_rows, objective, deadline=None, active=None):
    """Exact max of a linear objective over core + elemental rows.

    Optimizes over the core rows plus a working subset of the elemental
    rows, then admits the most violated elemental rows until an optimizer
    satisfies them all, which certifies optimality for the full system.
    The full system must be a nonempty polytope. active, if given, is a
    mutable set of elemental row indices reused as the working subset
    across calls. Returns (value, point).
    """
    if active is None:
        active = set()
    while True:
        work = list(core_rows) + [elemental_rows[i] for i in sorted(active)]
        res = lp_solve(LinearSystem(variables, tuple(work)), objective, "max", deadline)
        if res[0] == "unbounded":
            ray = res[1]
            scored = []
            for i, (coeffs, _) in enumerate(elemental_rows):
                if i in active:
                    continue
                gain = sum(c * d for c, d in zip(coeffs, ray) if c)
                if gain > 0:
                    scored.append((gain, i))
            if not scored:
                raise AssertionError("full system cannot be unbounded")
            scored.sort(key=lambda t: (-t[0], t[1]))
            active.update(i for _, i in scored[:_ROWGEN_BATCH])
            continue
        value, x = res[1], res[2]
        scored = []
        for i, (coeffs, rhs) in enumerate(elemental_rows):
            if i in active:
                continue
            slack = sum(c * v for c, v in zip(coeffs, x) if c) - rhs
            if slack > 0:
                scored.append((slack, i))
        if not scored:
            return value, x
        scored.sort(key=lambda t: (-t[0], t[1]))
        active.update(i for _, i in scored[:_ROWGEN_BATCH])


def lifted_max(lifted: LiftedOuterSystem, direction, deadline=None, active=None):
    """Exact max of direction . R over the lifted system.

    Returns (value, full lifted point); direction may cover just the
    rate variables or all lifted variables.
    """
    nvar = len(lifted.system.variables)
    obj = [Rat(0)] * nvar
    for j, c in enumerate(direction):
        obj[j] = Rat(c)
    return rowgen_max(
        lifted.system.variables,
        lifted.core_rows,
        lifted.elemental_rows,
        obj,
        deadline,
        active,
    )


def outer_region(p: Problem, deadline=None) -> Region:
    """Rate region the lifted system projects to, as exact facets+vertices."""
    lifted = build_lifted_outer(p)
    n = p.n
    hull = IncrementalHull(rate_vars(n))
    hull.add_point(tuple(Rat(0) for _ in range(n)))
    support = {}
    active = set()
    while True:
        grew = False
        for coeffs, rhs in hull.facet_rows():
            known = support.get(coeffs)
            if known is not None:
                continue
            value, point = lifted_max(lifted, coeffs, deadline, active)
            support[coeffs] = value
            if value > rhs:
                hull.add_point(point[:n])
                grew = True
        if not grew:
            break
    return region_from_points(rate_vars(n), hull.points, deadline)


def outer_region_direct(p: Problem, deadline=None) -> Region:
    """Same region by enumerating lifted vertices and projecting.

    Exponentially expensive; kept as an independent route for
    cross-checking the support-function loop on small instances.
    """
    lifted = build_lifted_outer(p)
    verts = vertex_enumerate(lifted.system)
    points = sorted({v[: p.n] for v in verts})
    return region_from_points(rate_vars(p.n), points, deadline)


def _induced_acyclic(p: Problem, js) -> bool:
    js = set(js)
    pending = {k: sum(1 for j in p.side_info[k - 1] if j in js) for k in js}
    queue = [k for k, deg in pending.items() if deg == 0]
    seen = 0
    out_edges = {j: [k for k in js if j in p.side_info[k - 1]] for j in js}
    while queue:
        j = queue.pop()
        seen += 1
        for k in out_edges[j]:
            pending[k] -= 1
            if pending[k] == 0:
                queue.append(k)
    return seen == len(js)


def maximal_acyclic_subsets(p: Problem):
    """Inclusion-maximal message subsets whose induced digraph is acyclic."""
    n = p.n
    ground = list(range(1, n + 1))
    acyclic = set()
    for size in range(1, n + 1):
        for js in combinations(ground, size):
            if _induced_acyclic(p, js):
                acyclic.add(frozenset(js))
    out = []
    for js in acyclic:
        if any(frozenset(js | {v}) in acyclic for v in ground if v not in js):
            continue
        out.append(tuple(sorted(js)))
    out.sort(key=lambda js: (len(js), js))
    return out


def mais_region(p: Problem) -> Region:
    """One row per maximal acyclic subset, inside the unit box."""
    n = p.n
    rows = []
    for js in maximal_acyclic_subsets(p):
        coeffs = tuple(1 if j in js else 0 for j in range(1, n + 1))
        rows.append((coeffs, 1))
    for j in range(n):
        e = [0] * n
        e[j] = 1
        rows.append((tuple(e), 1))
        e2 = [0] * n
        e2[j] = -1
        rows.append((tuple(e2), 0))
    return region_from_inequalities(LinearSystem.make(rate_vars(n), rows))
