"""Exact rational linear programming by two-phase dense simplex.

The pivot rule is deterministic and anti-cycling: Dantzig's largest
reduced cost (ties to the lowest column index) while the objective moves,
switching to pure lowest-index Bland pivoting whenever 24 consecutive
degenerate pivots stall, and back after progress. Witnesses are therefore
reproducible and independent of iteration luck.

lp_solve treats variables as free (sign-unrestricted); variables that the
system itself pins with an explicit -x <= 0 row are solved natively, the
rest are split into positive and negative parts.
"""

from __future__ import annotations

import time

from ..rat import Rat
from .linsys import LinearSystem

_STALL_LIMIT = 24
_CLOCK_STRIDE = 128


class LpBudgetExceeded(Exception):
    """Raised when an LP runs past its caller-supplied deadline."""


def _check_deadline(deadline):
    if deadline is not None and time.monotonic() > deadline:
        raise LpBudgetExceeded()


class _Tableau:
    """max c.x  s.t.  A x <= b,  x >= 0, dense exact tableau."""

    def __init__(self, a_rows, b, deadline=None):
        self.m = len(a_rows)
        self.n = len(a_rows[0]) if self.m else 0
        self.deadline = deadline
        zero = Rat(0)
        one = Rat(1)
        self.rows = []
        for i, (arow, bi) in enumerate(zip(a_rows, b)):
            row = [Rat(v) for v in arow]
            row.extend(one if k == i else zero for k in range(self.m))
            row.append(Rat(bi))
            self.rows.append(row)
        self.basis = [self.n + i for i in range(self.m)]
        self.ncols = self.n + self.m

    def _pivot(self, r, e):
        rows = self.rows
        piv = rows[r]
        pe = piv[e]
        if pe != 1:
            inv = 1 / pe
            for c, v in enumerate(piv):
                if v:
                    piv[c] = v * inv
        nz = [c for c, v in enumerate(piv) if v]
        for i, row in enumerate(rows):
            if i == r:
                continue
            f = row[e]
            if f:
                for c in nz:
                    row[c] = row[c] - f * piv[c]
        obj = self.obj
        f = obj[e]
        if f:
            for c in nz:
                obj[c] = obj[c] - f * piv[c]
        self.basis[r] = e

    def _ratio_row(self, e):
        best = None
        best_row = -1
        best_var = -1
        for i, row in enumerate(self.rows):
            t = row[e]
            if t > 0:
                ratio = row[-1] / t
                if best is None or ratio < best or (ratio == best and self.basis[i] < best_var):
                    best = ratio
                    best_row = i
                    best_var = self.basis[i]
        return best_row

    def _entering(self, bland, skip=-1):
        obj = self.obj
        if bland:
            for j in range(self.ncols):
                if j != skip and obj[j] > 0:
                    return j
            return -1
        best = -1
        best_v = None
        for j in range(self.ncols):
            if j != skip and obj[j] > 0 and (best_v is None or obj[j] > best_v):
                best_v = obj[j]
                best = j
        return best

    def _run(self, skip=-1):
        """Pivot to optimality. Returns None, or the entering column on unboundedness."""
        stall = 0
        bland = False
        count = 0
        while True:
            count += 1
            if count % _CLOCK_STRIDE == 0:
                _check_deadline(self.deadline)
            e = self._entering(bland, skip)
            if e < 0:
                return None
            r = self._ratio_row(e)
            if r < 0:
                return e
            before = self.obj[-1]
            self._pivot(r, e)
            if self.obj[-1] == before:
                stall += 1
                if stall > _STALL_LIMIT:
                    bland = True
            else:
                stall = 0
                bland = False

    def set_objective(self, c):
        """Install objective max c.x, rebuilt against the current basis."""
        zero = Rat(0)
        full = [Rat(v) for v in c]
        full.extend(zero for _ in range(self.ncols - len(full)))
        obj = list(full)
        obj.append(zero)
        for i, bv in enumerate(self.basis):
            cb = full[bv]
            if cb:
                row = self.rows[i]
                for c, v in enumerate(row):
                    if v:
                        obj[c] = obj[c] - cb * v
        # obj[-1] accumulates -value, negated at read time
        self.obj = obj

    def value(self):
        return -self.obj[-1]

    def solution(self):
        x = [Rat(0)] * self.n
        for i, bv in enumerate(self.basis):
            if bv < self.n:
                x[bv] = self.rows[i][-1]
        return x

    def ray(self, e):
        """Unbounded direction for entering column e, structural part."""
        d = [Rat(0)] * self.ncols
        if e < len(d):
            d[e] = Rat(1)
        for i, bv in enumerate(self.basis):
            d[bv] = -self.rows[i][e]
        return d[: self.n]


def solve_nonneg(a_rows, b, c, deadline=None):
    """max c.x s.t. A x <= b, x >= 0, exactly.

    Returns ("optimal", value, x) | ("infeasible",) | ("unbounded", ray).
    """
    m = len(a_rows)
    if m == 0:
        if all(Rat(v) <= 0 for v in c):
            return ("optimal", Rat(0), [Rat(0)] * len(c))
        j = max(range(len(c)), key=lambda i: Rat(c[i]))
        ray = [Rat(0)] * len(c)
        ray[j] = Rat(1)
        return ("unbounded", ray)
    t = _Tableau(a_rows, b, deadline)
    if any(Rat(bi) < 0 for bi in b):
        # phase 1: max -x0 with column x0 = -1 in every row
        aux = t.ncols
        for row in t.rows:
            row.insert(-1, Rat(-1))
        t.ncols += 1
        t.set_objective([Rat(0)] * aux + [Rat(-1)])
        r = min(range(t.m), key=lambda i: (t.rows[i][-1], i))
        t._pivot(r, aux)
        if t._run() is not None:
            raise AssertionError("phase 1 cannot be unbounded")
        if t.value() < 0:
            return ("infeasible",)
        if aux in t.basis:
            r = t.basis.index(aux)
            for j in range(t.ncols):
                if j != aux and t.rows[r][j] != 0:
                    t._pivot(r, j)
                    break
            else:
                del t.rows[r]
                del t.basis[r]
                t.m -= 1
        for row in t.rows:
            del row[aux]
        t.ncols -= 1
    t.set_objective(c)
    e = t._run()
    if e is not None:
        return ("unbounded", t.ray(e))
    return ("optimal", t.value(), t.solution())


def _split_vars(sys: LinearSystem):
    """Variables needing a sign split: those without an explicit -x <= 0 row."""
    covered = set()
    nvar = len(sys.variables)
    for coeffs, rhs in sys.rows:
        if rhs != 0:
            continue
        nz = [j for j, c in enumerate(coeffs) if c]
        if len(nz) == 1 and coeffs[nz[0]] == -1:
            covered.add(nz[0])
    return [j for j in range(nvar) if j not in covered]


def lp_solve(sys: LinearSystem, objective, sense: str = "max", deadline=None):
    """Exact optimum of a linear objective over a LinearSystem.

    Variables are free unless the system itself contains their -x <= 0
    row. Returns ("optimal", value, point) with point aligned to
    sys.variables, ("infeasible",), or ("unbounded", direction).
    """
    nvar = len(sys.variables)
    if len(objective) != nvar:
        raise ValueError(
            "objective has %d entries for %d variables" % (len(objective), nvar)
        )
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    if sys.trivially_infeasible():
        return ("infeasible",)
    obj = [Rat(v) for v in objective]
    if sense == "min":
        obj = [-v for v in obj]
    split = _split_vars(sys)
    a_rows = []
    for coeffs, rhs in sys.rows:
        row = list(coeffs) + [-coeffs[j] for j in split]
        a_rows.append(row)
    b = [rhs for _, rhs in sys.rows]
    c = obj + [-obj[j] for j in split]
    res = solve_nonneg(a_rows, b, c, deadline)
    if res[0] == "infeasible":
        return res
    if res[0] == "unbounded":
        # the ray is a feasible recession direction improving the chosen
        # sense: c.d > 0 for max, c.d < 0 for min (internal obj was -c)
        ray = res[1]
        direction = ray[:nvar]
        for k, j in enumerate(split):
            direction[j] = direction[j] - ray[nvar + k]
        return ("unbounded", tuple(direction))
    _, value, x = res
    point = x[:nvar]
    for k, j in enumerate(split):
        point[j] = point[j] - x[nvar + k]
    if sense == "min":
        value = -value
    return ("optimal", value, tuple(point))


def lp_feasible(sys: LinearSystem, deadline=None):
    """Feasibility check; returns a witness point or None."""
    res = lp_solve(sys, [0] * len(sys.variables), "max", deadline)
    if res[0] == "optimal":
        return res[2]
    return None
