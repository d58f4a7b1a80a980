"""Projection of exact linear systems by Fourier-Motzkin elimination.

Every derived row carries the set of input rows it descends from. After k
eliminations a row combining more than k+1 input rows is implied by the
other derived rows (Imbert's counting criterion) and is dropped with no
LP call; syntactic duplicates keep the smallest ancestry. Each step then
strips rows the rest already imply, using exact LPs, so intermediate
systems stay small.
"""

from __future__ import annotations

from ..rat import Rat
from .linsys import LinearSystem, normalize_row
from .simplex import lp_feasible, lp_solve


def irredundant(sys: LinearSystem, deadline=None) -> LinearSystem:
    """Minimal subsystem with the same solution set.

    Each row is dropped iff its optimum over the remaining rows already
    stays within its bound. An infeasible input collapses to the single
    marker row 0 <= -1.
    """
    if not sys.rows:
        return sys
    if sys.trivially_infeasible() or lp_feasible(sys, deadline) is None:
        zero = tuple(0 for _ in sys.variables)
        return LinearSystem(sys.variables, ((zero, Rat(-1)),))
    keep = list(sys.rows)
    i = 0
    while i < len(keep):
        if len(keep) == 1:
            break
        coeffs, rhs = keep[i]
        rest = keep[:i] + keep[i + 1 :]
        trial = LinearSystem(sys.variables, tuple(rest))
        res = lp_solve(trial, coeffs, "max", deadline)
        if res[0] == "optimal" and res[1] <= rhs:
            keep = rest
        else:
            i += 1
    return LinearSystem(sys.variables, tuple(keep))


def _step(rows, v, nvar, max_hist):
    """Eliminate column v from (coeffs, rhs, history) rows.

    Returns rows over the surviving columns in the original column order
    with column v removed, deduped, Imbert-pruned against max_hist.
    """
    pos = []
    neg = []
    out = {}

    def add(coeffs, rhs, hist):
        if len(hist) > max_hist:
            return
        norm = normalize_row(coeffs, rhs)
        if norm is None:
            return
        old = out.get(norm)
        if old is None or len(hist) < len(old):
            out[norm] = hist

    keep_cols = [k for k in range(nvar) if k != v]
    for coeffs, rhs, hist in rows:
        c = coeffs[v]
        if c > 0:
            pos.append((coeffs, rhs, hist))
        elif c < 0:
            neg.append((coeffs, rhs, hist))
        else:
            add([coeffs[k] for k in keep_cols], rhs, hist)
    for pc, pr, ph in pos:
        a = pc[v]
        for nc, nr, nh in neg:
            b = -nc[v]
            hist = ph | nh
            if len(hist) > max_hist:
                continue
            add(
                [b * pc[k] + a * nc[k] for k in keep_cols],
                b * pr + a * nr,
                hist,
            )
    return [(c, r, h) for (c, r), h in sorted(out.items(), key=lambda kv: kv[0])]


def _greedy_var(rows, candidates):
    """Next column to eliminate: fewest pos*neg pairings, lowest index on ties."""
    best = None
    best_cost = None
    for v in candidates:
        p = sum(1 for coeffs, _, _ in rows if coeffs[v] > 0)
        n = sum(1 for coeffs, _, _ in rows if coeffs[v] < 0)
        cost = p * n - p - n
        if best_cost is None or cost < best_cost:
            best_cost = cost
            best = v
    return best

def fm_eliminate_all(sys: LinearSystem, drop, *, cleanup=True, deadline=None) -> LinearSystem:
    """Project sys onto the variables not named in drop.

    drop is an iterable of variable names; elimination order is chosen
    greedily by fewest generated rows. With cleanup (the default) every
    step ends with an exact LP redundancy sweep.
    """
    drop_idx = sorted({sys.var_index(name) for name in drop})
    if not drop_idx:
        return irredundant(sys, deadline) if cleanup else sys
    cols = list(range(len(sys.variables)))
    rows = [(list(c), r, frozenset([i])) for i, (c, r) in enumerate(sys.rows)]
    rows = [(tuple(c), r, h) for c, r, h in rows]
    targets = set(drop_idx)
    steps = 0
    while targets:
        local = {cols.index(v) for v in targets}
        v = _greedy_var(rows, sorted(local))
        steps += 1
        rows = _step(rows, v, len(cols), steps + 1)
        removed = cols.pop(v)
        targets.discard(removed)
        if cleanup and rows:
            names = tuple(sys.variables[k] for k in cols)
            trimmed = irredundant(
                LinearSystem(names, tuple((c, r) for c, r, _ in rows)), deadline
            )
            hist = {(c, r): h for c, r, h in rows}
            full = frozenset(range(len(sys.rows)))
            rows = [(c, r, hist.get((c, r), full)) for c, r in trimmed.rows]
    names = tuple(sys.variables[k] for k in cols)
    return LinearSystem.make(names, [(c, r) for c, r, _ in rows])


def fm_eliminate(sys: LinearSystem, var, *, cleanup=True, deadline=None) -> LinearSystem:
    """Eliminate a single named variable from sys."""
    return fm_eliminate_all(sys, [var], cleanup=cleanup, deadline=deadline)
