"""Double description over exact integers: cones, vertices, convex hulls.

A DDCone holds the generators of {x : a_i . x <= 0} as a lineality basis
plus extreme rays (modulo lineality), updated one inequality at a time.
Rays carry bitmasks of the inequalities they satisfy tightly, so the
adjacency test for combining rays is purely combinatorial.

Polyhedra ride on top by homogenization (extra coordinate x0, a point x
becomes the ray (x, 1)), and convex hulls by polarity (the inequalities
valid for a point set form a cone in facet space).
"""

from __future__ import annotations

from math import gcd, lcm

from ..rat import Rat, rat
from .linsys import LinearSystem
from .fm import irredundant


class UnboundedError(Exception):
    """Vertex enumeration hit an unbounded polyhedron.

    direction is a nonzero recession direction witnessing it.
    """

    def __init__(self, direction):
        self.direction = tuple(direction)
        super().__init__("polyhedron is unbounded along %r" % (self.direction,))


def _norm_vec(vec):
    """Scale an exact vector to coprime integers, same orientation."""
    vals = [rat(v) for v in vec]
    den = 1
    for v in vals:
        den = lcm(den, int(v.denominator))
    ints = [int(v * den) for v in vals]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _gauss_rank(vectors):
    """Rank of a list of exact vectors, fraction-free elimination."""
    rows = [list(v) for v in vectors if any(v)]
    rank = 0
    col = 0
    width = len(rows[0]) if rows else 0
    while rank < len(rows) and col < width:
        piv = None
        for i in range(rank, len(rows)):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pv = rows[rank][col]
        for i in range(rank + 1, len(rows)):
            f = rows[i][col]
            if f:
                rows[i] = [pv * x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


class DDCone:
    """Generators of an intersection of homogeneous halfspaces.

    Starts as all of R^dim. rays is a list of (vector, tightmask) pairs;
    lineality is a list of vectors. All vectors are coprime-integer
    tuples.
    """

    def __init__(self, dim):
        self.dim = dim
        self.lineality = [
            tuple(1 if k == j else 0 for k in range(dim)) for j in range(dim)
        ]
        self.rays = []
        self.nrows = 0

    def add_inequality(self, a):
        """Cut the cone with a . x <= 0."""
        a = _norm_vec(a)
        bit = 1 << self.nrows
        prior = bit - 1
        piv = None
        for i, l in enumerate(self.lineality):
            if _dot(a, l) != 0:
                piv = i
                break
        if piv is not None:
            star = self.lineality.pop(piv)
            d = _dot(a, star)
            if d > 0:
                star = tuple(-v for v in star)
                d = -d
            self.lineality = [
                _norm_vec([d * lv - _dot(a, l) * sv for lv, sv in zip(l, star)])
                for l in self.lineality
            ]
            new_rays = []
            for r, mask in self.rays:
                s = _dot(a, r)
                if s == 0:
                    new_rays.append((r, mask | bit))
                else:
                    shifted = _norm_vec(
                        [-d * rv + s * sv for rv, sv in zip(r, star)]
                    )
                    new_rays.append((shifted, mask | bit))
            new_rays.append((star, prior))
            self.rays = new_rays
            self.nrows += 1
            return
        pos = []
        zero = []
        neg = []
        for r, mask in self.rays:
            s = _dot(a, r)
            if s > 0:
                pos.append((r, mask, s))
            elif s < 0:
                neg.append((r, mask, s))
            else:
                zero.append((r, mask | bit))
        if not pos:
            self.rays = zero + [(r, m) for r, m, _ in neg]
            self.nrows += 1
            return
        keep = zero + [(r, m) for r, m, _ in neg]
        others = [m for _, m in self.rays]
        fresh = []
        for p, pmask, ps in pos:
            for q, qmask, qs in neg:
                common = pmask & qmask
                adjacent = True
                for m in others:
                    if m != pmask and m != qmask and (m & common) == common:
                        adjacent = False
                        break
                if adjacent:
                    w = _norm_vec([ps * qv - qs * pv for pv, qv in zip(p, q)])
                    fresh.append((w, (common | bit)))
        self.rays = keep + fresh
        self.nrows += 1

    def generators(self):
        return list(self.lineality), [r for r, _ in self.rays]


def cone_from_rows(dim, rows):
    cone = DDCone(dim)
    for a in rows:
        cone.add_inequality(a)
    return cone


def vertex_enumerate(sys: LinearSystem):
    """All vertices of the polytope a system describes, sorted.

    Returns [] when the system is infeasible; raises UnboundedError with
    a recession direction when the feasible set is unbounded.
    """
    n = len(sys.variables)
    if sys.trivially_infeasible():
        return []
    cone = DDCone(n + 1)
    cone.add_inequality(tuple(0 for _ in range(n)) + (-1,))
    for coeffs, rhs in sys.rows:
        cone.add_inequality(tuple(coeffs) + (-rhs,))
    lineality, rays = cone.generators()
    points = [r for r in rays if r[n] > 0]
    if not points:
        return []
    for l in lineality:
        if any(l[:n]):
            raise UnboundedError(l[:n])
    for r in rays:
        if r[n] == 0 and any(r[:n]):
            raise UnboundedError(r[:n])
    verts = []
    for r in points:
        scale = r[n]
        verts.append(tuple(Rat(v) / scale for v in r[:n]))
    verts.sort()
    return verts


def hull_system(variables, points, deadline=None) -> LinearSystem:
    """Irredundant facet system of the convex hull of exact points."""
    n = len(variables)
    cone = DDCone(n + 1)
    for p in points:
        if len(p) != n:
            raise ValueError("point has %d coordinates, expected %d" % (len(p), n))
        cone.add_inequality(tuple(rat(x) for x in p) + (-1,))
    lineality, rays = cone.generators()
    rows = []
    for g in lineality:
        rows.append((g[:n], Rat(g[n])))
        rows.append((tuple(-v for v in g[:n]), Rat(-g[n])))
    for g in rays:
        rows.append((g[:n], Rat(g[n])))
    return irredundant(LinearSystem.make(variables, rows), deadline)


class IncrementalHull:
    """Convex hull of a growing point set, via the polar cone.

    Adding a point is one DDCone cut; the current facet system is read
    off the cone's generators at any time.
    """

    def __init__(self, variables):
        self.variables = tuple(variables)
        self._cone = DDCone(len(self.variables) + 1)
        self.points = []

    def add_point(self, point):
        p = tuple(rat(x) for x in point)
        if len(p) != len(self.variables):
            raise ValueError(
                "point has %d coordinates, expected %d"
                % (len(p), len(self.variables))
            )
        self._cone.add_inequality(p + (-1,))
        self.points.append(p)

    def facet_rows(self):
        """Current valid inequalities (coeffs, rhs), unfiltered."""
        n = len(self.variables)
        lineality, rays = self._cone.generators()
        rows = []
        for g in lineality:
            rows.append((g[:n], Rat(g[n])))
            rows.append((tuple(-v for v in g[:n]), Rat(-g[n])))
        for g in rays:
            rows.append((g[:n], Rat(g[n])))
        return rows

    def system(self) -> LinearSystem:
        return LinearSystem.make(self.variables, self.facet_rows())
