"""Rate-space polytopes kept in double description: facets and vertices.

A Region always carries both descriptions, each certified from the other
with exact arithmetic, so containment and equality checks are algebraic
rather than numeric.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..rat import rat, rat_str
from .dd import _gauss_rank, hull_system, vertex_enumerate
from .linsys import LinearSystem, row_string


def rate_vars(n):
    return tuple("R%d" % j for j in range(1, n + 1))


@dataclass(frozen=True)
class Region:
    facets: LinearSystem
    vertices: tuple

    @property
    def variables(self):
        return self.facets.variables

    @property
    def dim(self):
        return len(self.facets.variables)

    def is_empty(self):
        return not self.vertices

    def pretty(self):
        lines = [self.facets.pretty()]
        lines.append("vertices:")
        for v in self.vertices:
            lines.append("  (%s)" % ", ".join(rat_str(x) for x in v))
        return "\n".join(lines)


def region_from_points(variables, points, deadline=None) -> Region:
    """Convex hull of exact points, facets and extreme points."""
    variables = tuple(variables)
    n = len(variables)
    cleaned = []
    seen = set()
    for p in points:
        q = tuple(rat(x) for x in p)
        if len(q) != n:
            raise ValueError("point has %d coordinates, expected %d" % (len(q), n))
        if q not in seen:
            seen.add(q)
            cleaned.append(q)
    facets = hull_system(variables, cleaned, deadline)
    verts = [p for p in cleaned if _is_vertex(facets, p, n)]
    verts.sort()
    return Region(facets, tuple(verts))


def _is_vertex(facets: LinearSystem, point, n) -> bool:
    tight = [
        coeffs for coeffs, rhs in facets.rows
        if sum(c * x for c, x in zip(coeffs, point)) == rhs
    ]
    return _gauss_rank(tight) == n


def region_from_inequalities(sys: LinearSystem, deadline=None) -> Region:
    """Region a bounded system describes; facets rebuilt from its vertices.

    Raises UnboundedError on unbounded input; an infeasible system gives
    the empty Region.
    """
    verts = vertex_enumerate(sys)
    facets = hull_system(sys.variables, verts, deadline)
    return Region(facets, tuple(verts))


def region_contains(outer: Region, point) -> bool:
    """Exact membership of a point in a Region."""
    p = tuple(rat(x) for x in point)
    return outer.facets.satisfies(p)


def region_equal(a: Region, b: Region) -> bool:
    """Exact set equality, decided on canonical vertex lists."""
    return a.variables == b.variables and a.vertices == b.vertices


def region_to_dict(region: Region) -> dict:
    return {
        "variables": list(region.variables),
        "facets": [
            row_string(region.variables, row) for row in region.facets.rows
        ],
        "vertices": [
            [rat_str(x) for x in v] for v in region.vertices
        ],
    }
