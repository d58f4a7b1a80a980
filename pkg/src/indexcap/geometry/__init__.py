from .linsys import LinearSystem, normalize_row, row_string
from .simplex import LpBudgetExceeded, lp_feasible, lp_solve
from .fm import fm_eliminate, fm_eliminate_all, irredundant
from .dd import DDCone, IncrementalHull, UnboundedError, hull_system, vertex_enumerate
from .region import (
    Region,
    rate_vars,
    region_contains,
    region_equal,
    region_from_inequalities,
    region_from_points,
    region_to_dict,
)

__all__ = [
    "DDCone",
    "IncrementalHull",
    "LinearSystem",
    "LpBudgetExceeded",
    "Region",
    "UnboundedError",
    "fm_eliminate",
    "fm_eliminate_all",
    "hull_system",
    "irredundant",
    "lp_feasible",
    "lp_solve",
    "normalize_row",
    "rate_vars",
    "region_contains",
    "region_equal",
    "region_from_inequalities",
    "region_from_points",
    "region_to_dict",
    "row_string",
]
