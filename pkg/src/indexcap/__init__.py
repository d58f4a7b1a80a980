"""Exact inner and outer bounds on index coding capacity regions."""

__version__ = "0.1.0"

from .problem import (  # noqa: F401
    CanonicalKey,
    Problem,
    ProblemError,
    canonical_key,
    enumerate_problems,
    interfering_sets,
    parse_problem,
    relabel,
)
from .geometry import (  # noqa: F401
    LinearSystem,
    LpBudgetExceeded,
    Region,
    UnboundedError,
    fm_eliminate,
    fm_eliminate_all,
    hull_system,
    irredundant,
    lp_feasible,
    lp_solve,
    rate_vars,
    region_contains,
    region_equal,
    region_from_inequalities,
    region_from_points,
    region_to_dict,
    vertex_enumerate,
)
from .outer_bound import (  # noqa: F401
    build_lifted_outer,
    lifted_max,
    mais_region,
    maximal_acyclic_subsets,
    outer_region,
)
from .inner_bounds import (  # noqa: F401
    AchievabilityCertificate,
    CompositeRates,
    DecodingConfig,
    certificate_valid,
    composite_member,
    composite_region_fixed,
    dual_region,
    dual_region_reduced,
    flat_region,
    flat_timeshare_region,
    symmetric_capacity,
)
from .verify import (  # noqa: F401
    VerificationRecord,
    sweep,
    verify_capacity,
)
