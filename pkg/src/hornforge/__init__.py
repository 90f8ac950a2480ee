"""hornforge: pure Horn function toolkit.

Forward chaining, implicate and equivalence tests, resolution, prime and
irredundant reduction, label-cover instances with exact desk-scale solvers,
the gap-preserving CNF/3-CNF gadget generators, and a brute-force exact
minimization oracle.
"""

__version__ = "0.1.0"

from .errors import HornforgeError, InputError, ResourceLimitError
from .horn import (
    FCTrace,
    PureHornClause,
    PureHornCNF,
    VarRegistry,
    closure_of,
    enumerate_prime_implicates,
    equivalent,
    equivalent_exhaustive,
    exclusive_component,
    forward_chain,
    irredundant_reduce,
    is_closed_under_fc,
    is_implicate,
    minimize_heuristic,
    prime_reduce_clause,
    resolution_closure,
    resolvent,
)
from .hornio import parse_horn, print_horn
from .kernel import KERNEL_NAME
from .labelcover import (
    CoverReport,
    Labeling,
    LCInstance,
    check_cover,
    packing_value,
    refine,
    round_cover_to_packing,
    solve_exact_cover,
    solve_exact_packing,
    tighten,
)
from .lcgen import claw_instance, random_biregular_instance, random_instance, sat_to_lc
from .oracle import MinimizationResult, OracleLimits, minimize_exact, tau_lower_bound_heads
from .reduction import (
    ReductionArtifact,
    ReductionParams,
    build_cnf,
    build_phi_f,
    extract_covers,
    verify_sandwich,
)
from .reduction3 import build_3cnf, degree_histogram, literal_count_relation
