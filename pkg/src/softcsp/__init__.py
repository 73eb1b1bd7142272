"""softcsp: exact solvers for binary valued CSPs.

Recognizes hybrid tractable instance classes (the joint-winner property and
its laminar convex generalization), solves them exactly through a min-cost
flow reduction, and ships the forbidden-pattern machinery, an independent-set
reduction for crisp binary instances, interval-decomposition solving, model
generators, and a brute-force oracle that grounds every other solver.
"""

from .costs import Cost, INFINITY, ZERO, as_cost, cost_sum
from .instance import Assignment, VcspInstance, Vertex, combine
from .oracle import brute_force_solve, conservative_minimize, dead_end_solutions, enumerate_feasible
from .microstructure import (
    BROKEN_TRIANGLE,
    BtpViolation,
    CONFLICT_PATH,
    ColouredMicrostructure,
    DOUBLE_EXTENSION_3,
    DOUBLE_EXTENSION_4,
    PATTERN_LIBRARY,
    Pattern,
    SHARED_PAIR_SUPPORT,
    build_microstructure,
    check_btp,
    detect_small_graph,
    find_induced_substructure,
    iter_induced_substructures,
    microstructure_dot,
)
from .mwis import WeightedGraph, mwis_reduction, solve_mwis, solve_via_mwis
from .functional import discover_functional_arcs, is_functional_arc, root_set_size
from .intervals import LexInterval, decompose_interval, solve_via_dead_ends
from .jwp import (
    JwpWitness,
    MergeLog,
    ZConfiguration,
    check_jwp,
    eliminate_z,
    expand_independent_pair,
    find_z_configurations,
    first_z_configuration,
    is_zfree,
)
from .hierarchy import CliqueHierarchy, CliqueNode, extract_clique_hierarchy
from .flows import (
    Arc,
    FlowNetwork,
    IntegralFlow,
    build_network,
    canonical_flow,
    extract_solution,
    min_cost_flow,
    network_dot,
    solve_flow,
)
from .noc import (
    ConvexStepFn,
    NocInstance,
    jwp_to_noc,
    noc_brute_force,
    noc_objective,
    nogoods_to_noc,
    solve_noc,
    validate_noc,
)
from .models import (
    SchedulingSpec,
    check_max2sat_jwp,
    gen_btp_independent_set,
    gen_courses,
    gen_office,
    gen_random_jwp,
    gen_random_noc,
    gen_scheduling,
    gen_softalldiff,
    scheduling_total_time,
    softalldiff_pair_count,
)
from .fileformat import parse, parse_file, serialize
from . import errors

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
