"""Exact-solution toolkit for the maximally diverse grouping problem.

Partition N elements into G groups with sizes in [a, b] so the sum of
within-group pairwise distances is maximal. The package builds the pairwise
ILP formulations explicitly, solves small and medium instances to proven
optimality, decodes pair-variable solutions back into partitions, and
benchmarks a simple heuristic against the exact optimum.
"""

from .core import (
    AttributeTable,
    DistanceMatrix,
    FeasibilityReport,
    Grouping,
    Instance,
    METRICS,
    SchemaError,
    canonicalize,
    distance_matrix,
    objective_value,
    validate_grouping,
)
from .decode import (
    DecodeReport,
    TheoremReport,
    TransitivityError,
    build_report,
    decode_partition,
    verify_group_count,
)
from .heuristic import HeuristicResult, greedy_construct, local_search, multistart
from .model import (
    CheckReport,
    IlpModel,
    LeaderVar,
    LinearConstraint,
    PairAssignment,
    PairVar,
    build_degree_only,
    build_equal,
    build_model,
    build_unequal,
    check_assignment,
    encode_grouping,
    export_lp,
)
from .solver import (
    DEFAULT_ENUMERATION_CAP,
    OptimalResult,
    SearchState,
    SolveOptions,
    count_feasible_partitions,
    iter_feasible_partitions,
    iter_set_partitions,
    partial_value,
    solve_bnb,
    solve_bruteforce,
    upper_bound,
)

__version__ = "0.1.0"

__all__ = [
    "AttributeTable",
    "CheckReport",
    "DecodeReport",
    "DEFAULT_ENUMERATION_CAP",
    "DistanceMatrix",
    "FeasibilityReport",
    "Grouping",
    "HeuristicResult",
    "IlpModel",
    "Instance",
    "LeaderVar",
    "LinearConstraint",
    "METRICS",
    "OptimalResult",
    "PairAssignment",
    "PairVar",
    "SchemaError",
    "SearchState",
    "SolveOptions",
    "TheoremReport",
    "TransitivityError",
    "build_degree_only",
    "build_equal",
    "build_model",
    "build_report",
    "build_unequal",
    "canonicalize",
    "check_assignment",
    "count_feasible_partitions",
    "decode_partition",
    "distance_matrix",
    "encode_grouping",
    "export_lp",
    "greedy_construct",
    "iter_feasible_partitions",
    "iter_set_partitions",
    "local_search",
    "multistart",
    "objective_value",
    "partial_value",
    "solve_bnb",
    "solve_bruteforce",
    "upper_bound",
    "validate_grouping",
    "verify_group_count",
]
