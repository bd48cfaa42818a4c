"""Functional privacy of linear dynamic networks via observability blocking.

Decide whether a linear functional of network states can be inferred from
node measurements, and compute minimum node sets to block from measurement
so that it cannot be, regardless of the output matrix.
"""

from .blocking import (
    BlockingSolution,
    CandidateSet,
    alg2_restricted,
    filter_feasible,
    filter_feasible_direct,
    minimal_deficiency_sets,
    solve_problem1,
    union_baseline,
)
from .errors import (
    CertificationFailed,
    DimensionMismatch,
    EmptyCluster,
    EmptyRank,
    IndexOutOfRange,
    MultiplicityBoundExceeded,
    NetprivError,
    NotDiagonalizable,
    ParseError,
    RankDeficient,
    TooLarge,
    ZeroFunctional,
)
from .fobs import (
    MeasurementSpec,
    ObservabilityCertificate,
    RankPair,
    SystemInstance,
    is_entry_protected,
    is_functionally_observable,
    is_observable_classical,
    is_vector_protected,
)
from .greedy import GreedyStep, GreedyTrace, solve_problem2_greedy
from .hardness import (
    ReductionInstance,
    ReductionReport,
    build_reduction_instance,
    exact_blocking_optimum,
    linear_degeneracy_bruteforce,
    verify_reduction,
)
from .numerics import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_matrix,
    null_space_basis,
    numerical_rank,
    rank_with_margin,
    rational_det,
    rational_inverse,
    rational_kernel,
    rational_matmul,
    rational_matrix,
    rational_rank,
)
from .oracle import brute_force_problem1, brute_force_problem2
from .spectral import EigenSpace, Spectrum, compute_spectrum, eigenbasis_support

__version__ = "0.1.0"

__all__ = [
    "BlockingSolution",
    "CandidateSet",
    "CertificationFailed",
    "DEFAULT_TOL",
    "DimensionMismatch",
    "EigenSpace",
    "EmptyCluster",
    "EmptyRank",
    "GreedyStep",
    "GreedyTrace",
    "IndexOutOfRange",
    "MeasurementSpec",
    "MultiplicityBoundExceeded",
    "NetprivError",
    "NotDiagonalizable",
    "ObservabilityCertificate",
    "ParseError",
    "RankDeficient",
    "RankPair",
    "ReductionInstance",
    "ReductionReport",
    "Spectrum",
    "SystemInstance",
    "ToleranceConfig",
    "TooLarge",
    "ZeroFunctional",
    "alg2_restricted",
    "as_matrix",
    "brute_force_problem1",
    "brute_force_problem2",
    "build_reduction_instance",
    "compute_spectrum",
    "eigenbasis_support",
    "exact_blocking_optimum",
    "filter_feasible",
    "filter_feasible_direct",
    "is_entry_protected",
    "is_functionally_observable",
    "is_observable_classical",
    "is_vector_protected",
    "linear_degeneracy_bruteforce",
    "minimal_deficiency_sets",
    "null_space_basis",
    "numerical_rank",
    "rank_with_margin",
    "rational_det",
    "rational_inverse",
    "rational_kernel",
    "rational_matmul",
    "rational_matrix",
    "rational_rank",
    "solve_problem1",
    "solve_problem2_greedy",
    "union_baseline",
    "verify_reduction",
]
