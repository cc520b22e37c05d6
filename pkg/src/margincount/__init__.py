"""Counting, bounding, and uniform sampling of matrices with fixed margins.

Two regimes throughout: zero-one matrices and non-negative integer
matrices with prescribed row sums R and column sums C.  The package
provides exact counters (column DP, permanent identity), the
maximum-entropy convex program whose value certifies an upper bound on
the count, explicit lower bounds, independence heuristics with a
repulsion/attraction diagnostic, log-concavity and domination checks,
Edgeworth-corrected Gaussian count approximations, and exactly uniform
rejection samplers with reproducible seeding.
"""

from .errors import (
    BadMargins,
    BudgetExhausted,
    DomainViolation,
    DominationViolated,
    KernelDimensionError,
    LengthMismatch,
    MarginCountError,
    NegativeEntry,
    NoInterior,
    NonIntegerAverage,
    NotConverged,
    NotSquare,
    OutOfRange,
    TooLarge,
    Unbalanced,
)
from .margins import (
    BigCount,
    CellMask,
    IntMatrix,
    Margins,
    clone_margins,
    dominates,
    gale_ryser_feasible,
    validate_margins,
)
from .exact import (
    BlockMatrix01,
    build_block_matrix,
    count_01,
    count_01_via_permanent,
    count_nonneg,
    enumerate_01,
    permanent,
    scale_block_matrix,
)
from .maxent import (
    DualPoint,
    MaxEntSolution,
    Mode,
    bounds_01,
    bounds_nonneg,
    entropy_g,
    entropy_h,
    log_vdw_offset_01,
    objective_G,
    solve_maxent_01,
    solve_maxent_nonneg,
)
from .estimates import (
    ConcavityReport,
    CorrelationReport,
    correlation_diagnostic,
    domination_monotonicity_check,
    independence_estimate_01,
    independence_estimate_nonneg,
    log_concavity_check,
)
from .asymptotics import (
    EdgeworthData,
    QuadraticFormQ,
    asymptotic_count,
    build_q,
    gaussian_moments,
    gaussian_moments_mc,
    log_det_on_H,
)
from .sampler import (
    ConcentrationReport,
    RngSeed,
    SampleReport,
    bernoulli_matrix,
    concentration_report,
    geometric_matrix,
    sample_uniform,
)

__version__ = "0.1.0"

__all__ = [
    "BadMargins",
    "BigCount",
    "BlockMatrix01",
    "BudgetExhausted",
    "CellMask",
    "ConcavityReport",
    "ConcentrationReport",
    "CorrelationReport",
    "DomainViolation",
    "DominationViolated",
    "DualPoint",
    "EdgeworthData",
    "IntMatrix",
    "KernelDimensionError",
    "LengthMismatch",
    "Margins",
    "MarginCountError",
    "MaxEntSolution",
    "Mode",
    "NegativeEntry",
    "NoInterior",
    "NonIntegerAverage",
    "NotConverged",
    "NotSquare",
    "OutOfRange",
    "QuadraticFormQ",
    "RngSeed",
    "SampleReport",
    "TooLarge",
    "Unbalanced",
    "asymptotic_count",
    "bernoulli_matrix",
    "bounds_01",
    "bounds_nonneg",
    "build_block_matrix",
    "build_q",
    "clone_margins",
    "concentration_report",
    "correlation_diagnostic",
    "count_01",
    "count_01_via_permanent",
    "count_nonneg",
    "domination_monotonicity_check",
    "dominates",
    "entropy_g",
    "entropy_h",
    "enumerate_01",
    "gale_ryser_feasible",
    "gaussian_moments",
    "gaussian_moments_mc",
    "geometric_matrix",
    "independence_estimate_01",
    "independence_estimate_nonneg",
    "log_concavity_check",
    "log_det_on_H",
    "log_vdw_offset_01",
    "objective_G",
    "permanent",
    "sample_uniform",
    "scale_block_matrix",
    "solve_maxent_01",
    "solve_maxent_nonneg",
    "validate_margins",
    "__version__",
]
