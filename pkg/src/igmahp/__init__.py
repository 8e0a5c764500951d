"""Inverse Gram Matrix prioritization for pairwise reciprocal matrices."""

from ._backend import BACKEND
from .errors import (
    BadDiagonal,
    DimensionMismatch,
    IGMError,
    NoConvergence,
    NonPositiveEntry,
    NonSquare,
    ParseError,
    ReciprocityViolation,
    SingularMatrix,
    UnsupportedOrder,
    ValidationError,
    ZeroShift,
    ZeroShiftOnConsistent,
    ZeroWeight,
)
from .gram import (
    DesignMatrix,
    Flavor,
    GramMatrix,
    build_design_matrix,
    gram_elementwise,
    gram_from_design,
    lagrangian_gram,
    reduced_gram,
    shifted_gram,
)
from .linalg import LUFactors, invert, lu_factor, principal_eigen, solve
from .matrixio import MatrixDocument, parse_matrix
from .methods import MethodResult, blankmeyer, ligm, nigm, pigm
from .prm import (
    ConsistencyReport,
    JudgmentScale,
    PairwiseReciprocalMatrix,
    PriorityVector,
    consistency,
    ideal_prm,
    random_prm,
    validate_prm,
    wls_objective,
)
from .simulation import (
    Mode,
    SimulationReport,
    TrialRecord,
    VerificationConfig,
    rounded_discrepancy,
    run_igm_equivalence,
    run_wls_verification,
)
from .wls import KKTResidual, OptimizerConfig, finite_diff_gradient, kkt_residual, optimize_wls

__version__ = "0.1.0"
