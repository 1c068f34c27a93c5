"""Finite metric spaces, ultrametrics and the nearest-neighbor ultrametric extension."""

from .errors import (
    AsymmetricEntry,
    DominanceViolated,
    HypothesisViolated,
    MatrixFormatError,
    MatrixShapeError,
    NonFiniteEntry,
    NonpositiveOffDiagonal,
    NonzeroDiagonal,
    StrongTriangleViolation,
    TriangleViolation,
    ValidationError,
)
from .extension import (
    ExtensionReport,
    NearestNeighborMap,
    extend,
    nearest_neighbor_map,
    verify_extension,
)
from .metric_core import (
    TOL,
    FiniteMetricSpace,
    SubsetSelection,
    path_metric,
    random_metric,
    restrict,
    validate_metric,
)
from .tightness import (
    BoundConstraints,
    OracleResult,
    WorstCaseInstance,
    chain_lower_bound,
    extension_constraints,
    feasible_extension_exists,
    optimal_extension,
    optimal_extension_distortion,
    reproduce_tightness,
    worst_case_instance,
)
from .ultrametric import (
    ApproximationReport,
    PairScope,
    ScopeTag,
    Ultrametric,
    approximation_parameters,
    dominating_ultrametric_on_subset,
    minimax_closure,
    scale,
    subdominant_ultrametric,
    uniform_ultrametric,
    validate_ultrametric,
)

__version__ = "0.1.0"
