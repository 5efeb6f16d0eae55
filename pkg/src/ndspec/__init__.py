"""Sequential multidimensional spectral estimation for block-Toeplitz
correlation structures, with a minimum-variance baseline, an analytic
cost model, and a correlation-matching metric."""

from .baselines import (
    AliasingWarning,
    CostReport,
    LagMatch,
    MatchReport,
    capon_cost,
    capon_spectrum,
    correlation_match,
    cost_report,
    sequential_cost,
    sequential_stage_costs,
)
from .correlation import (
    BlockToeplitzMatrix,
    CorrelationSignal,
    SignalTensor,
    SpectralComposition,
    assemble,
    check_positive_definite,
    estimate_correlation,
    load_ndcorr,
    ndcorr_lines,
    save_ndcorr,
    synth_correlation,
)
from .errors import (
    DimensionMismatch,
    FileFormatError,
    IndexOutOfRange,
    InsufficientData,
    InvalidNesting,
    NdspecError,
    NotPositiveDefinite,
    SizeMismatch,
)
from .estimator import (
    LevinsonResult,
    StageField,
    ar_spectrum_1d,
    fourier_block_sum,
    init_stage,
    levinson_1d,
    sequential_spectrum,
    stage_update,
)
from .grid import SpectralGridSpec, SpectrumEstimate
from .indexing import (
    DimSpec,
    IndexPermutation,
    Nesting,
    Strides,
    apply_walking,
    flat_of_multi,
    has_toeplitz_character,
    multi_of_flat,
    strides,
    walking_map,
)
from .linalg import cholesky, hermitianize, invert_pd, sandwich

__version__ = "0.1.0"

__all__ = [
    "AliasingWarning",
    "BlockToeplitzMatrix",
    "CorrelationSignal",
    "CostReport",
    "DimSpec",
    "DimensionMismatch",
    "FileFormatError",
    "IndexOutOfRange",
    "IndexPermutation",
    "InsufficientData",
    "InvalidNesting",
    "LagMatch",
    "LevinsonResult",
    "MatchReport",
    "NdspecError",
    "Nesting",
    "NotPositiveDefinite",
    "SignalTensor",
    "SizeMismatch",
    "SpectralComposition",
    "SpectralGridSpec",
    "SpectrumEstimate",
    "StageField",
    "Strides",
    "apply_walking",
    "ar_spectrum_1d",
    "assemble",
    "capon_cost",
    "capon_spectrum",
    "check_positive_definite",
    "cholesky",
    "correlation_match",
    "cost_report",
    "estimate_correlation",
    "flat_of_multi",
    "fourier_block_sum",
    "has_toeplitz_character",
    "hermitianize",
    "init_stage",
    "invert_pd",
    "levinson_1d",
    "load_ndcorr",
    "multi_of_flat",
    "ndcorr_lines",
    "save_ndcorr",
    "sandwich",
    "sequential_cost",
    "sequential_spectrum",
    "sequential_stage_costs",
    "stage_update",
    "strides",
    "synth_correlation",
    "walking_map",
]
