"""wavestream: strictly causal streaming wavelet features for forecasting.

Core pieces: Daubechies filter pairs (filters), a one-pass causal NDWT/NWPT
engine (transform), simulated test signals (signals), feature-set
construction with normalization and selection (features), SMAPE (metrics),
and a forecasting/cross-validation harness (forecast).  The `wavestream`
CLI ties them together; see the README for the wire formats.
"""

__version__ = "0.1.0"

from ._accel import USING_NUMBA
from .features import (FeatureMatrix, Normalization, PcaResult, SelectorSpec,
                       coefficient_features, coefficient_sequences, lag_matrix,
                       pca_topk, ridge_topk_select, zscore)
from .filters import FilterPair, UnsupportedWaveletError, daubechies_filter, mirror
from .forecast import (ALPHA_GRID, ExperimentConfig, ForecastReport,
                       PipelineConfig, RidgeModel, SplitSpec, WaveletSelection,
                       build_features, cv_select_wavelet, persistence_forecast,
                       ridge_fit, run_experiment)
from .metrics import ScoreSummary, smape, summarize_scores
from .signals import SignalSpec, gaussian_noise, generate
from .transform import (NDWT, NWPT, CoefficientFrame, DwtPyramid,
                        InvertibilityReport, TransformBudgetError,
                        TransformConfig, TransformState, batch_dwt,
                        haar_threshold_denoise, ndwt_push, nwpt_push,
                        online_invertibility_report)

__all__ = [
    "USING_NUMBA", "__version__",
    "FilterPair", "UnsupportedWaveletError", "daubechies_filter", "mirror",
    "NDWT", "NWPT", "TransformConfig", "TransformState", "CoefficientFrame",
    "TransformBudgetError", "ndwt_push", "nwpt_push", "batch_dwt", "DwtPyramid",
    "haar_threshold_denoise", "online_invertibility_report", "InvertibilityReport",
    "SignalSpec", "generate", "gaussian_noise",
    "FeatureMatrix", "Normalization", "SelectorSpec", "PcaResult", "lag_matrix",
    "coefficient_features", "coefficient_sequences", "zscore",
    "ridge_topk_select", "pca_topk",
    "smape", "ScoreSummary", "summarize_scores",
    "ALPHA_GRID", "SplitSpec", "PipelineConfig", "ExperimentConfig",
    "RidgeModel", "ridge_fit", "persistence_forecast", "cv_select_wavelet",
    "WaveletSelection", "ForecastReport", "build_features", "run_experiment",
]
