"""GAN evaluation metrics (IS, FID, KID) over pre-extracted features,
with reproducible multi-seed evaluation protocols, a synthetic bias
laboratory, array-file I/O, and an experiment run registry."""

from .bias import (
    BiasReport,
    SyntheticGaussianSpec,
    closed_form_fid_diag,
    fid_bias_curve,
    synth_features,
)
from .errors import (
    DegenerateInputError,
    DiscrepancyError,
    ExitStatus,
    GanMetricsError,
    InputError,
    InsufficientSamplesError,
    NpyFormatError,
    NumericalError,
    RegistryError,
)
from .fid import FidScore, compute_fid, frechet_distance, sqrtm_product_trace
from .inception import IsScore, inception_score
from .kid import KidScore, compute_kid, mmd2_unbiased, poly_kernel
from .npyio import content_digest, read_csv_features, read_npy, write_npy
from .protocol import (
    PRESETS,
    ComparabilityVerdict,
    ProtocolConfig,
    ScoreReport,
    compare_reports,
    load_report,
    preset_config,
    run_protocol,
)
from .registry import RunRecord, create_run, log_metric, resume_run
from .stats import (
    GaussianStats,
    as_feature_matrix,
    as_logit_matrix,
    fit_gaussian,
    softmax_rows,
    split_k,
    subsample,
)

__version__ = "0.1.0"

__all__ = [
    "BiasReport",
    "ComparabilityVerdict",
    "DegenerateInputError",
    "DiscrepancyError",
    "ExitStatus",
    "FidScore",
    "GanMetricsError",
    "GaussianStats",
    "InputError",
    "InsufficientSamplesError",
    "IsScore",
    "KidScore",
    "NpyFormatError",
    "NumericalError",
    "PRESETS",
    "ProtocolConfig",
    "RegistryError",
    "RunRecord",
    "ScoreReport",
    "SyntheticGaussianSpec",
    "as_feature_matrix",
    "as_logit_matrix",
    "closed_form_fid_diag",
    "compare_reports",
    "compute_fid",
    "compute_kid",
    "content_digest",
    "create_run",
    "fid_bias_curve",
    "fit_gaussian",
    "frechet_distance",
    "inception_score",
    "load_report",
    "log_metric",
    "mmd2_unbiased",
    "poly_kernel",
    "preset_config",
    "read_csv_features",
    "read_npy",
    "resume_run",
    "run_protocol",
    "softmax_rows",
    "split_k",
    "sqrtm_product_trace",
    "subsample",
    "synth_features",
    "write_npy",
]
