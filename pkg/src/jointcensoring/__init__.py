"""Exact inference and simulation for two-sample jointly progressively
type-II censored exponential life tests."""

from . import hypoexp
from .counts import (
    FailureCountDist,
    conditional_weight,
    conditional_weights,
    failure_count_dist,
    failure_count_dist_enumerated,
    pop1_failure_probs,
)
from .errors import (
    DegenerateConditioning,
    DimensionMismatch,
    InfeasibleScheme,
    InsufficientSurvivors,
    InvalidScale,
    MleDoesNotExist,
    NonPositiveParams,
    OracleTooLarge,
)
from .inference import (
    ConfidenceInterval,
    MleEstimate,
    bootstrap_ci,
    exact_ci,
    fit,
    simulate_estimates,
)
from .mixture import MleMixture, component_scales, mle_mixture, mle_moments, pdf_curve
from .model import (
    CensoringScheme,
    ExpParams,
    JointSample,
    SufficientStats,
    log_likelihood,
    sufficient_stats,
    validate_scheme,
)
from .sampling import (
    apply_scheme,
    expected_duration,
    generate,
    generate_batch,
    load_plane_7913,
    load_plane_7914,
    stage_rates,
    stream_rng,
)
from .study import (
    ConfigError,
    StudyConfig,
    StudyReport,
    load_config,
    parse_config,
    report_csv,
    run_ci_study,
    run_point_study,
    run_study,
)

__version__ = "0.1.0"

__all__ = [
    "CensoringScheme",
    "ExpParams",
    "JointSample",
    "SufficientStats",
    "validate_scheme",
    "sufficient_stats",
    "log_likelihood",
    "FailureCountDist",
    "pop1_failure_probs",
    "failure_count_dist",
    "failure_count_dist_enumerated",
    "conditional_weight",
    "conditional_weights",
    "hypoexp",
    "MleMixture",
    "component_scales",
    "mle_mixture",
    "mle_moments",
    "pdf_curve",
    "stage_rates",
    "expected_duration",
    "generate",
    "generate_batch",
    "apply_scheme",
    "stream_rng",
    "load_plane_7914",
    "load_plane_7913",
    "MleEstimate",
    "ConfidenceInterval",
    "fit",
    "exact_ci",
    "bootstrap_ci",
    "StudyConfig",
    "StudyReport",
    "ConfigError",
    "parse_config",
    "load_config",
    "run_point_study",
    "run_ci_study",
    "run_study",
    "report_csv",
    "InfeasibleScheme",
    "DimensionMismatch",
    "NonPositiveParams",
    "InvalidScale",
    "OracleTooLarge",
    "DegenerateConditioning",
    "InsufficientSurvivors",
    "MleDoesNotExist",
]
