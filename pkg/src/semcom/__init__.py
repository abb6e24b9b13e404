"""Simulation workbench for knowledge-based low-latency semantic communication.

Feature vectors from a Gaussian-mixture source are quantized and sent uncoded
over a noisy binary link; margin-based bounds say how accurate recognition
stays, and an exploration simulator measures how fast a task finishes
end-to-end. See the README for the module map.
"""

from .errors import (
    ConfigError,
    ConvergenceError,
    DegenerateModelError,
    DomainError,
    EncodingError,
    GraphLookupError,
    LinkBudgetError,
    SemcomError,
    UnitsError,
)
from .exploration import (
    EXPERIMENTS,
    EnvironmentAssignment,
    ExperimentResult,
    ExplorationScenario,
    LatencyRecord,
    Observation,
    assign_environment,
    monte_carlo_accuracy,
    observe_object,
    run_experiment,
    simulate_episode,
)
from .feature_channel import (
    LinkConfig,
    NoiseVariance,
    QuantizedVector,
    TransmitResult,
    bit_flip_channel,
    bpsk_bep,
    channel_noise,
    dequantize,
    error_variance,
    error_variance_single_flip,
    projected_error_stats,
    qam_bep,
    quantize,
    select_modulation,
    transmit_feature,
    urllc_blocklength,
    urllc_latency,
)
from .gm_model import (
    GmModel,
    LabeledSample,
    average_pool,
    default_scale,
    discriminant_gain,
    mahalanobis,
    make_binary_model,
    make_ten_class_model,
    posterior,
    sample,
    to_quantized_units,
)
from .kernels import HAS_NUMBA, corrupt_words, error_moments, flip_mask_cdf, numba_enabled
from .margin_classifier import (
    ClassificationOutcome,
    Hyperplane,
    MarginReport,
    accuracy_lower_bound,
    classification_margin,
    classify_ovo,
    cluster_radius,
    conditional_accuracy,
    hyperplane_between,
    margin_reduction_bounds,
    modeled_accuracy,
    multiview_accuracy_lower_bound,
    multiview_miss_probability,
    required_transmissions,
    required_views,
    sampled_margin_loss,
    score,
)
from .numerics import (
    DEFAULT_PRECISION,
    Precision,
    chi_square_quantile,
    lambert_w0,
    lambert_w0_of_exp,
    q_function,
    q_inverse,
    regularized_lower_gamma,
)
from .protocol import (
    KnowledgeGraph,
    KnowledgePath,
    ProtocolLimits,
    ProtocolState,
    RecognitionEntry,
    SemanticMatchConfig,
    check_feasibility,
    check_path_hit,
    embed,
    find_paths,
    match_map,
    run_protocol,
    semantic_match,
    update_recognition,
)
from .seeding import substream

__version__ = "0.1.0"
