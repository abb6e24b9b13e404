"""Linear one-vs-one classification with margin-based accuracy guarantees.

A class pair is separated by the hyperplane that is optimal for the shared
diagonal covariance (constructed in whitened coordinates). Around each
centroid sits a confidence cluster — the Mahalanobis ball capturing a target
probability mass ζ — and the margin Φ is the gap between the cluster edge
and the separating plane. Channel word errors enter as an extra diagonal
variance term: they shrink Φ and, through a Chernoff-style argument, yield
closed-form lower bounds on classification accuracy, the number of fused
views needed, and the number of repeated transmissions needed to hit a
target confidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateModelError, DomainError, UnitsError
from .feature_channel import NoiseVariance, error_variance
from .gm_model import GmModel, posterior
from .numerics import (
    DEFAULT_PRECISION,
    Precision,
    chi_square_quantile,
    lambert_w0_of_exp,
    q_function,
)

__all__ = [
    "Hyperplane",
    "MarginReport",
    "ClassificationOutcome",
    "hyperplane_between",
    "score",
    "classify_ovo",
    "cluster_radius",
    "classification_margin",
    "margin_reduction_bounds",
    "sampled_margin_loss",
    "conditional_accuracy",
    "accuracy_lower_bound",
    "multiview_miss_probability",
    "multiview_accuracy_lower_bound",
    "required_views",
    "required_transmissions",
    "modeled_accuracy",
]


@dataclass(frozen=True)
class Hyperplane:
    """Unit-normal separating plane; score(x) = w·x + b, positive side = first class."""

    w: np.ndarray
    b: float

    def __post_init__(self) -> None:
        w = np.asarray(self.w, dtype=np.float64)
        if w.ndim != 1 or w.size == 0:
            raise DomainError("hyperplane normal must be a non-empty vector")
        nrm = float(np.linalg.norm(w))
        if not math.isfinite(nrm) or abs(nrm - 1.0) > 1e-9:
            raise DomainError("hyperplane normal must have unit length")
        object.__setattr__(self, "w", w)


@dataclass(frozen=True)
class MarginReport:
    zeta: float
    sigma: float
    phi: float
    centroid_distance: float
    noise_var: float
    delta_phi_lower: float
    delta_phi_upper: float


@dataclass(frozen=True)
class ClassificationOutcome:
    label: int
    confidence: float
    score_trace: tuple[tuple[int, int, float], ...]


def _resolve_variance(noise_var: NoiseVariance | float, model: GmModel) -> float:
    """Extra additive variance in the model's own units; rejects mismatched tags."""
    if isinstance(noise_var, NoiseVariance):
        if noise_var.units != model.units:
            raise UnitsError(
                f"noise variance in {noise_var.units!r} units cannot be applied "
                f"to a model in {model.units!r} units"
            )
        value = noise_var.value
    else:
        value = float(noise_var)
    if value < 0.0 or not math.isfinite(value):
        raise DomainError(f"noise variance must be finite and >= 0, got {value!r}")
    return value


def hyperplane_between(
    model: GmModel, l: int, l2: int, noise_var: NoiseVariance | float = 0.0
) -> Hyperplane:
    """Optimal separating plane for two classes under the (noise-widened) covariance.

    Built in whitened coordinates y = x/std and mapped back, which reduces to
    the perpendicular bisector when the covariance is isotropic. Oriented so
    the first class scores positive.
    """
    if l == l2:
        raise DomainError("need two distinct classes to separate")
    var = model.covariance_diag + _resolve_variance(noise_var, model)
    std = np.sqrt(var)
    m1 = model.centroids[l] / std
    m2 = model.centroids[l2] / std
    gap = m1 - m2
    nrm = float(np.linalg.norm(gap))
    if nrm < 1e-12:
        raise DegenerateModelError(f"classes {l} and {l2} have coincident centroids")
    w_white = gap / nrm
    b_white = (float(m2 @ m2) - float(m1 @ m1)) / (2.0 * nrm)
    w_raw = w_white / std
    w_nrm = float(np.linalg.norm(w_raw))
    w = w_raw / w_nrm
    b = b_white / w_nrm
    if float(w @ model.centroids[l]) + b < 0.0:
        w, b = -w, -b
    return Hyperplane(w, b)


def score(h: Hyperplane, x: np.ndarray) -> float | np.ndarray:
    """Signed distance of x (or a batch of rows) from the plane."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 1:
        return float(arr @ h.w + h.b)
    return arr @ h.w + h.b


def classify_ovo(
    model: GmModel, x: np.ndarray, noise_var: NoiseVariance | float = 0.0
) -> ClassificationOutcome:
    """One-vs-one tournament: the survivor meets each next class in index order.

    Each duel is decided by the pairwise hyperplane under the noise-widened
    covariance; the challenger must win strictly, so exact ties resolve to
    the lowest label. Confidence is the survivor's posterior mass.
    """
    var = _resolve_variance(noise_var, model)
    xv = np.asarray(x, dtype=np.float64)
    if xv.shape != (model.dims,):
        raise DomainError(f"x must have shape ({model.dims},), got {xv.shape}")
    survivor = 0
    trace: list[tuple[int, int, float]] = []
    for challenger in range(1, model.num_classes):
        h = hyperplane_between(model, survivor, challenger, var)
        s = float(score(h, xv))
        trace.append((survivor, challenger, s))
        if s < 0.0:
            survivor = challenger
    conf = float(posterior(model, xv, extra_variance=var)[survivor])
    return ClassificationOutcome(survivor, conf, tuple(trace))


def cluster_radius(zeta: float, dims: int, precision: Precision = DEFAULT_PRECISION) -> float:
    """Mahalanobis radius of the ball holding probability mass ζ in `dims` dimensions."""
    if not 0.0 < zeta < 1.0:
        raise DomainError(f"zeta must be in (0, 1), got {zeta!r}")
    return math.sqrt(chi_square_quantile(zeta, dims, precision))


def classification_margin(
    model: GmModel,
    h: Hyperplane,
    zeta: float,
    noise_var: NoiseVariance | float = 0.0,
    label: int | None = None,
) -> MarginReport:
    """Gap between a class's ζ-cluster edge and the plane, with shrink bounds.

    Distances are measured in Mahalanobis units of the noise-widened
    covariance; delta_phi_* bound how much the plain-model margin shrinks
    when the extra variance is switched on.
    """
    var = _resolve_variance(noise_var, model)
    if label is None:
        label = int(np.argmax(score(h, model.centroids)))
    if not 0 <= label < model.num_classes:
        raise DomainError(f"label {label!r} out of range for {model.num_classes} classes")
    sigma = cluster_radius(zeta, model.dims)
    eff = model.covariance_diag + var
    spread = math.sqrt(float(h.w @ (eff * h.w)))
    dist = abs(float(score(h, model.centroids[label]))) / spread
    lower, upper = margin_reduction_bounds(model, zeta, var, h)
    return MarginReport(
        zeta=zeta,
        sigma=sigma,
        phi=dist - sigma,
        centroid_distance=dist,
        noise_var=var,
        delta_phi_lower=lower,
        delta_phi_upper=upper,
    )


def margin_reduction_bounds(
    model: GmModel,
    zeta: float,
    noise_var: NoiseVariance | float,
    h: Hyperplane | None = None,
) -> tuple[float, float]:
    """Bracket the margin lost to extra additive variance, in cluster units.

    The loss is direction-dependent for anisotropic covariances; these bounds
    come from extremizing the per-dimension shrink ratio. The hyperplane is
    accepted for interface symmetry — the bounds depend only on the model
    geometry and the radius, not on the plane's orientation.
    """
    var = _resolve_variance(noise_var, model)
    sigma = cluster_radius(zeta, model.dims)
    if var == 0.0:
        return 0.0, 0.0
    cov = model.covariance_diag
    ratio = var * sigma / (2.0 * cov * (cov + var))
    lower = float(ratio.min()) / float(np.sum(1.0 / cov))
    upper = float(ratio.max()) * float(np.sum(cov + var))
    return lower, upper


def sampled_margin_loss(
    model: GmModel,
    zeta: float,
    noise_var: NoiseVariance | float,
    points: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Monte-Carlo margin loss across random cluster-boundary directions.

    For each random unit direction, take the point on the noise-widened
    ζ-cluster boundary and measure how far outside the plain-model ζ-ball it
    sits. margin_reduction_bounds must bracket every returned value.
    """
    var = _resolve_variance(noise_var, model)
    if points < 1:
        raise DomainError(f"points must be >= 1, got {points!r}")
    sigma = cluster_radius(zeta, model.dims)
    u = rng.standard_normal((points, model.dims))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    eff = model.covariance_diag + var
    t = sigma / np.sqrt((u * u / eff[None, :]).sum(axis=1))
    radius_plain = t * np.sqrt((u * u / model.covariance_diag[None, :]).sum(axis=1))
    return radius_plain - sigma


def conditional_accuracy(score_value: float, n_bits: int, p_b: float) -> float:
    """P(correct side | clean score) for a unit-normal plane under word errors."""
    var = error_variance(n_bits, p_b)
    if var == 0.0:
        return 1.0
    return 1.0 - q_function(abs(score_value) / math.sqrt(var))


def _bound_parts(
    model: GmModel,
    h: Hyperplane,
    n_bits: int,
    p_b: float,
    label: int | None,
    transmissions: int = 1,
) -> tuple[float, float, float]:
    """(centroid distance, amplitude, decay rate) of the miss-probability bound.

    The bound integrates the Gaussian tail of the channel error against the
    feature spread, which only makes sense when both live in the same units —
    hence the quantized-units requirement. Averaging `transmissions` repeats
    of each view divides the word-error variance accordingly.
    """
    if model.units != "quantized":
        raise UnitsError(
            "accuracy bounds mix channel word-error variance with the model "
            "spread; convert the model with to_quantized_units first"
        )
    if transmissions < 1:
        raise DomainError(f"transmissions must be >= 1, got {transmissions!r}")
    if label is None:
        label = int(np.argmax(score(h, model.centroids)))
    if not 0 <= label < model.num_classes:
        raise DomainError(f"label {label!r} out of range for {model.num_classes} classes")
    noise = error_variance(n_bits, p_b) / transmissions
    spread_sq = float(h.w @ (model.covariance_diag * h.w))
    if spread_sq <= 0.0:
        raise DegenerateModelError("plane has zero spread under the model covariance")
    dist = abs(float(score(h, model.centroids[label]))) / math.sqrt(spread_sq)
    denom = 2.0 * noise + spread_sq
    amplitude = math.sqrt(noise / denom)
    rate = dist * dist * spread_sq / (2.0 * denom)
    return dist, amplitude, rate


def accuracy_lower_bound(
    model: GmModel,
    h: Hyperplane,
    n_bits: int,
    p_b: float,
    label: int | None = None,
    transmissions: int = 1,
) -> float:
    """Closed-form lower bound on single-view classification accuracy."""
    if p_b == 0.0:
        return 1.0
    _, amplitude, rate = _bound_parts(model, h, n_bits, p_b, label, transmissions)
    return 1.0 - amplitude * math.exp(-rate)


def multiview_miss_probability(
    model: GmModel,
    h: Hyperplane,
    n_bits: int,
    p_b: float,
    views: int,
    label: int | None = None,
    transmissions: int = 1,
) -> float:
    """Upper bound on the miss probability after fusing `views` pooled looks."""
    if views < 1:
        raise DomainError(f"views must be >= 1, got {views!r}")
    if p_b == 0.0:
        return 0.0
    _, amplitude, rate = _bound_parts(model, h, n_bits, p_b, label, transmissions)
    return amplitude * math.exp(-rate * views)


def multiview_accuracy_lower_bound(
    model: GmModel,
    h: Hyperplane,
    n_bits: int,
    p_b: float,
    views: int,
    label: int | None = None,
    transmissions: int = 1,
) -> float:
    return 1.0 - multiview_miss_probability(
        model, h, n_bits, p_b, views, label, transmissions
    )


def required_views(
    model: GmModel,
    h: Hyperplane,
    n_bits: int,
    p_b: float,
    xi: float,
    label: int | None = None,
) -> int:
    """Fewest fused views whose accuracy bound reaches the confidence target ξ."""
    if not 0.0 < xi < 1.0:
        raise DomainError(f"xi must be in (0, 1), got {xi!r}")
    if p_b == 0.0:
        return 1
    _, amplitude, rate = _bound_parts(model, h, n_bits, p_b, label)
    if amplitude <= 1.0 - xi:
        return 1
    if rate <= 0.0:
        raise DomainError("zero decay rate: the plane passes through the centroid")
    return max(1, math.ceil(math.log(amplitude / (1.0 - xi)) / rate))


def required_transmissions(
    model: GmModel,
    h: Hyperplane,
    n_bits: int,
    p_b: float,
    xi: float,
    label: int | None = None,
    variant: str = "stated",
    precision: Precision = DEFAULT_PRECISION,
) -> int:
    """Fewest repeated transmissions per view that reach the confidence target ξ.

    Averaging T copies divides the word-error variance by T; inverting the
    single-view bound for T lands on a Lambert-W expression, evaluated in log
    space so extreme targets stay finite. The two variants differ by a
    constant offset inside the parenthesis: "stated" subtracts 1,
    "derivation" subtracts 2 (resolving the inversion exactly).
    """
    if not 0.0 < xi < 1.0:
        raise DomainError(f"xi must be in (0, 1), got {xi!r}")
    if variant not in ("stated", "derivation"):
        raise DomainError(f"variant must be 'stated' or 'derivation', got {variant!r}")
    if p_b == 0.0:
        return 1
    if model.units != "quantized":
        raise UnitsError(
            "accuracy bounds mix channel word-error variance with the model "
            "spread; convert the model with to_quantized_units first"
        )
    if label is None:
        label = int(np.argmax(score(h, model.centroids)))
    noise = error_variance(n_bits, p_b)
    spread_sq = float(h.w @ (model.covariance_diag * h.w))
    if spread_sq <= 0.0:
        raise DegenerateModelError("plane has zero spread under the model covariance")
    dist = abs(float(score(h, model.centroids[label]))) / math.sqrt(spread_sq)
    if dist <= 0.0:
        raise DomainError("zero centroid distance: the plane passes through the centroid")
    d_sq = dist * dist
    log_arg = math.log(2.0 * d_sq) + d_sq + 2.0 * math.log1p(-xi)
    w_val = lambert_w0_of_exp(log_arg, precision)
    offset = 1.0 if variant == "stated" else 2.0
    t_real = (noise / spread_sq) * (2.0 * d_sq / w_val - offset)
    return max(1, math.ceil(t_real))


def modeled_accuracy(
    model: GmModel,
    n_bits: int,
    p_b: float,
    rng: np.random.Generator,
    views: int = 1,
    transmissions: int = 1,
    trials: int = 10_000,
    metric: str = "label",
) -> tuple[float, float]:
    """Monte-Carlo accuracy of the two-class rule under Gaussian channel errors.

    Works in the idealized regime the bounds describe: the pooled feature is
    N(mu, C/views) and the pooled word error is N(0, var/(views·T)). Returns
    (accuracy, 95% CI half-width).

    metric="label" scores the corrupted feature's decision against the drawn
    class label, so it includes the model's intrinsic class overlap.
    metric="alignment" scores it against the decision the clean pooled feature
    would have received, isolating the effect the transmission count controls:
    it is exactly 1 when the channel contributes no error, however much the
    classes themselves overlap.
    """
    if model.num_classes != 2:
        raise DomainError("modeled_accuracy handles two-class models only")
    if model.units != "quantized":
        raise UnitsError("convert the model with to_quantized_units first")
    if min(views, transmissions, trials) < 1:
        raise DomainError("views, transmissions, and trials must all be >= 1")
    if metric not in ("label", "alignment"):
        raise ConfigError(f"metric must be 'label' or 'alignment', got {metric!r}")
    h = hyperplane_between(model, 0, 1)
    noise = error_variance(n_bits, p_b)
    labels = rng.integers(0, 2, size=trials)
    std_feat = np.sqrt(model.covariance_diag / views)
    x = model.centroids[labels] + rng.standard_normal((trials, model.dims)) * std_feat
    reference = labels
    if metric == "alignment":
        reference = np.where(score(h, x) >= 0.0, 0, 1)
    if noise > 0.0:
        err_std = math.sqrt(noise / (views * transmissions))
        x = x + rng.standard_normal((trials, model.dims)) * err_std
    s = score(h, x)
    predicted = np.where(s >= 0.0, 0, 1)
    acc = float(np.mean(predicted == reference))
    half = 1.96 * math.sqrt(max(acc * (1.0 - acc), 1e-12) / trials)
    return acc, half
