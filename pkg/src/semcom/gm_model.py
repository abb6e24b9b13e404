"""Gaussian-mixture feature source with diagonal class covariances.

Objects of class ``l`` emit feature vectors drawn from N(mu_l, C) where C is
shared across classes and diagonal. Everything downstream (quantization,
margins, accuracy bounds) works in terms of this model, so it carries a
``units`` tag — "feature" for raw embedding units, "quantized" after scaling
to integer word units — and the bound code refuses to mix the two.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, UnitsError

__all__ = [
    "GmModel",
    "FeatureVector",
    "LabeledSample",
    "make_binary_model",
    "make_ten_class_model",
    "sample",
    "mahalanobis",
    "discriminant_gain",
    "average_pool",
    "posterior",
    "to_quantized_units",
    "default_scale",
]

FeatureVector = np.ndarray


@dataclass(frozen=True, eq=False)
class GmModel:
    """Class centroids (L, D) plus one shared diagonal covariance (D,)."""

    centroids: np.ndarray
    covariance_diag: np.ndarray
    units: str = "feature"

    def __post_init__(self) -> None:
        mu = np.asarray(self.centroids, dtype=np.float64)
        cov = np.asarray(self.covariance_diag, dtype=np.float64)
        if mu.ndim != 2 or mu.shape[0] < 2:
            raise DomainError("centroids must be a (num_classes >= 2, dims) array")
        if cov.shape != (mu.shape[1],):
            raise DomainError(
                f"covariance_diag shape {cov.shape} does not match dims {mu.shape[1]}"
            )
        if not np.all(np.isfinite(mu)) or not np.all(np.isfinite(cov)):
            raise DomainError("model parameters must be finite")
        if np.any(cov <= 0.0):
            raise DomainError("covariance entries must be positive")
        if self.units not in ("feature", "quantized"):
            raise DomainError(f"unknown units tag {self.units!r}")
        object.__setattr__(self, "centroids", mu)
        object.__setattr__(self, "covariance_diag", cov)

    @property
    def dims(self) -> int:
        return self.centroids.shape[1]

    @property
    def num_classes(self) -> int:
        return self.centroids.shape[0]

    @classmethod
    def from_dict(cls, raw: dict) -> "GmModel":
        return cls(
            centroids=np.asarray(raw["centroids"], dtype=np.float64),
            covariance_diag=np.asarray(raw["covariance_diag"], dtype=np.float64),
            units=raw.get("units", "feature"),
        )


@dataclass(frozen=True)
class LabeledSample:
    x: FeatureVector
    label: int


def make_binary_model(dims: int, amplitude: float = 1.0, variance: float = 1.0) -> GmModel:
    """Two classes at ±amplitude·1 with isotropic covariance variance·I."""
    if dims < 1:
        raise DomainError(f"dims must be >= 1, got {dims!r}")
    if amplitude <= 0.0 or variance <= 0.0:
        raise DomainError("amplitude and variance must be positive")
    mu = np.vstack([np.full(dims, amplitude), np.full(dims, -amplitude)])
    return GmModel(mu, np.full(dims, variance))


def make_ten_class_model(dims: int) -> GmModel:
    """Ten classes on a block-sign pattern: class l has its l-th tenth at -1, rest +1."""
    if dims < 10 or dims % 10 != 0:
        raise DomainError(f"dims must be a positive multiple of 10, got {dims!r}")
    block = dims // 10
    mu = np.ones((10, dims))
    for label in range(10):
        mu[label, label * block : (label + 1) * block] = -1.0
    return GmModel(mu, np.ones(dims))


def sample(model: GmModel, label: int, rng: np.random.Generator, count: int | None = None):
    """Draw feature vectors for one class: centroid + N(0, C) noise."""
    if not 0 <= label < model.num_classes:
        raise DomainError(f"label {label!r} out of range for {model.num_classes} classes")
    std = np.sqrt(model.covariance_diag)
    if count is None:
        return model.centroids[label] + rng.standard_normal(model.dims) * std
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count!r}")
    return model.centroids[label] + rng.standard_normal((count, model.dims)) * std


def mahalanobis(
    model: GmModel, x: FeatureVector, label: int, extra_variance: float = 0.0
) -> float:
    """Mahalanobis distance of x to a class centroid under C + extra_variance·I."""
    if not 0 <= label < model.num_classes:
        raise DomainError(f"label {label!r} out of range for {model.num_classes} classes")
    if extra_variance < 0.0:
        raise DomainError("extra_variance must be >= 0")
    diff = np.asarray(x, dtype=np.float64) - model.centroids[label]
    return float(np.sqrt(np.sum(diff * diff / (model.covariance_diag + extra_variance))))


def discriminant_gain(model: GmModel, l: int, l2: int) -> float:
    """Mahalanobis distance between two class centroids (class separability)."""
    if l == l2:
        raise DomainError("discriminant gain needs two distinct classes")
    diff = model.centroids[l] - model.centroids[l2]
    return float(np.sqrt(np.sum(diff * diff / model.covariance_diag)))


def average_pool(views: Sequence[FeatureVector] | np.ndarray) -> FeatureVector:
    """Average multiple noisy views of the same object into one fused vector."""
    stacked = np.asarray(views, dtype=np.float64)
    if stacked.ndim == 1:
        stacked = stacked[None, :]
    if stacked.shape[0] == 0:
        raise DomainError("average_pool needs at least one view")
    return stacked.mean(axis=0)


def posterior(
    model: GmModel,
    x: FeatureVector,
    extra_variance: float = 0.0,
    views: int = 1,
) -> np.ndarray:
    """Class posterior under equal priors for an average of `views` iid views.

    The pooled observation has per-class density N(mu_l, (C + extra_variance·I)/views),
    so log-odds are -views/2 times squared Mahalanobis distances.
    """
    if views < 1:
        raise DomainError(f"views must be >= 1, got {views!r}")
    xv = np.asarray(x, dtype=np.float64)
    var = model.covariance_diag + extra_variance
    diff = model.centroids - xv[None, :]
    logits = -0.5 * views * np.sum(diff * diff / var[None, :], axis=1)
    logits -= logits.max()
    weights = np.exp(logits)
    return weights / weights.sum()


def to_quantized_units(model: GmModel, scale: float) -> GmModel:
    """Rescale a feature-units model into quantized word units (x -> scale·x)."""
    if model.units == "quantized":
        raise UnitsError("model is already in quantized units")
    if scale <= 0.0 or not np.isfinite(scale):
        raise DomainError(f"scale must be positive and finite, got {scale!r}")
    return GmModel(model.centroids * scale, model.covariance_diag * scale**2, "quantized")


def default_scale(model: GmModel, n_bits: int, guard: float = 4.0) -> float:
    """Largest scale that keeps centroid ± guard·std inside the signed word range."""
    if model.units == "quantized":
        raise UnitsError("scale is chosen for feature-units models")
    if n_bits < 2:
        raise DomainError(f"word width must be >= 2 bits, got {n_bits!r}")
    if guard < 0.0:
        raise DomainError("guard must be >= 0")
    spread = np.abs(model.centroids).max(axis=0) + guard * np.sqrt(model.covariance_diag)
    top = float(spread.max())
    if top == 0.0:
        raise DomainError("degenerate model: zero spread in every dimension")
    return ((1 << (n_bits - 1)) - 1) / top
