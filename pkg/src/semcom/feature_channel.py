"""Uncoded feature transport over a binary-symmetric link.

Feature vectors are scaled, rounded to signed n-bit words, and sent raw; the
receiver sees each bit flipped independently with probability ``p_b``. The
module provides the word-error statistics of that channel, modulation
selection for the adaptive scheme, and a reliably-coded reference path whose
blocklength comes from the finite-length coding-rate approximation.

Word-error variance comes in two closed forms. For words uniform over the
full signed range, the exact variance of the additive word error is

    (4**n - 1) * p / 3

per independently flipped bit (errors from different bit positions are
uncorrelated for uniform words, and each bit position i contributes
4**i * p ... summing the geometric series gives the formula). The
``single_flip`` variant conditions on at-most-one flip per word and is the
small-p approximation of the same law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
import json

import numpy as np

from .errors import ConfigError, DomainError, EncodingError, LinkBudgetError
from .kernels import corrupt_words
from .numerics import DEFAULT_PRECISION, Precision, q_function, q_inverse

__all__ = [
    "QuantizedVector",
    "LinkConfig",
    "TransmitResult",
    "NoiseVariance",
    "quantize",
    "dequantize",
    "bit_flip_channel",
    "flip_bits",
    "error_variance",
    "error_variance_single_flip",
    "channel_noise",
    "projected_error_stats",
    "bpsk_bep",
    "qam_bep",
    "default_modulation_policy",
    "select_modulation",
    "resolved_bep",
    "urllc_blocklength",
    "urllc_latency",
    "transmit_feature",
    "transmit_batch",
]

_LOG2E = math.log2(math.e)
_SCHEMES = ("fixed_binary", "adaptive", "reliable_coded")


@dataclass(frozen=True)
class QuantizedVector:
    """Signed integer words plus the scale that maps them back to feature units."""

    words: np.ndarray
    n_bits: int
    scale: float

    def __post_init__(self) -> None:
        words = np.asarray(self.words, dtype=np.int64)
        if not 2 <= self.n_bits <= 16:
            raise DomainError(f"word width must be in [2, 16] bits, got {self.n_bits!r}")
        if self.scale <= 0.0 or not math.isfinite(self.scale):
            raise DomainError(f"scale must be positive and finite, got {self.scale!r}")
        half = 1 << (self.n_bits - 1)
        if words.size and (words.min() < -half or words.max() > half - 1):
            raise DomainError(f"words exceed the signed {self.n_bits}-bit range")
        object.__setattr__(self, "words", words)


@dataclass(frozen=True)
class NoiseVariance:
    """A variance plus the units it is expressed in ("feature" or "quantized")."""

    value: float
    units: str

    def __post_init__(self) -> None:
        if self.value < 0.0 or not math.isfinite(self.value):
            raise DomainError(f"variance must be finite and >= 0, got {self.value!r}")
        if self.units not in ("feature", "quantized"):
            raise DomainError(f"unknown units tag {self.units!r}")


@dataclass(frozen=True)
class LinkConfig:
    """How features travel: raw BPSK, adaptive M-QAM, or a coded reference link.

    scheme "fixed_binary"   -- one bit per symbol; give exactly one of
                               snr_linear (bep derived) or bep (direct).
    scheme "adaptive"       -- M-QAM picked from modulation_policy by snr_linear.
    scheme "reliable_coded" -- finite-blocklength coded packet at
                               packet_error_target; payload arrives intact.
    """

    scheme: str = "fixed_binary"
    snr_linear: float | None = None
    bep: float | None = None
    bandwidth_hz: float = 1e6
    bits_per_feature: int = 12
    packet_error_target: float = 1e-9
    modulation_policy: tuple[tuple[float, int], ...] | None = None

    def __post_init__(self) -> None:
        if self.scheme not in _SCHEMES:
            raise ConfigError(f"unknown link scheme {self.scheme!r}; expected one of {_SCHEMES}")
        if self.bandwidth_hz <= 0.0:
            raise ConfigError(f"bandwidth_hz must be positive, got {self.bandwidth_hz!r}")
        if not 2 <= self.bits_per_feature <= 16:
            raise ConfigError(
                f"bits_per_feature must be in [2, 16], got {self.bits_per_feature!r}"
            )
        if self.snr_linear is not None and self.snr_linear <= 0.0:
            raise ConfigError(f"snr_linear must be positive, got {self.snr_linear!r}")
        if self.bep is not None and not 0.0 <= self.bep <= 0.5:
            raise ConfigError(f"bep must be in [0, 0.5], got {self.bep!r}")
        if self.scheme == "fixed_binary":
            if (self.snr_linear is None) == (self.bep is None):
                raise ConfigError("fixed_binary needs exactly one of snr_linear or bep")
        else:
            if self.snr_linear is None:
                raise ConfigError(f"scheme {self.scheme!r} needs snr_linear")
            if self.bep is not None:
                raise ConfigError(f"scheme {self.scheme!r} derives bep; do not set it")
        if self.scheme == "reliable_coded" and not 0.0 < self.packet_error_target < 1.0:
            raise ConfigError(
                f"packet_error_target must be in (0, 1), got {self.packet_error_target!r}"
            )


@dataclass(frozen=True)
class TransmitResult:
    received: np.ndarray
    latency_s: float
    bits_sent: int
    bep_used: float
    transmissions: int


def quantize(x: np.ndarray, n_bits: int, scale: float) -> QuantizedVector:
    """Round scale·x to the nearest signed n-bit word, clipping at the range ends."""
    arr = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise EncodingError("cannot quantize non-finite feature values")
    if scale <= 0.0 or not math.isfinite(scale):
        raise DomainError(f"scale must be positive and finite, got {scale!r}")
    half = 1 << (n_bits - 1)
    words = np.clip(np.rint(arr * scale), -half, half - 1).astype(np.int64)
    return QuantizedVector(words, n_bits, scale)


def dequantize(q: QuantizedVector) -> np.ndarray:
    return q.words.astype(np.float64) / q.scale


def flip_bits(q: QuantizedVector, mask: np.ndarray | int) -> QuantizedVector:
    """XOR a fixed flip mask into each word (deterministic test hook)."""
    span = 1 << q.n_bits
    m = np.asarray(mask, dtype=np.int64)
    if np.any(m < 0) or np.any(m >= span):
        raise DomainError(f"flip mask outside [0, {span})")
    raw = (q.words & (span - 1)) ^ m
    words = np.where(raw >= (span >> 1), raw - span, raw)
    return QuantizedVector(words, q.n_bits, q.scale)


def bit_flip_channel(
    q: QuantizedVector, p_b: float, rng: np.random.Generator
) -> QuantizedVector:
    """Pass words through the binary-symmetric channel with flip probability p_b."""
    if not 0.0 <= p_b <= 0.5:
        raise DomainError(f"bit flip probability must be in [0, 0.5], got {p_b!r}")
    received = corrupt_words(q.words, q.n_bits, p_b, rng)
    return QuantizedVector(received, q.n_bits, q.scale)


def error_variance(n_bits: int, p_b: float) -> float:
    """Word-error variance (4**n - 1)·p/3 in quantized units; exact for uniform words."""
    if not 2 <= n_bits <= 16:
        raise DomainError(f"word width must be in [2, 16] bits, got {n_bits!r}")
    if not 0.0 <= p_b <= 0.5:
        raise DomainError(f"bit flip probability must be in [0, 0.5], got {p_b!r}")
    return ((4.0**n_bits) - 1.0) * p_b / 3.0


def error_variance_single_flip(n_bits: int, p_b: float) -> float:
    """At-most-one-flip variant: (4**n - 1)/(3n) · (1 - (1-p)**n)."""
    if not 2 <= n_bits <= 16:
        raise DomainError(f"word width must be in [2, 16] bits, got {n_bits!r}")
    if not 0.0 <= p_b <= 0.5:
        raise DomainError(f"bit flip probability must be in [0, 0.5], got {p_b!r}")
    return ((4.0**n_bits) - 1.0) / (3.0 * n_bits) * (1.0 - (1.0 - p_b) ** n_bits)


def channel_noise(n_bits: int, p_b: float, scale: float | None = None) -> NoiseVariance:
    """Error variance as a tagged quantity; pass scale to convert to feature units."""
    var = error_variance(n_bits, p_b)
    if scale is None:
        return NoiseVariance(var, "quantized")
    if scale <= 0.0 or not math.isfinite(scale):
        raise DomainError(f"scale must be positive and finite, got {scale!r}")
    return NoiseVariance(var / scale**2, "feature")


def projected_error_stats(
    q_dims: int,
    n_bits: int,
    p_b: float,
    w: np.ndarray,
    rng: np.random.Generator,
    samples: int = 100_000,
) -> tuple[float, float, float]:
    """Empirical (mean, variance, ks) of wᵀδ for uniform random words.

    δ is the additive word error of the bit-flip channel. The KS statistic is
    taken against the zero-mean normal with the closed-form variance
    ‖w‖²·(4**n - 1)·p/3, which is what the projection converges to.
    """
    weights = np.asarray(w, dtype=np.float64)
    if weights.shape != (q_dims,):
        raise DomainError(f"w must have shape ({q_dims},), got {weights.shape}")
    if samples < 1:
        raise DomainError(f"samples must be >= 1, got {samples!r}")
    half = 1 << (n_bits - 1)
    z = np.empty(samples, dtype=np.float64)
    chunk = max(1, (1 << 22) // max(1, q_dims))
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        words = rng.integers(-half, half, size=(m, q_dims), dtype=np.int64)
        received = corrupt_words(words, n_bits, p_b, rng)
        z[done : done + m] = (received - words) @ weights
        done += m
    mean = float(z.mean())
    variance = float(z.var())
    sigma_sq = float(weights @ weights) * error_variance(n_bits, p_b)
    if sigma_sq == 0.0:
        return mean, variance, 0.0
    sigma = math.sqrt(sigma_sq)
    z.sort()
    n = z.size
    ks = 0.0
    for i in range(n):
        cdf = 0.5 * math.erfc(-z[i] / (sigma * math.sqrt(2.0)))
        ks = max(ks, abs((i + 1) / n - cdf), abs(cdf - i / n))
    return mean, variance, ks


def bpsk_bep(snr_linear: float) -> float:
    """Bit error probability of coherent BPSK: Q(sqrt(2·γ))."""
    if snr_linear <= 0.0:
        raise DomainError(f"snr must be positive, got {snr_linear!r}")
    return q_function(math.sqrt(2.0 * snr_linear))


def qam_bep(snr_linear: float, order: int) -> float:
    """Gray-coded square M-QAM bit error probability (nearest-neighbour form).

    min(1/2, 4/log2(M) · (1 - 1/sqrt(M)) · Q(sqrt(3γ/(M-1)))); exact for M=4.
    """
    if snr_linear <= 0.0:
        raise DomainError(f"snr must be positive, got {snr_linear!r}")
    if order == 2:
        return bpsk_bep(snr_linear)
    m = order
    root = math.isqrt(m)
    if m < 4 or root * root != m or (root & (root - 1)) != 0:
        raise DomainError(f"modulation order must be 2 or a power of 4, got {order!r}")
    bits = math.log2(m)
    p = (4.0 / bits) * (1.0 - 1.0 / root) * q_function(math.sqrt(3.0 * snr_linear / (m - 1)))
    return min(0.5, p)


def default_modulation_policy() -> tuple[tuple[float, int], ...]:
    """SNR-threshold table shipped with the package, as (snr_linear, M) rows."""
    raw = json.loads(
        resources.files("semcom").joinpath("data/modulation_policy.json").read_text()
    )
    rows = tuple(
        (10.0 ** (float(entry["snr_db"]) / 10.0), int(entry["M"])) for entry in raw["policy"]
    )
    return rows


def select_modulation(
    snr_linear: float, policy: tuple[tuple[float, int], ...] | None = None
) -> tuple[int, int, float]:
    """Pick the largest-rate entry whose SNR threshold is met.

    Returns (M, bits_per_symbol, bit_error_probability). Below the lowest
    threshold the link falls back to BPSK.
    """
    if snr_linear <= 0.0:
        raise DomainError(f"snr must be positive, got {snr_linear!r}")
    rows = default_modulation_policy() if policy is None else tuple(policy)
    if not rows:
        raise ConfigError("modulation policy must have at least one entry")
    last = -math.inf
    for threshold, order in rows:
        if threshold <= last:
            raise ConfigError("modulation policy thresholds must be strictly increasing")
        if order != 2 and (order < 4 or math.isqrt(order) ** 2 != order):
            raise ConfigError(f"modulation order {order!r} is not 2 or a power of 4")
        last = threshold
    chosen = 2
    for threshold, order in rows:
        if snr_linear >= threshold:
            chosen = order
    bits = int(round(math.log2(chosen)))
    return chosen, bits, qam_bep(snr_linear, chosen)


def resolved_bep(link: LinkConfig) -> tuple[float, int]:
    """(bit error probability, bits per symbol) implied by a link config."""
    if link.scheme == "fixed_binary":
        if link.bep is not None:
            return link.bep, 1
        return bpsk_bep(link.snr_linear), 1
    if link.scheme == "adaptive":
        _, bits, p_b = select_modulation(link.snr_linear, link.modulation_policy)
        return p_b, bits
    return 0.0, 1


def urllc_blocklength(
    snr_linear: float,
    packet_error: float,
    k_bits: int,
    precision: Precision = DEFAULT_PRECISION,
) -> int:
    """Smallest blocklength N that carries k_bits at the target error rate.

    Uses the normal-approximation achievable rate for the AWGN channel:
    N·C - sqrt(N·V)·Q⁻¹(ε) + log2(N)/2 >= k, with C = log2(1+γ) and
    V = γ(γ+2)/(1+γ)² · log2(e)². Raises LinkBudgetError when no
    N <= 10**9 satisfies the target (the link is saturated).
    """
    if snr_linear <= 0.0:
        raise DomainError(f"snr must be positive, got {snr_linear!r}")
    if not 0.0 < packet_error < 1.0:
        raise DomainError(f"packet error target must be in (0, 1), got {packet_error!r}")
    if k_bits < 1:
        raise DomainError(f"payload must be >= 1 bit, got {k_bits!r}")
    cap = math.log2(1.0 + snr_linear)
    dispersion = (snr_linear * (snr_linear + 2.0) / (1.0 + snr_linear) ** 2) * _LOG2E**2
    penalty = q_inverse(packet_error, precision)

    def achievable_margin(n: int) -> float:
        return n * cap - math.sqrt(n * dispersion) * penalty + 0.5 * math.log2(n) - k_bits

    if achievable_margin(1) >= 0.0:
        return 1
    hi = 2
    limit = 10**9
    while achievable_margin(hi) < 0.0:
        hi *= 2
        if hi > limit:
            raise LinkBudgetError(
                f"no blocklength <= {limit} reaches packet error {packet_error} "
                f"for {k_bits} bits at snr {snr_linear}"
            )
    lo = hi // 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if achievable_margin(mid) >= 0.0:
            hi = mid
        else:
            lo = mid
    return hi if hi <= limit else limit


def urllc_latency(
    snr_linear: float,
    packet_error: float,
    k_bits: int,
    bandwidth_hz: float,
    precision: Precision = DEFAULT_PRECISION,
) -> float:
    """Transmission time of the coded packet: blocklength / bandwidth."""
    if bandwidth_hz <= 0.0:
        raise DomainError(f"bandwidth must be positive, got {bandwidth_hz!r}")
    return urllc_blocklength(snr_linear, packet_error, k_bits, precision) / bandwidth_hz


def transmit_feature(
    x: np.ndarray,
    link: LinkConfig,
    n_bits: int | None = None,
    scale: float = 1.0,
    rng: np.random.Generator | None = None,
    transmissions: int = 1,
) -> TransmitResult:
    """Send one feature vector over the link and return what the receiver decodes.

    Uncoded schemes quantize once, corrupt each of `transmissions` copies
    independently, and average the dequantized copies. The coded reference
    scheme delivers the vector intact after the blocklength-derived delay.
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError("feature vector must be one-dimensional and non-empty")
    if transmissions < 1:
        raise DomainError(f"transmissions must be >= 1, got {transmissions!r}")
    bits = n_bits if n_bits is not None else link.bits_per_feature
    if link.scheme == "reliable_coded":
        payload = bits * arr.size
        n_block = urllc_blocklength(link.snr_linear, link.packet_error_target, payload)
        return TransmitResult(
            received=arr.copy(),
            latency_s=n_block / link.bandwidth_hz,
            bits_sent=n_block,
            bep_used=0.0,
            transmissions=1,
        )
    if rng is None:
        raise DomainError("uncoded schemes need an rng")
    p_b, sym_bits = resolved_bep(link)
    q = quantize(arr, bits, scale)
    acc = np.zeros(arr.size, dtype=np.float64)
    for _ in range(transmissions):
        acc += dequantize(bit_flip_channel(q, p_b, rng))
    payload = bits * arr.size * transmissions
    return TransmitResult(
        received=acc / transmissions,
        latency_s=payload / (link.bandwidth_hz * sym_bits),
        bits_sent=payload,
        bep_used=p_b,
        transmissions=transmissions,
    )


def transmit_batch(
    x_batch: np.ndarray,
    link: LinkConfig,
    n_bits: int | None = None,
    scale: float = 1.0,
    rng: np.random.Generator | None = None,
    transmissions: int = 1,
) -> np.ndarray:
    """Vectorized transmit_feature for Monte-Carlo runs; returns received batch."""
    arr = np.asarray(x_batch, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise DomainError("batch must be a non-empty (count, dims) array")
    if transmissions < 1:
        raise DomainError(f"transmissions must be >= 1, got {transmissions!r}")
    bits = n_bits if n_bits is not None else link.bits_per_feature
    if link.scheme == "reliable_coded":
        return arr.copy()
    if rng is None:
        raise DomainError("uncoded schemes need an rng")
    p_b, _ = resolved_bep(link)
    q = quantize(arr, bits, scale)
    acc = np.zeros(arr.shape, dtype=np.float64)
    for _ in range(transmissions):
        acc += corrupt_words(q.words, bits, p_b, rng).astype(np.float64)
    return acc / (transmissions * scale)
