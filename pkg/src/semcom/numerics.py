"""Scalar special functions and root solvers.

Every closed-form bound downstream reduces to a handful of classical
functions: the Gaussian tail and its inverse, chi-square quantiles, the
regularized lower incomplete gamma, and the principal Lambert W branch. They
are implemented directly (series, continued fractions, bracketed bisection
with Newton polish) so the runtime package needs no stats dependency; the
test suite cross-checks each routine against scipy/mpmath oracles.

All functions are total over their stated domains and raise
:class:`~semcom.errors.DomainError` outside them — never a silent NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError

__all__ = [
    "Precision",
    "DEFAULT_PRECISION",
    "q_function",
    "q_inverse",
    "chi_square_quantile",
    "regularized_lower_gamma",
    "lambert_w0",
    "lambert_w0_of_exp",
]

_SQRT2 = math.sqrt(2.0)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_NEG_INV_E = -math.exp(-1.0)


@dataclass(frozen=True)
class Precision:
    """Tolerance/effort budget for the iterative solvers."""

    abs_tol: float = 1e-12
    max_iter: int = 1000

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0.0):
            raise DomainError("Precision.abs_tol must be positive")
        if self.max_iter < 1:
            raise DomainError("Precision.max_iter must be at least 1")


DEFAULT_PRECISION = Precision()


def q_function(x: float) -> float:
    """Upper-tail probability P(Z > x) of the standard normal.

    Uses ``erfc`` over the range where it is representable and switches to a
    log-space asymptotic expansion beyond x ≈ 37, where ``erfc`` underflows;
    deep tails therefore degrade gracefully toward 0.0 instead of producing
    NaN or losing the exponent.
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"q_function requires finite x, got {x!r}")
    ax = abs(x)
    if ax <= 37.0:
        tail = 0.5 * math.erfc(ax / _SQRT2)
    else:
        tail = math.exp(_log_q_tail(ax))
    return tail if x >= 0.0 else 1.0 - tail


def _log_q_tail(x: float) -> float:
    # log Q(x) ~ -x²/2 - log(x·√(2π)) + log Σ (-1)^k (2k-1)!!/x^{2k}.
    # Only used for x > 37, where the series reaches machine precision in a
    # few terms (first neglected term < (2k-1)!!/x^{2k}).
    inv_x2 = 1.0 / (x * x)
    series = 1.0
    term = 1.0
    for k in range(1, 16):
        term *= -(2 * k - 1) * inv_x2
        series += term
        if abs(term) < 1e-18:
            break
    return -0.5 * x * x - math.log(x) - _LOG_SQRT_2PI + math.log(series)


def q_inverse(p: float, precision: Precision = DEFAULT_PRECISION) -> float:
    """The x with q_function(x) = p, for 0 < p < 1."""
    if not (0.0 < p < 1.0):
        raise DomainError(f"q_inverse requires 0 < p < 1, got {p!r}")
    if p == 0.5:
        return 0.0
    if p > 0.5:
        return -q_inverse(1.0 - p, precision)
    lo, hi = 0.0, 45.0
    for _ in range(precision.max_iter):
        mid = 0.5 * (lo + hi)
        if q_function(mid) > p:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * (1.0 + hi):
            break
    x = 0.5 * (lo + hi)
    # Newton polish: d/dx Q(x) = -φ(x).
    for _ in range(4):
        pdf = math.exp(-0.5 * x * x) / _SQRT_2PI
        if pdf <= 0.0:
            break
        x += (q_function(x) - p) / pdf
    return x


def regularized_lower_gamma(
    s: float, x: float, precision: Precision = DEFAULT_PRECISION
) -> float:
    """P(s, x) = γ(s, x)/Γ(s), the regularized lower incomplete gamma.

    Series representation for x < s+1, continued fraction (modified Lentz)
    for the complementary function otherwise — the classic split that keeps
    both expansions in their fast-converging regimes.
    """
    s = float(s)
    x = float(x)
    if not (math.isfinite(s) and math.isfinite(x)) or s <= 0.0 or x < 0.0:
        raise DomainError(f"regularized_lower_gamma requires s > 0, x >= 0, got ({s!r}, {x!r})")
    if x == 0.0:
        return 0.0
    if x < s + 1.0:
        return _lower_gamma_series(s, x, precision)
    return 1.0 - _upper_gamma_cf(s, x, precision)


def _log_gamma_prefix(s: float, x: float) -> float:
    return -x + s * math.log(x) - math.lgamma(s)


def _lower_gamma_series(s: float, x: float, precision: Precision) -> float:
    ap = s
    total = 1.0 / s
    delta = total
    for _ in range(precision.max_iter):
        ap += 1.0
        delta *= x / ap
        total += delta
        if abs(delta) < abs(total) * 1e-16:
            return total * math.exp(_log_gamma_prefix(s, x))
    raise ConvergenceError("lower incomplete gamma series did not converge")


def _upper_gamma_cf(s: float, x: float, precision: Precision) -> float:
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b if b != 0.0 else 1.0 / tiny
    h = d
    for i in range(1, precision.max_iter + 1):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h * math.exp(_log_gamma_prefix(s, x))
    raise ConvergenceError("upper incomplete gamma continued fraction did not converge")


def chi_square_quantile(
    zeta: float, dof: int, precision: Precision = DEFAULT_PRECISION
) -> float:
    """Chi-square quantile: the x with P(dof/2, x/2) = zeta."""
    if not (0.0 < zeta < 1.0):
        raise DomainError(f"chi_square_quantile requires 0 < zeta < 1, got {zeta!r}")
    dof = int(dof)
    if dof < 1:
        raise DomainError(f"chi_square_quantile requires dof >= 1, got {dof!r}")
    s = 0.5 * dof

    def cdf(x: float) -> float:
        return regularized_lower_gamma(s, 0.5 * x, precision)

    hi = dof + 10.0 * math.sqrt(2.0 * dof) + 10.0
    for _ in range(200):
        if cdf(hi) >= zeta:
            break
        hi *= 2.0
    else:
        raise ConvergenceError("chi_square_quantile bracket expansion failed")
    lo = 0.0
    for _ in range(precision.max_iter):
        mid = 0.5 * (lo + hi)
        if cdf(mid) < zeta:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-14 * (1.0 + hi):
            break
    x = 0.5 * (lo + hi)
    # Newton polish with the chi-square density.
    for _ in range(4):
        if x <= 0.0:
            break
        pdf = 0.5 * math.exp((s - 1.0) * math.log(0.5 * x) - 0.5 * x - math.lgamma(s))
        if pdf <= 0.0 or not math.isfinite(pdf):
            break
        x -= (cdf(x) - zeta) / pdf
    return x


def lambert_w0(x: float, precision: Precision = DEFAULT_PRECISION) -> float:
    """Principal branch of Lambert's W: the w >= -1 with w·e^w = x.

    Defined for x >= -1/e. Starts from a branch-point series near -1/e or a
    log-log guess for large x, then Halley iterations; the returned value
    satisfies |w·e^w - x| <= abs_tol·max(1, |x|).
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"lambert_w0 requires finite x, got {x!r}")
    if x < _NEG_INV_E:
        if x > _NEG_INV_E - 1e-15:
            x = _NEG_INV_E  # tolerate roundoff at the branch point
        else:
            raise DomainError(f"lambert_w0 requires x >= -1/e, got {x!r}")
    if x == 0.0:
        return 0.0
    if x < -0.2:
        p = math.sqrt(2.0 * (math.e * x + 1.0))
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p**3
    elif x < math.e:
        w = x / (1.0 + x)
    else:
        lx = math.log(x)
        w = lx - math.log(lx)
    tol = precision.abs_tol * max(1.0, abs(x))
    for _ in range(precision.max_iter):
        ew = math.exp(w)
        f = w * ew - x
        if abs(f) <= tol:
            return w
        wp1 = w + 1.0
        w -= f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
    ew = math.exp(w)
    if abs(w * ew - x) <= 1e-8 * max(1.0, abs(x)):
        return w
    raise ConvergenceError(f"lambert_w0 failed to converge for x={x!r}")


def lambert_w0_of_exp(log_x: float, precision: Precision = DEFAULT_PRECISION) -> float:
    """W0(exp(log_x)) without ever forming exp(log_x).

    Needed where the W argument is astronomically large (retransmission
    counts at wide margins put e^{(σ+Φ)²} far past float range). For
    moderate log_x this defers to :func:`lambert_w0`; for large log_x it
    solves w + ln w = log_x by Newton iteration.
    """
    log_x = float(log_x)
    if not math.isfinite(log_x):
        raise DomainError(f"lambert_w0_of_exp requires finite log_x, got {log_x!r}")
    if log_x < 700.0:
        return lambert_w0(math.exp(log_x), precision)
    w = log_x - math.log(log_x)
    for _ in range(precision.max_iter):
        step = (w + math.log(w) - log_x) * w / (w + 1.0)
        w -= step
        if abs(step) <= 1e-13 * w:
            return w
    raise ConvergenceError(f"lambert_w0_of_exp failed to converge for log_x={log_x!r}")
