"""Special-function checks against scipy/mpmath oracles plus algebraic properties.

scipy and mpmath are test-only dependencies: the package itself ships its own
implementations, and these tests are what license that choice.
"""

import math

import mpmath
import numpy as np
import pytest
import scipy.special
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

from semcom.errors import ConvergenceError, DomainError
from semcom.numerics import (
    Precision,
    chi_square_quantile,
    lambert_w0,
    lambert_w0_of_exp,
    q_function,
    q_inverse,
    regularized_lower_gamma,
)


class TestQFunction:
    def test_matches_scipy_over_moderate_range(self):
        xs = np.linspace(-37.0, 37.0, 301)
        for x in xs:
            expected = scipy.stats.norm.sf(x)
            assert q_function(float(x)) == pytest.approx(expected, rel=1e-12, abs=1e-300)

    def test_deep_tail_matches_mpmath(self):
        mpmath.mp.dps = 50
        for x in (38.0, 40.0, 50.0, 100.0, 200.0):
            expected = float(mpmath.ncdf(-x))
            assert q_function(x) == pytest.approx(expected, rel=1e-10)

    def test_center_and_limits(self):
        assert q_function(0.0) == pytest.approx(0.5, abs=1e-15)
        assert q_function(-200.0) == pytest.approx(1.0, abs=1e-15)

    @given(st.floats(min_value=-10.0, max_value=10.0, allow_nan=False))
    @settings(max_examples=200, deadline=None)
    def test_symmetry(self, x):
        assert q_function(x) + q_function(-x) == pytest.approx(1.0, abs=1e-12)

    def test_rejects_non_finite(self):
        with pytest.raises(DomainError):
            q_function(float("nan"))
        with pytest.raises(DomainError):
            q_function(float("inf"))


class TestQInverse:
    def test_matches_scipy(self):
        for p in (1e-12, 1e-9, 1e-4, 0.01, 0.2, 0.35, 0.5, 0.65, 0.9, 0.999):
            assert q_inverse(p) == pytest.approx(scipy.stats.norm.isf(p), rel=1e-9, abs=1e-12)

    def test_pinned_values(self):
        assert q_inverse(0.35) == pytest.approx(0.3853204664075677, rel=1e-12)
        assert q_inverse(1e-9) == pytest.approx(5.997807015007682, rel=1e-10)

    @given(st.floats(min_value=1e-15, max_value=1.0 - 1e-15))
    @settings(max_examples=300, deadline=None)
    def test_round_trip(self, p):
        assert q_function(q_inverse(p)) == pytest.approx(p, rel=1e-8)

    def test_rejects_out_of_range(self):
        for p in (0.0, 1.0, -0.5, 2.0, float("nan")):
            with pytest.raises(DomainError):
                q_inverse(p)


class TestRegularizedLowerGamma:
    def test_matches_scipy_grid(self):
        for s in (0.5, 1.0, 2.5, 10.0, 50.0, 200.0):
            for x in (1e-6, 0.1, 1.0, 5.0, 50.0, 300.0):
                expected = scipy.special.gammainc(s, x)
                assert regularized_lower_gamma(s, x) == pytest.approx(
                    expected, rel=1e-11, abs=1e-300
                )

    def test_edges(self):
        assert regularized_lower_gamma(3.0, 0.0) == 0.0
        with pytest.raises(DomainError):
            regularized_lower_gamma(0.0, 1.0)
        with pytest.raises(DomainError):
            regularized_lower_gamma(1.0, -1.0)


class TestChiSquareQuantile:
    def test_matches_scipy_grid(self):
        for zeta in (0.01, 0.1, 0.5, 0.9, 0.95, 0.99, 0.999):
            for dof in (1, 2, 3, 10, 100, 500):
                expected = scipy.stats.chi2.ppf(zeta, dof)
                assert chi_square_quantile(zeta, dof) == pytest.approx(expected, rel=1e-9)

    def test_pinned_values(self):
        assert chi_square_quantile(0.95, 2) == pytest.approx(5.991464547107979, rel=1e-10)
        assert chi_square_quantile(0.95, 100) == pytest.approx(124.34211340402064, rel=1e-10)

    @given(
        st.floats(min_value=0.005, max_value=0.995),
        st.integers(min_value=1, max_value=300),
    )
    @settings(max_examples=150, deadline=None)
    def test_round_trip_through_gamma_cdf(self, zeta, dof):
        q = chi_square_quantile(zeta, dof)
        assert regularized_lower_gamma(0.5 * dof, 0.5 * q) == pytest.approx(zeta, abs=1e-9)

    def test_rejects_bad_arguments(self):
        with pytest.raises(DomainError):
            chi_square_quantile(0.0, 2)
        with pytest.raises(DomainError):
            chi_square_quantile(0.95, 0)


class TestLambertW:
    def test_matches_scipy_real_branch(self):
        xs = [-1.0 / math.e + 1e-9, -0.3, -0.1, 0.0, 1e-8, 0.5, 1.0, math.e, 10.0, 1e4, 1e8]
        for x in xs:
            expected = float(scipy.special.lambertw(x).real)
            assert lambert_w0(x) == pytest.approx(expected, rel=1e-8, abs=1e-10)

    def test_branch_point(self):
        assert lambert_w0(-1.0 / math.e) == pytest.approx(-1.0, abs=1e-6)

    @given(st.floats(min_value=-0.36, max_value=1e12))
    @settings(max_examples=300, deadline=None)
    def test_defining_identity(self, x):
        w = lambert_w0(x)
        assert w * math.exp(w) == pytest.approx(x, rel=1e-10, abs=1e-10)

    def test_rejects_below_branch(self):
        with pytest.raises(DomainError):
            lambert_w0(-1.0)

    def test_of_exp_matches_direct_form(self):
        for log_x in (-5.0, 0.0, 3.0, 100.0, 650.0):
            assert lambert_w0_of_exp(log_x) == pytest.approx(
                lambert_w0(math.exp(log_x)), rel=1e-10
            )

    def test_of_exp_huge_arguments(self):
        # w + ln w = log_x is the defining identity once exp(log_x) overflows
        for log_x in (800.0, 5000.0, 1e6):
            w = lambert_w0_of_exp(log_x)
            assert w + math.log(w) == pytest.approx(log_x, rel=1e-12)

    def test_of_exp_matches_mpmath(self):
        mpmath.mp.dps = 40
        for log_x in (10.0, 100.0, 700.0, 2000.0):
            expected = float(mpmath.lambertw(mpmath.exp(log_x)))
            assert lambert_w0_of_exp(log_x) == pytest.approx(expected, rel=1e-10)


class TestPrecision:
    def test_validation(self):
        with pytest.raises(DomainError):
            Precision(abs_tol=0.0)
        with pytest.raises(DomainError):
            Precision(max_iter=0)

    def test_exhaustion_raises(self):
        starved = Precision(abs_tol=1e-30, max_iter=2)
        with pytest.raises(ConvergenceError):
            regularized_lower_gamma(50.0, 45.0, starved)
