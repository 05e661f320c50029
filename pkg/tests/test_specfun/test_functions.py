"""Tests for the special-function wrappers."""

import math

import numpy as np
import pytest
from scipy import special

from besselspec.specfun.functions import (
    bessel_trio,
    besselj_series,
    coupling_constant,
    gamma_fn,
    lambert_w_m1,
    riccati_pair,
)
from besselspec.utils.exceptions import DomainError


class TestGamma:
    """Test the validated Gamma wrapper."""

    def test_half_integer_value(self):
        """Gamma(1/2) = sqrt(pi)."""
        assert abs(gamma_fn(0.5) - math.sqrt(math.pi)) < 1e-14

    def test_complex_argument(self):
        """Complex input stays complex and matches scipy."""
        value = gamma_fn(1 + 1j)
        assert isinstance(value, complex)
        assert abs(value - complex(special.gamma(1 + 1j))) < 1e-14

    @pytest.mark.parametrize("pole", [0.0, -1.0, -3.0])
    def test_poles_raise(self, pole):
        """Nonpositive integers are poles."""
        with pytest.raises(DomainError, match="pole"):
            gamma_fn(pole)


class TestBesselTrio:
    """Test J, Y and H1 of one order."""

    def test_hankel_combination(self):
        """H1 = J + iY."""
        trio = bessel_trio(0.75, 2.0 + 0.5j)
        assert abs(trio.H1 - (trio.J + 1j * trio.Y)) < 1e-12

    def test_series_agrees_with_library(self):
        """The power series is an independent check of J."""
        for nu, w in [(0.5, 1.0), (1.25, 3.0 + 1.0j), (2.0, 0.1)]:
            trio = bessel_trio(nu, w)
            assert abs(besselj_series(nu, w) - trio.J) < 1e-12 * max(1.0, abs(trio.J))

    def test_zero_argument_raises(self):
        with pytest.raises(DomainError, match="singular"):
            bessel_trio(0.5, 0.0)

    def test_negative_order_raises(self):
        with pytest.raises(DomainError, match="nonnegative"):
            bessel_trio(-0.5, 1.0)


class TestLambertW:
    """Test the lower real branch of Lambert W."""

    @pytest.mark.parametrize("x", [-0.3, -0.1, -1e-3, -1e-6])
    def test_residual(self, x):
        """w e^w reproduces x on the lower branch."""
        w = lambert_w_m1(x)
        assert w <= -1.0
        assert abs(w * math.exp(w) - x) < 1e-13 * abs(x), f"residual too large at x = {x}"

    def test_branch_point(self):
        assert lambert_w_m1(-math.exp(-1.0)) == pytest.approx(-1.0, abs=1e-6)

    def test_log_expansion(self):
        """W_-1(-1/X) ~ -(log X + log log X) for large X."""
        X = 1e6
        expansion = -(math.log(X) + math.log(math.log(X)))
        w = lambert_w_m1(-1 / X)
        assert abs(w / expansion - 1) < 0.05

    @pytest.mark.parametrize("x", [0.1, -0.5, 0.0])
    def test_outside_domain_raises(self, x):
        with pytest.raises(DomainError):
            lambert_w_m1(x)


class TestCouplingConstant:
    """Test C_l = sqrt(pi) / (Gamma(l + 3/2) 2^(l+1))."""

    def test_l_zero(self):
        assert coupling_constant(0.0) == pytest.approx(1.0, rel=1e-14)

    def test_critical(self):
        assert coupling_constant(-0.5) == pytest.approx(math.sqrt(math.pi / 2), rel=1e-14)

    def test_l_one(self):
        """C_1 = 1/3."""
        assert coupling_constant(1.0) == pytest.approx(1 / 3, rel=1e-14)


class TestRiccatiPair:
    """Test the Riccati-Bessel waves."""

    def test_l_zero_is_sine_and_cosine(self):
        x = np.linspace(0.1, 5.0, 20)
        k = 1.7
        s, ds, c, dc = riccati_pair(0.0, k, x)
        np.testing.assert_allclose(s, np.sin(k * x), atol=1e-13)
        np.testing.assert_allclose(c, np.cos(k * x), atol=1e-13)
        np.testing.assert_allclose(ds, k * np.cos(k * x), atol=1e-12)
        np.testing.assert_allclose(dc, -k * np.sin(k * x), atol=1e-12)

    def test_wronskian(self):
        """W(c, s) = c s' - c' s = k for every l."""
        x = np.array([0.5, 2.0, 7.0])
        k = 2.5
        for l in (0.25, 1.0, 2.5):
            s, ds, c, dc = riccati_pair(l, k, x)
            np.testing.assert_allclose(c * ds - dc * s, k, rtol=1e-10)
