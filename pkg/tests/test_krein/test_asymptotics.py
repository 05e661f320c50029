"""Tests for limit orders and the one-term asymptotics of string m-functions."""

import math

import numpy as np
import pytest

from besselspec.krein.asymptotics import (
    bennewitz_asymptote,
    bennewitz_constant,
    free_limit_order,
    inverse_ratio_check,
    invert_F,
    lambert_expansion_residual,
    limit_order,
    limit_order_constant,
    log_endpoint_inverse,
    log_endpoint_mass,
    log_endpoint_R0,
    log_endpoint_R0_tilde,
    log_endpoint_xi,
    string_constant_identity,
)
from besselspec.krein.string import power_string, string_m
from besselspec.utils.exceptions import DomainError, InconclusiveError, ValidationError


class TestConstants:
    """Test K_nu, A_alpha and the free-string constant identity."""

    @pytest.mark.parametrize("l", [0.0, 0.1, 0.25, 0.4])
    def test_three_forms_coincide(self, l):
        lhs, middle, rhs = string_constant_identity(l)
        assert abs(lhs - rhs) < 1e-10, f"K A^nu = {lhs}, sin(pi nu) / C^2 = {rhs} at l = {l}"
        assert abs(middle - rhs) < 1e-10

    def test_bennewitz_endpoints(self):
        assert bennewitz_constant(0.0) == 1.0
        assert bennewitz_constant(1.0) == 1.0
        assert bennewitz_constant(0.5) == pytest.approx(1.0, rel=1e-14)

    def test_bennewitz_domain(self):
        with pytest.raises(DomainError, match=r"\[0, 1\]"):
            bennewitz_constant(1.5)

    def test_free_limit_order(self):
        assert free_limit_order(0.0) == 1.0
        assert free_limit_order(0.25) == pytest.approx(1 / 3)
        assert free_limit_order(-0.5) == math.inf
        with pytest.raises(DomainError):
            free_limit_order(0.5)

    def test_limit_order_constant_domain(self):
        assert limit_order_constant(0.0) == 1.0
        with pytest.raises(DomainError, match="-1/2 < l < 1/2"):
            limit_order_constant(-0.5)


class TestLimitOrder:
    """Test the limit-order estimator on tabulated mass functions."""

    @pytest.mark.parametrize("alpha", [1 / 3, 1.0, 2.0])
    def test_power_law(self, alpha):
        sm = power_string(alpha)
        lod = limit_order(sm.xi, sm.R)
        assert lod.alpha == pytest.approx(alpha, rel=1e-6)
        assert lod.nu == pytest.approx(1 / (1 + alpha), rel=1e-6)
        assert lod.spread < 1e-6

    def test_exponentially_flat_mass(self):
        """R_0 vanishes faster than any power: infinite order, nu = 0."""
        xi = np.geomspace(5e-3, 1.0, 400)
        lod = limit_order(xi, log_endpoint_R0(xi), window=(0.01, 0.05))
        assert lod.alpha == math.inf
        assert lod.nu == 0.0

    def test_inconclusive_estimates(self):
        xi = np.geomspace(1e-7, 1.0, 500)
        R = np.where(xi < 2e-6, xi, 2e-6 * (xi / 2e-6) ** 3)
        with pytest.raises(InconclusiveError, match="spread by"):
            limit_order(xi, R)

    def test_window_outside_table(self):
        xi = np.geomspace(1e-3, 1.0, 100)
        with pytest.raises(ValidationError, match="does not cover"):
            limit_order(xi, xi ** 2)

    def test_table_must_increase(self):
        xi = np.geomspace(1e-8, 1.0, 100)
        with pytest.raises(ValidationError, match="strictly increasing"):
            limit_order(xi, 1.0 / xi)

    def test_scales_exceed_one(self):
        xi = np.geomspace(1e-8, 1.0, 100)
        with pytest.raises(ValidationError, match="exceed 1"):
            limit_order(xi, xi, scales=(0.5, 2.0))


class TestBennewitzAsymptote:
    """Test M(mu rho) ~ K_nu (-mu)^(-nu) f(rho)."""

    @pytest.mark.parametrize("alpha", [1 / 3, 1.0])
    def test_power_string(self, alpha, settings):
        sm = power_string(alpha)
        lod = limit_order(sm.xi, sm.R)
        rho = 1e4
        predicted = bennewitz_asymptote(lod, 1j, [rho])[0]
        M = string_m(sm, 1j * rho, settings=settings)
        assert abs(M / predicted - 1) < 0.05, f"M = {M}, predicted {predicted} at alpha = {alpha}"

    def test_closed_form_inverse(self, settings):
        sm = power_string(1.0)
        lod = limit_order(sm.xi, sm.R)
        rho = np.array([1e2, 1e4])
        tabulated = bennewitz_asymptote(lod, 1j, rho)
        closed = bennewitz_asymptote(lod, 1j, rho, f=lambda r: r ** -0.5)
        np.testing.assert_allclose(tabulated, closed, rtol=1e-6)

    def test_direction_on_unit_circle(self):
        sm = power_string(1.0)
        lod = limit_order(sm.xi, sm.R)
        with pytest.raises(ValidationError, match="unit circle"):
            bennewitz_asymptote(lod, 2j, [10.0])
        with pytest.raises(ValidationError, match="unit circle"):
            bennewitz_asymptote(lod, 1.0, [10.0])


class TestLogarithmicEndpoint:
    """Closed forms of the free string at l = -1/2."""

    @pytest.mark.parametrize("x", [1e-3, 0.1, 0.5])
    def test_mass_in_string_coordinate(self, x):
        assert log_endpoint_R0(log_endpoint_xi(x)) == pytest.approx(log_endpoint_mass(x), rel=1e-12)

    def test_leading_term(self):
        xi = np.array([1e-2, 1e-1])
        ratio = log_endpoint_R0(xi) / log_endpoint_R0_tilde(xi)
        np.testing.assert_allclose(ratio, 1 + xi + xi ** 2 / 2)

    @pytest.mark.parametrize("rho", [1e2, 1e4, 1e6])
    def test_inverse(self, rho):
        xi = log_endpoint_inverse(rho)
        assert 2 * xi * math.exp(2 / xi) == pytest.approx(rho, rel=1e-10)

    def test_inverse_domain(self):
        with pytest.raises(DomainError, match="4e"):
            log_endpoint_inverse(5.0)

    def test_lambert_expansion(self):
        assert lambert_expansion_residual(1e6) < 0.03
        assert lambert_expansion_residual(1e12) < lambert_expansion_residual(1e6)
        with pytest.raises(DomainError):
            lambert_expansion_residual(2.0)

    def test_inverse_ratio_tends_to_one(self):
        """f / f0 for R_0 and its leading term approaches one."""
        xi = np.geomspace(0.02, 1.0, 2000)
        R, R_tilde = log_endpoint_R0(xi), log_endpoint_R0_tilde(xi)
        ratios = inverse_ratio_check(xi, R, R_tilde, [1e3, 1e6, 1e12])
        gaps = np.abs(ratios - 1)
        assert np.all(np.diff(gaps) < 0)
        assert gaps[-1] < 0.05

    def test_invert_F_range(self):
        xi = np.geomspace(0.1, 1.0, 50)
        with pytest.raises(ValidationError, match="outside"):
            invert_F(xi, xi, [1e9])
