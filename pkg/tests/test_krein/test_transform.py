"""Tests for the Liouville transform onto a Krein string."""

import math

import numpy as np
import pytest

from besselspec.krein.asymptotics import limit_order
from besselspec.krein.string import mass_eigenvalue_count
from besselspec.krein.transform import (
    bessel_m_tilde,
    isometry_defect,
    liouville_transform,
    printed_beta_tilde,
    theta_via_string,
    transformed_beta,
    transformed_m,
)
from besselspec.models.potential import PotentialSpec
from besselspec.specfun.free import free_theta
from besselspec.utils.exceptions import ValidationError


@pytest.fixture
def free_string(free_potential, settings):
    """String of the free l = 0 problem; theta_0 = cosh x at lambda_0 = -1."""
    return liouville_transform(free_potential, settings=settings)


class TestLiouvilleTransform:
    """Test the string built from theta(lambda_0, .)."""

    def test_free_reference_solution(self, free_string):
        assert free_string.lambda0 == -1.0
        np.testing.assert_allclose(free_string.theta0, np.cosh(free_string.t), rtol=1e-7)
        np.testing.assert_allclose(free_string.dtheta0, np.sinh(free_string.t), rtol=1e-7, atol=1e-9)

    def test_free_coordinate_and_mass(self, free_string):
        """xi = tanh x and R = x/2 + sinh(2x)/4."""
        t = free_string.t
        np.testing.assert_allclose(free_string.xi, np.tanh(t), rtol=1e-7)
        np.testing.assert_allclose(free_string.R, t / 2 + np.sinh(2 * t) / 4, rtol=1e-7)
        assert free_string.a == pytest.approx(math.tanh(1.0), rel=1e-7)

    def test_density(self, free_string):
        np.testing.assert_allclose(free_string.r, free_string.theta0 ** 4)

    def test_isometry(self, free_string):
        v = np.sin(math.pi * free_string.t)
        assert isometry_defect(free_string, v) < 1e-8

    def test_weyl_count_is_interval_length(self, free_string):
        """int sqrt(r) dxi = int dx, whatever theta_0 is."""
        count = mass_eigenvalue_count(free_string, 100.0)
        assert count == pytest.approx(10 / math.pi, rel=1e-6)

    @pytest.mark.parametrize("l, alpha", [(0.0, 1.0), (0.25, 1 / 3)])
    def test_limit_order_of_free_string(self, settings, l, alpha):
        sm = liouville_transform(PotentialSpec(l=l), settings=settings)
        lod = limit_order(sm.xi, sm.R)
        assert abs(lod.alpha / alpha - 1) < 0.01, f"alpha = {lod.alpha} at l = {l}"

    def test_limit_point_rejected(self):
        with pytest.raises(ValidationError, match="l < 1/2"):
            liouville_transform(PotentialSpec(l=0.75))

    def test_explicit_reference_energy(self, exp_decay_potential, settings):
        sm = liouville_transform(exp_decay_potential, lambda0=-3.0, settings=settings)
        assert sm.lambda0 == -3.0
        assert np.all(sm.theta0 > 0)

    def test_theta_through_string(self, free_potential, settings):
        z = 3 + 1j
        x = np.array([0.05, 0.5, 2.0])
        values, derivs = theta_via_string(free_potential, z, x, settings)
        expected, dexpected = free_theta(0.0, z, x)
        np.testing.assert_allclose(values, expected, rtol=1e-7)
        np.testing.assert_allclose(derivs, dexpected, rtol=1e-6, atol=1e-9)


class TestBoundaryAngle:
    """Test the boundary angle carried to the string end."""

    def test_dirichlet_stays_dirichlet(self):
        assert transformed_beta(1.7, -0.4, 0.0) == 0.0
        assert printed_beta_tilde(1.7, 0.0) == 0.0

    def test_cotangent_relation(self):
        theta0, dtheta0, beta = 1.3, 0.6, 0.7
        angle = transformed_beta(theta0, dtheta0, beta)
        expected = theta0 ** 2 / math.tan(beta) - theta0 * dtheta0
        assert 1 / math.tan(angle) == pytest.approx(expected, rel=1e-12)
        assert 0 <= angle < math.pi

    def test_printed_form_differs_off_dirichlet(self):
        theta0, dtheta0, beta = 1.3, 0.6, 0.7
        assert transformed_beta(theta0, dtheta0, beta) != pytest.approx(printed_beta_tilde(theta0, beta))


class TestStringIdentity:
    """The string m-function of the transformed problem equals m~."""

    @pytest.mark.slow
    @pytest.mark.parametrize("z", [2 + 2j, -4 + 10j, 50 + 50j])
    def test_m_functions_agree(self, exp_decay_potential, settings, z):
        M = transformed_m(exp_decay_potential, z, settings=settings)
        m_tilde = bessel_m_tilde(exp_decay_potential, z, settings=settings)
        assert abs(M - m_tilde) < 1e-6 * abs(m_tilde), f"M = {M}, m~ = {m_tilde} at z = {z}"

    @pytest.mark.slow
    def test_m_functions_agree_at_generic_l(self, settings):
        pot = PotentialSpec(l=0.25)
        z = 5 + 5j
        M = transformed_m(pot, z, settings=settings)
        m_tilde = bessel_m_tilde(pot, z, settings=settings)
        assert abs(M - m_tilde) < 1e-6 * abs(m_tilde)
