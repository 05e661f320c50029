"""Tests for Jost solutions and right-endpoint log-derivatives."""

import math

import numpy as np
import pytest

from besselspec.models.base import GridSpec, WaveKind
from besselspec.models.potential import ConstantTerm, ExpDecayTerm, PotentialSpec, WellTerm
from besselspec.solutions.jost import (
    coulomb_start,
    jost_solution,
    jost_values,
    tail_radius,
    weyl_log_derivative,
)
from besselspec.utils.exceptions import IntegrabilityError, TruncationError, ValidationError


class TestTailRadius:
    """Test the adaptive truncation radius."""

    def test_compact_support(self):
        pot = PotentialSpec(l=0.0, q=(WellTerm(depth=-1.0, radius=3.0),))
        assert tail_radius(pot) == 3.0

    def test_exp_decay_budget(self, exp_decay_potential, settings):
        """(X + 1) e^(-X) = 1e-8 near X = 20.7."""
        radius = tail_radius(exp_decay_potential, settings)
        assert 19.0 < radius < 23.0
        assert exp_decay_potential.tail_moment(radius) <= settings.tail_tolerance * 1.01

    def test_coulomb_radius(self):
        assert tail_radius(PotentialSpec(l=0.0, gamma=1.0)) >= 200.0

    def test_constant_tail_rejected(self, constant_potential):
        with pytest.raises(IntegrabilityError):
            tail_radius(constant_potential)

    def test_slow_decay_exceeds_budget(self):
        pot = PotentialSpec(l=0.0, q=(ExpDecayTerm(rate=0.01),))
        with pytest.raises(TruncationError, match="tail budget"):
            tail_radius(pot)


class TestJostValues:
    """Test the Jost solution against closed forms."""

    def test_free_plane_wave(self, free_potential, settings):
        x = np.array([0.2, 0.7, 1.0])
        k = 2.0 + 0.3j
        f, df = jost_values(free_potential, k, x, settings)
        np.testing.assert_allclose(f, np.exp(1j * k * x), rtol=1e-9)
        np.testing.assert_allclose(df, 1j * k * np.exp(1j * k * x), rtol=1e-9)

    def test_square_well_closed_form(self, settings):
        """Inside q = -2 on (0, 1) the solution is a shifted trigonometric wave."""
        pot = PotentialSpec(l=0.0, q=(WellTerm(depth=-2.0, radius=1.0),))
        k = 3.0
        f, _ = jost_values(pot, k, [0.5], settings)
        root = math.sqrt(11.0)
        a = 0.5 * root
        expected = np.exp(3j) * (math.cos(a) - 3j / root * math.sin(a))
        assert abs(f[0] - expected) / abs(expected) < 1e-6

    def test_conjugate_extension(self, exp_decay_potential, settings):
        x = [0.5, 1.0]
        right, _ = jost_values(exp_decay_potential, 3.0, x, settings)
        left, _ = jost_values(exp_decay_potential, -3.0 + 0j, x, settings)
        np.testing.assert_allclose(left, np.conj(right), rtol=1e-12)

    @pytest.mark.parametrize("k", [0.0, 1.0 - 1.0j])
    def test_inadmissible_momentum(self, free_potential, k):
        with pytest.raises(ValidationError, match="k"):
            jost_values(free_potential, k, [1.0])

    def test_sample(self, exp_decay_potential, settings):
        grid = GridSpec.uniform(0.5, 2.0, 4)
        sample = jost_solution(exp_decay_potential, 1.5, grid, settings)
        assert sample.kind is WaveKind.JOST
        assert sample.energy.z == pytest.approx(2.25)

    def test_coulomb_start_asymptotics(self):
        """Far out the distorted wave has unit modulus on the real axis."""
        pot = PotentialSpec(l=0.0, gamma=1.0)
        value, _ = coulomb_start(pot, 2.0, 400.0)
        assert abs(abs(value) - 1) < 1e-3


class TestWeylLogDerivative:
    """Test the log-derivative of the right Weyl solution."""

    def test_half_line_free(self, free_potential, settings):
        z = 4.0j
        k = complex(np.sqrt(z))
        value = weyl_log_derivative(free_potential, z, 0.5, settings=settings)
        assert abs(value - 1j * k) < 1e-8 * abs(k)

    def test_interval_dirichlet(self, free_potential, settings):
        """y(1) = 0 gives y = sin(k (x - 1))."""
        pot = free_potential.on_interval(1.0)
        z = 2.0 + 1.0j
        k = complex(np.sqrt(z))
        value = weyl_log_derivative(pot, z, 0.5, settings=settings)
        expected = k / np.tan(k * (0.5 - 1.0))
        assert abs(value - expected) < 1e-8 * abs(expected)

    def test_constant_background(self, settings):
        """A constant only shifts the energy."""
        pot = PotentialSpec(l=0.0, q=(ConstantTerm(value=1.0),))
        z = 1.0 + 4.0j
        k = complex(np.sqrt(z - 1.0))
        value = weyl_log_derivative(pot, z, 0.5, settings=settings)
        assert abs(value - 1j * k) < 1e-8 * abs(k)

    def test_strong_decay_wkb_start(self, free_potential, settings):
        """Far in the upper half plane the solution is e^(ikx) to high accuracy."""
        z = 1e6j
        k = complex(np.sqrt(z))
        value = weyl_log_derivative(free_potential.on_interval(5.0), z, 0.5, settings=settings)
        assert abs(value - 1j * k) < 1e-6 * abs(k)
