"""Tests for the phase shift, the S-matrix and scattering data."""

import math

import numpy as np
import pytest

from besselspec.scattering.jost import jost_function
from besselspec.scattering.phase import (
    delta_integrability,
    phase_from_sine_fit,
    phase_shift,
    s_matrix,
    scattering_data,
    unwrap_from_top,
)
from besselspec.utils.exceptions import UnwrapError, ValidationError

K_GRID = np.geomspace(0.01, 50.0, 400)


def _wrapped(angle: float) -> float:
    return (angle + math.pi) % (2 * math.pi) - math.pi


class TestPhaseShift:
    """Test delta(k) with delta -> 0 at the top of the grid."""

    def test_free_phase_vanishes(self, free_potential, settings):
        delta = phase_shift(free_potential, [0.5, 1.0, 2.0, 4.0], settings)
        np.testing.assert_allclose(delta, 0.0, atol=1e-9)

    @pytest.mark.parametrize("k", [0.5, 1.0, 3.0])
    def test_sine_fit_agrees(self, shallow_well, settings, k):
        grid = np.unique(np.append(K_GRID, k))
        delta = phase_shift(shallow_well, grid, settings)[np.searchsorted(grid, k)]
        modulus, fitted = phase_from_sine_fit(shallow_well, k, settings=settings)
        assert abs(_wrapped(delta - fitted)) < 1e-4, f"delta = {delta}, sine fit {fitted} at k = {k}"
        direct = abs(jost_function(shallow_well, k, with_g=False, settings=settings).f)
        assert abs(modulus / direct - 1) < 1e-4

    def test_levinson(self, deep_well, settings):
        """One bound state: delta climbs to pi as k goes to zero."""
        delta = phase_shift(deep_well, K_GRID, settings)
        assert abs(delta[0] - math.pi) < 0.05
        assert abs(delta[-1]) < 0.2

    def test_grid_validation(self, shallow_well):
        with pytest.raises(ValidationError, match="empty"):
            phase_shift(shallow_well, [])
        with pytest.raises(ValidationError, match="strictly increasing"):
            phase_shift(shallow_well, [2.0, 1.0])
        with pytest.raises(ValidationError, match="positive"):
            phase_shift(shallow_well, [0.0, 1.0])

    def test_sine_fit_needs_positive_k(self, shallow_well):
        with pytest.raises(ValidationError, match="k > 0"):
            phase_from_sine_fit(shallow_well, 0.0)

    def test_integrability_estimates_settle(self, exp_decay_potential, settings):
        estimates = delta_integrability(exp_decay_potential, k_max=10.0, doublings=2, points=300, settings=settings)
        assert estimates.shape == (3,)
        steps = np.abs(np.diff(estimates))
        assert steps[-1] < steps[0]


class TestUnwrap:
    """Test continuation of principal angles from the top."""

    def test_follows_branch(self):
        angles = np.array([3.0, -3.1, -2.9])
        out = unwrap_from_top(angles)
        assert out[-1] == -2.9
        assert out[0] == pytest.approx(3.0 - 2 * math.pi)

    def test_large_jump(self):
        with pytest.raises(UnwrapError, match="refine the grid"):
            unwrap_from_top(np.array([0.0, 2.0]))


class TestScatteringMatrix:
    """Test S(k) and the bundled scattering data."""

    def test_unitarity(self, exp_decay_potential, settings):
        S = s_matrix(exp_decay_potential, [0.5, 2.0, 8.0], settings)
        np.testing.assert_allclose(np.abs(S), 1.0, atol=1e-10)

    def test_s_is_exp_two_i_delta(self, shallow_well, settings):
        grid = np.geomspace(0.5, 50.0, 200)
        S = s_matrix(shallow_well, grid, settings)
        delta = phase_shift(shallow_well, grid, settings)
        np.testing.assert_allclose(S, np.exp(2j * delta), atol=1e-8)

    def test_scattering_data(self, deep_well, settings):
        data = scattering_data(deep_well, K_GRID, settings=settings)
        assert data.N == 1
        assert data.kappas.size == 1
        assert data.g_vals is not None
        np.testing.assert_allclose(np.abs(data.S_vals), 1.0, atol=1e-10)

    def test_scattering_data_without_bound_states(self, deep_well, settings):
        data = scattering_data(deep_well, [1.0, 2.0], include_bound_states=False, with_g=False, settings=settings)
        assert data.N == 0
        assert data.g_vals is None
