"""Tests for Prüfer shooting and norming constants."""

import math

import numpy as np
import pytest
from scipy.optimize import brentq

from besselspec.models.potential import ExpDecayTerm, PotentialSpec
from besselspec.spectral.eigen import (
    default_window,
    eigen_count,
    eigenvalue,
    eigenvalues,
    norming_constants,
)
from besselspec.utils.exceptions import ValidationError, WindowError


def _square_well_state(depth: float) -> tuple[float, float]:
    """Lowest l = 0 bound state of q = -depth on (0, 1) and its norming constant."""

    def mismatch(kappa: float) -> float:
        inner = math.sqrt(depth - kappa * kappa)
        return inner / math.tan(inner) + kappa

    # lowest state: sqrt(depth - kappa^2) in (pi / 2, pi)
    lo = math.sqrt(depth - math.pi ** 2) + 1e-9
    hi = math.sqrt(depth - math.pi ** 2 / 4)
    kappa = brentq(mismatch, lo, hi, xtol=1e-15)
    inner = math.sqrt(depth - kappa * kappa)
    phi1 = math.sin(inner) / inner
    norm = (0.5 - math.sin(2 * inner) / (4 * inner)) / inner ** 2 + phi1 ** 2 / (2 * kappa)
    return -kappa * kappa, 1.0 / norm


class TestIntervalProblem:
    """q = 0, l = 0 on (0, 1): lambda_n = (n pi)^2 and gamma_n = 2 n^2 pi^2."""

    def test_dirichlet_eigenvalues(self, free_potential, settings):
        pot = free_potential.on_interval(1.0)
        lams = eigenvalues(pot, count=4, settings=settings)
        expected = (np.arange(1, 5) * math.pi) ** 2
        np.testing.assert_allclose(lams, expected, rtol=1e-8)

    def test_norming_constants(self, free_potential, settings):
        pot = free_potential.on_interval(1.0)
        lams = (np.arange(1, 4) * math.pi) ** 2
        gammas = norming_constants(pot, lams, settings)
        np.testing.assert_allclose(gammas, 2 * lams, rtol=1e-6)

    def test_count(self, free_potential, settings):
        pot = free_potential.on_interval(1.0)
        assert eigen_count(pot, 5.0, settings=settings) == 0
        assert eigen_count(pot, 50.0, settings=settings) == 2
        assert eigen_count(pot, 100.0, settings=settings) == 3

    def test_window(self, free_potential, settings):
        pot = free_potential.on_interval(1.0)
        lams = eigenvalues(pot, window=(20.0, 100.0), settings=settings)
        np.testing.assert_allclose(lams, [4 * math.pi ** 2, 9 * math.pi ** 2], rtol=1e-8)

    def test_neumann_condition(self, free_potential, settings):
        """y'(1) = 0 gives lambda_n = ((n - 1/2) pi)^2."""
        pot = free_potential.on_interval(1.0)
        lam = eigenvalue(pot, 2, beta=math.pi / 2, settings=settings)
        assert lam == pytest.approx((1.5 * math.pi) ** 2, rel=1e-8)

    @pytest.mark.slow
    @pytest.mark.parametrize("l", [-0.5, 0.0, 0.75])
    @pytest.mark.parametrize("with_q", [False, True])
    def test_weyl_law(self, settings, l, with_q):
        """n / sqrt(lambda_n) is within 2% of b / pi at n = 20."""
        terms = (ExpDecayTerm(),) if with_q else ()
        pot = PotentialSpec(l=l, q=terms, b=1.0)
        ratio = 20 / math.sqrt(eigenvalue(pot, 20, settings=settings))
        assert abs(ratio * math.pi - 1) < 0.02, f"n / sqrt(lambda_n) = {ratio} at l = {l}"


class TestHalfLineBoundStates:
    """Test bound states of square wells."""

    def test_deep_well_eigenvalue(self, deep_well, settings):
        expected, _ = _square_well_state(10.0)
        lams = eigenvalues(deep_well, settings=settings)
        assert lams.size == 1
        assert abs(lams[0] / expected - 1) < 1e-8

    def test_deep_well_norming(self, deep_well, settings):
        lam, gamma = _square_well_state(10.0)
        value = norming_constants(deep_well, [lam], settings)[0]
        assert abs(value / gamma - 1) < 1e-6

    def test_shallow_well_has_no_bound_state(self, shallow_well, settings):
        assert eigenvalues(shallow_well, settings=settings).size == 0

    def test_missing_bound_state(self, deep_well, settings):
        with pytest.raises(WindowError, match="fewer than 2"):
            eigenvalue(deep_well, 2, settings=settings)

    def test_positive_energy_rejected(self, deep_well, settings):
        with pytest.raises(ValidationError, match="below zero"):
            norming_constants(deep_well, [1.0], settings)


class TestValidation:
    """Test window and index checks."""

    def test_index_starts_at_one(self, deep_well):
        with pytest.raises(ValidationError, match="starts at 1"):
            eigenvalue(deep_well, 0)

    def test_reversed_window(self, deep_well):
        with pytest.raises(WindowError, match="increasing"):
            eigenvalues(deep_well, window=(-1.0, -5.0))

    def test_window_above_zero_on_half_line(self, deep_well):
        with pytest.raises(WindowError, match="below zero"):
            eigenvalues(deep_well, window=(1.0, 5.0))

    def test_default_window(self, deep_well):
        lo, hi = default_window(deep_well)
        assert lo == -11.0 and hi < 0

    def test_default_window_needs_half_line(self, deep_well):
        with pytest.raises(ValidationError, match="interval"):
            default_window(deep_well.on_interval(2.0))
