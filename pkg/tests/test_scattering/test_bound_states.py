"""Tests for bound states from Jost-function zeros."""

import math

import numpy as np
import pytest

from besselspec.models.potential import PotentialSpec, WellTerm
from besselspec.scattering.bound_states import _scan_sample, bound_states, jost_zeros
from besselspec.spectral.eigen import eigenvalues
from besselspec.utils.exceptions import ConvergenceError


class TestBoundStates:
    """Test the zero scan against Prüfer shooting."""

    def test_shallow_well_has_none(self, shallow_well, settings):
        result = bound_states(shallow_well, settings)
        assert result.N == 0
        assert result.kappas.size == 0
        assert result.within_bargmann

    def test_deep_well(self, deep_well, settings):
        result = bound_states(deep_well, settings)
        lam = eigenvalues(deep_well, settings=settings)[0]
        assert result.N == 1
        assert result.kappas[0] == pytest.approx(math.sqrt(-lam), rel=1e-8)
        assert result.bargmann_bound == pytest.approx(5.0)
        assert result.within_bargmann

    def test_two_bound_states_ordered(self, settings):
        """depth 30 lies between (3 pi / 2)^2 and (5 pi / 2)^2."""
        pot = PotentialSpec(l=0.0, q=(WellTerm(depth=-30.0, radius=1.0),))
        result = bound_states(pot, settings)
        assert result.N == 2
        assert result.kappas[0] > result.kappas[1]
        np.testing.assert_allclose(-result.kappas ** 2, result.eigenvalues, rtol=1e-8)

    def test_explicit_scan_range(self, deep_well, settings):
        assert jost_zeros(deep_well, kappa_max=1.0, settings=settings).size == 0
        assert jost_zeros(deep_well, kappa_max=4.0, settings=settings).size == 1

    def test_higher_angular_momentum(self, settings):
        """The centrifugal barrier lifts the l = 0 state of a shallow-enough well."""
        pot = PotentialSpec(l=1.0, q=(WellTerm(depth=-5.0, radius=1.0),))
        assert bound_states(pot, settings).N == 0

    def test_higher_angular_momentum_scan(self, settings):
        pot = PotentialSpec(l=1.0, q=(WellTerm(depth=-5.0, radius=1.0),))
        assert jost_zeros(pot, settings=settings).size == 0


class TestScanNodes:
    """Test how the zero scan treats failed integrations."""

    def test_failed_node_becomes_gap(self, caplog):
        def failing(kappa: float) -> float:
            raise ConvergenceError("step size underflow")

        assert math.isnan(_scan_sample(failing, 1e-3))
        assert "skipping scan node" in caplog.text

    def test_successful_node_passes_through(self):
        assert _scan_sample(lambda kappa: 2 * kappa, 0.5) == 1.0
