"""Tests for comparing two potentials through their data."""

import math

import numpy as np
import pytest

from besselspec.models.potential import ExpDecayTerm, PotentialSpec, WellTerm
from besselspec.scattering.uniqueness import (
    fit_log_coefficient,
    m_difference_decay,
    uniqueness_compare,
)
from besselspec.utils.exceptions import ValidationError

K_GRID = np.linspace(0.5, 5.0, 10)


class TestUniquenessCompare:
    """Data differ exactly when the potentials differ."""

    def test_identical_potentials(self, shallow_well, settings):
        report = uniqueness_compare(shallow_well, shallow_well, 1.0, K_GRID, settings=settings)
        assert report.delta_gap == 0.0
        assert report.q_gap == 0.0
        assert not report.data_differ
        assert not report.potentials_differ
        assert report.consistent

    def test_different_potentials(self, shallow_well, deep_well, settings):
        report = uniqueness_compare(shallow_well, deep_well, 1.0, K_GRID, settings=settings)
        assert report.eigen_gap == math.inf
        assert report.q_gap == pytest.approx(9.0)
        assert report.data_differ
        assert report.consistent

    def test_report_dump(self, shallow_well, settings):
        report = uniqueness_compare(shallow_well, shallow_well, 0.5, K_GRID, settings=settings)
        assert set(report.model_dump()) == {
            "c", "delta_gap", "eigen_gap", "norming_gap", "density_gap", "q_gap", "tolerance"
        }

    def test_validation(self, shallow_well):
        with pytest.raises(ValidationError, match="positive"):
            uniqueness_compare(shallow_well, shallow_well, 0.0)
        with pytest.raises(ValidationError, match="one angular momentum"):
            uniqueness_compare(shallow_well, shallow_well.with_l(0.5), 1.0)
        with pytest.raises(ValidationError, match="half-line"):
            uniqueness_compare(shallow_well.on_interval(2.0), shallow_well, 1.0)


class TestMDifferenceDecay:
    """Test exp(-2 c Im k) decay of m_1 - m_2."""

    @pytest.mark.slow
    @pytest.mark.parametrize("route", ["truncated", "jost"])
    def test_rate_is_twice_the_common_interval(self, shallow_well, settings, route):
        other = shallow_well.plus(WellTerm(depth=-0.5, radius=3.0, start=0.5))
        rate = m_difference_decay(shallow_well, other, np.geomspace(18.0, 200.0, 8), settings, route=route)
        assert abs(rate - 1.0) < 0.2, f"rate {rate} via {route}, expected 1"

    def test_needs_four_samples(self, shallow_well):
        with pytest.raises(ValidationError, match="four positive"):
            m_difference_decay(shallow_well, shallow_well, [1.0, 2.0, 3.0])


class TestLogCoefficient:
    """Test the logarithmic fit of F(i kappa) at l = -1/2."""

    def test_free_has_no_logarithm(self, settings):
        c, d, residual = fit_log_coefficient(PotentialSpec(l=-0.5), settings=settings)
        assert abs(c) < 1e-6
        assert d == pytest.approx(1.0, abs=1e-6)
        assert residual < 1e-6

    def test_needs_critical_l(self, exp_decay_potential):
        with pytest.raises(ValidationError, match="l = -1/2"):
            fit_log_coefficient(exp_decay_potential)

    def test_window(self):
        pot = PotentialSpec(l=-0.5, q=(ExpDecayTerm(),))
        with pytest.raises(ValidationError, match="positive and increasing"):
            fit_log_coefficient(pot, window=(0.1, 0.01))
