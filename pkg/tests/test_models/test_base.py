"""Tests for the shared domain types."""

import math

import numpy as np
import pytest

from besselspec.models.base import (
    AngularMomentum,
    ComplexEnergy,
    GridSpec,
    ScatteringData,
    SpectralData,
)


class TestAngularMomentum:
    """Test derived quantities of l."""

    @pytest.mark.parametrize("l,kappa", [(-0.5, 0), (0.0, 0), (0.25, 0), (1.0, 1), (1.5, 1), (2.5, 2)])
    def test_negative_squares(self, l, kappa):
        assert AngularMomentum(l=l).kappa == kappa

    def test_flags(self):
        assert AngularMomentum(l=-0.5).critical
        assert AngularMomentum(l=0.5).half_integer
        assert not AngularMomentum(l=0.0).half_integer
        assert not AngularMomentum(l=0.25).half_integer
        assert AngularMomentum(l=0.25).limit_circle
        assert not AngularMomentum(l=0.5).limit_circle


class TestComplexEnergy:
    """Test the momentum branch."""

    def test_from_z_upper_branch(self):
        energy = ComplexEnergy.from_z(-4.0)
        assert energy.k == pytest.approx(2j)

    def test_positive_axis(self):
        assert ComplexEnergy.from_z(9.0).k == pytest.approx(3.0)

    def test_lower_branch_rejected(self):
        with pytest.raises(ValueError, match="branch"):
            ComplexEnergy(z=-1.0, k=-1j)

    def test_inconsistent_pair_rejected(self):
        with pytest.raises(ValueError, match="reproduce"):
            ComplexEnergy(z=2.0, k=1.0)


class TestGridSpec:
    """Test grid construction and validation."""

    def test_log_graded(self):
        grid = GridSpec.log_graded(1e-4, 5.0, 40)
        assert grid.nodes[0] == pytest.approx(1e-4)
        assert grid.nodes[-1] == pytest.approx(5.0)
        assert np.all(np.diff(grid.nodes) > 0)

    def test_nodes_must_increase(self):
        with pytest.raises(ValueError, match="increasing"):
            GridSpec.custom([1.0, 0.5])

    def test_single_node_rejected(self):
        with pytest.raises(ValueError, match="at least 2"):
            GridSpec(x_min=1.0, x_max=2.0, nodes=[1.5])

    def test_nodes_are_read_only(self):
        grid = GridSpec.uniform(0.1, 1.0, 5)
        with pytest.raises(ValueError):
            grid.nodes[0] = 0.2


class TestSpectralData:
    """Test the spectral function assembled from its parts."""

    def test_point_masses_midpoint(self):
        data = SpectralData(eigenvalues=[-2.0, -0.5], norming=[1.0, 3.0])
        assert data.point_mass_rho(0.0) == 0.0
        assert data.point_mass_rho(-1.0) == pytest.approx(-3.0)
        assert data.point_mass_rho(-0.5) == pytest.approx(-1.5)
        assert data.point_mass_rho(-3.0) == pytest.approx(-4.0)

    def test_positive_eigenvalues(self):
        data = SpectralData(eigenvalues=[1.0, 4.0], norming=[2.0, 5.0])
        assert data.point_mass_rho(4.0) == pytest.approx(4.5)
        assert data.point_mass_rho(10.0) == pytest.approx(7.0)

    def test_density_integral(self):
        lam = np.linspace(0.5, 4.0, 8)
        data = SpectralData(lam=lam, density=np.ones_like(lam))
        assert data.rho(4.0) == pytest.approx(4.0 - 0.25, rel=1e-12)

    def test_nonpositive_norming_rejected(self):
        with pytest.raises(ValueError, match="positive"):
            SpectralData(eigenvalues=[-1.0], norming=[0.0])


class TestScatteringData:
    """Test unitarity enforcement."""

    def test_unitary(self):
        k = np.array([1.0, 2.0])
        f = np.array([1 + 1j, 2 - 1j])
        data = ScatteringData(k_grid=k, f_vals=f, delta=[0.1, 0.0], S_vals=np.conj(f) / f)
        assert data.N == 0
        assert np.all(np.abs(np.abs(data.S_vals) - 1) < 1e-12)

    def test_non_unitary_rejected(self):
        with pytest.raises(ValueError, match="unitary"):
            ScatteringData(k_grid=[1.0], f_vals=[1.0], delta=[0.0], S_vals=[1.1])
