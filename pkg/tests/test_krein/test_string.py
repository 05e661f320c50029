"""Tests for Krein strings and their m-functions."""

import cmath
import math

import numpy as np
import pytest

from besselspec.krein.string import (
    _cumulative,
    mass_eigenvalue_count,
    power_string,
    string_grid,
    string_m,
    string_solutions,
    uniform_string,
)
from besselspec.models.base import StringModel
from besselspec.utils.exceptions import ValidationError


def _uniform_m(z: complex) -> complex:
    """M(z) = tan(sqrt z) / sqrt z for unit density on [0, 1], Dirichlet at 1."""
    w = cmath.sqrt(z)
    return cmath.tan(w) / w


class TestStringGrid:
    """Test the node layout."""

    def test_grid_increasing(self):
        t = string_grid(1.0)
        assert np.all(np.diff(t) > 0)
        assert t[-1] == pytest.approx(1.0)

    def test_short_string(self):
        t = string_grid(0.1)
        assert t[-1] == pytest.approx(0.1)
        assert np.all(np.diff(t) > 0)


class TestUniformString:
    """Test the constant-density string against its closed form."""

    @pytest.mark.parametrize("z", [2 + 3j, 10j, -5 + 1j, 200 + 50j])
    def test_m_function(self, z, settings):
        M = string_m(uniform_string(), z, settings=settings)
        expected = _uniform_m(z)
        assert abs(M - expected) < 1e-6 * abs(expected), f"M({z}) = {M}, expected {expected}"

    def test_herglotz(self, settings):
        for z in (1 + 1j, -3 + 0.5j, 40 + 10j):
            assert string_m(uniform_string(), z, settings=settings).imag > 0

    def test_solutions(self, settings):
        z = 4 + 1j
        sol = string_solutions(uniform_string(), z, settings)
        w = cmath.sqrt(z)
        np.testing.assert_allclose(sol.c, np.cos(w * sol.xi), rtol=1e-7, atol=1e-9)
        np.testing.assert_allclose(sol.s, np.sin(w * sol.xi) / w, rtol=1e-7, atol=1e-9)

    def test_wronskian(self, settings):
        sol = string_solutions(uniform_string(), 50 + 20j, settings)
        np.testing.assert_allclose(sol.wronskian(), 1.0, atol=1e-7)

    def test_weyl_count(self):
        assert mass_eigenvalue_count(uniform_string(), 100.0) == pytest.approx(10 / math.pi, rel=1e-6)
        assert mass_eigenvalue_count(uniform_string(), -1.0) == 0.0


class TestComplexQuadrature:
    """Test the cumulative sums used by the string iteration."""

    def test_keeps_imaginary_part(self):
        t = np.linspace(0.0, 1.0, 201)
        total = _cumulative(np.exp(1j * t), t)
        expected = np.sin(t) + 1j * (1 - np.cos(t))
        np.testing.assert_allclose(total, expected, atol=1e-9)

    def test_solution_imaginary_part(self, settings):
        """c(z, xi) = cos(sqrt(z) xi) is genuinely complex for nonreal z."""
        z = 2 + 3j
        sol = string_solutions(uniform_string(), z, settings)
        expected = np.cos(cmath.sqrt(z) * sol.xi[-1])
        assert abs(sol.c[-1].imag - expected.imag) < 1e-7, f"Im c = {sol.c[-1].imag}, expected {expected.imag}"


class TestStringValidation:
    """Test input checks."""

    def test_real_z_rejected(self):
        with pytest.raises(ValidationError, match="off the real axis"):
            string_m(uniform_string(), 4.0)

    def test_power_string_parameters(self):
        with pytest.raises(ValidationError, match="alpha > 0"):
            power_string(0.0)
        with pytest.raises(ValidationError, match="alpha > 0"):
            power_string(1.0, coefficient=-1.0)

    def test_nonpositive_density(self):
        with pytest.raises(ValidationError, match="positive"):
            uniform_string(density=0.0)

    def test_model_requires_increasing_xi(self):
        nodes = np.array([0.1, 0.2, 0.3])
        with pytest.raises(ValueError, match="strictly increasing"):
            StringModel(
                a=1.0,
                t=nodes,
                xi=nodes[::-1],
                R=nodes,
                r=np.ones(3),
                xi_rate=np.ones_like,
                mass_rate=np.ones_like,
            )

    def test_power_string_tables(self):
        sm = power_string(0.5, coefficient=2.0)
        np.testing.assert_allclose(sm.R, 2.0 * np.sqrt(sm.xi))
        assert sm.total_mass == pytest.approx(2.0)
