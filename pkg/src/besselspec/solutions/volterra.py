"""Successive approximation of the regular Volterra equation.

    phi(x) = phi_l(x) + int_0^x G_l(x, y) q(y) phi(y) dy

Splitting G_l(x, y) = phi_l(x) theta_l(y) - phi_l(y) theta_l(x) turns each
sweep into two cumulative product-trapezoid sums. The diagonal of the
discrete kernel vanishes, so the iteration is explicit.
"""

import logging
from typing import Optional

import numpy as np
from scipy.integrate import cumulative_trapezoid, quad

from besselspec.models.base import GridSpec, WaveSample
from besselspec.models.potential import PotentialSpec
from besselspec.specfun.free import free_phi, free_solutions, free_theta
from besselspec.utils.config import DEFAULT_SETTINGS, Settings
from besselspec.utils.exceptions import ConvergenceError

logger = logging.getLogger(__name__)


def _head_integrals(pot: PotentialSpec, z: complex, x0: float) -> tuple[complex, complex]:
    """int_0^x0 theta_l q phi_l and int_0^x0 phi_l^2 q, with phi ~ phi_l on (0, x0)."""

    def part(func, y: float) -> complex:
        return complex(func(y)) * float(pot(y))

    def theta_phi(y: float) -> complex:
        return complex(free_theta(pot.l, z, y)[0]) * complex(free_phi(pot.l, z, y)[0])

    def phi_phi(y: float) -> complex:
        return complex(free_phi(pot.l, z, y)[0]) ** 2

    head = []
    for func in (theta_phi, phi_phi):
        re, _ = quad(lambda y: part(func, y).real, 0.0, x0, limit=100)
        im, _ = quad(lambda y: part(func, y).imag, 0.0, x0, limit=100)
        head.append(complex(re, im))
    return head[0], head[1]


def _sweep(free, q: np.ndarray, x: np.ndarray, phi: np.ndarray, heads):
    head_a, head_b = heads
    A = head_a + cumulative_trapezoid(free.theta * q * phi, x, initial=0)
    B = head_b + cumulative_trapezoid(free.phi * q * phi, x, initial=0)
    return free.phi + free.phi * A - free.theta * B, A, B


def volterra_regular(
    pot: PotentialSpec,
    z: complex,
    grid: GridSpec,
    settings: Optional[Settings] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Picard iteration for phi on the grid nodes.

    Returns:
        phi and phi' at the nodes

    Raises:
        ConvergenceError: If the relative sup-norm update stays above the
            tolerance after the configured number of sweeps
    """
    settings = settings or DEFAULT_SETTINGS
    x = grid.nodes
    z = complex(z)
    free = free_solutions(pot.l, z, x, include_psi=False)
    q = pot(x)
    heads = _head_integrals(pot, z, float(x[0]))
    phi = free.phi.copy()
    for sweep in range(1, settings.picard_max_sweeps + 1):
        new, A, B = _sweep(free, q, x, phi, heads)
        update = np.max(np.abs(new - phi)) / max(np.max(np.abs(new)), 1e-300)
        phi = new
        if update < settings.picard_tolerance:
            logger.debug("volterra iteration settled after %d sweeps", sweep)
            return phi, free.dphi + free.dphi * A - free.dtheta * B
    raise ConvergenceError(
        f"Picard iteration for phi did not settle in {settings.picard_max_sweeps} sweeps "
        f"(last update {update:.2e})"
    )


def volterra_residual(pot: PotentialSpec, sample: WaveSample) -> float:
    """Relative sup-norm residual of a sampled phi in the discrete Volterra equation."""
    x = sample.grid.nodes
    z = sample.energy.z
    free = free_solutions(pot.l, z, x, include_psi=False)
    image, _, _ = _sweep(free, pot(x), x, sample.values, _head_integrals(pot, z, float(x[0])))
    return float(np.max(np.abs(image - sample.values)) / np.max(np.abs(sample.values)))
