"""Phase shift, scattering matrix and the sine-fit cross-check.

On the positive axis f(k) = |f(k)| exp(-i delta(k)); the branch is fixed by
delta -> 0 at the top of the grid, where F(k) = C_l k^l f(k) is close to one,
and continued downward.
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import trapezoid

from besselspec.models.base import ScatteringData
from besselspec.models.potential import PotentialSpec
from besselspec.scattering.bound_states import bound_states
from besselspec.scattering.jost import jost_function, normalized_jost
from besselspec.solutions.ode import regular_values
from besselspec.specfun.functions import coupling_constant, riccati_pair
from besselspec.utils.config import DEFAULT_SETTINGS, Settings, sweep
from besselspec.utils.constants import (
    CRITICAL_K_EXCLUSION,
    SINE_FIT_POINTS,
    SINE_FIT_RADIUS,
    UNWRAP_MAX_JUMP,
)
from besselspec.utils.exceptions import UnwrapError, ValidationError

logger = logging.getLogger(__name__)


def _positive_grid(k_grid: Sequence[float] | np.ndarray) -> np.ndarray:
    k = np.asarray(k_grid, dtype=float)
    if k.size == 0:
        raise ValidationError("momentum grid is empty")
    if np.any(k <= 0) or np.any(np.diff(k) <= 0):
        raise ValidationError("momentum grid must be positive and strictly increasing")
    return k


def _warn_critical(pot: PotentialSpec, k: np.ndarray) -> None:
    if pot.angular.critical and np.any(k < CRITICAL_K_EXCLUSION):
        logger.warning(
            "l = -1/2: F has a logarithmic singularity at k = 0; values below k = %g are degraded",
            CRITICAL_K_EXCLUSION,
        )


def unwrap_from_top(angles: np.ndarray, max_jump: float = UNWRAP_MAX_JUMP) -> np.ndarray:
    """Continue principal angles downward from the last entry.

    Raises:
        UnwrapError: If neighbouring angles differ by more than ``max_jump``
    """
    out = np.empty_like(angles)
    out[-1] = angles[-1]
    for j in range(angles.size - 2, -1, -1):
        step = (angles[j] - out[j + 1] + math.pi) % (2 * math.pi) - math.pi
        if abs(step) > max_jump:
            raise UnwrapError(f"phase jumps by {step:.3f} rad between grid nodes {j} and {j + 1}; refine the grid")
        out[j] = out[j + 1] + step
    return out


def phase_from_F(F_vals: np.ndarray) -> np.ndarray:
    """delta = -arg F, continuous and on the branch vanishing at the top."""
    return unwrap_from_top(-np.angle(np.asarray(F_vals, dtype=complex)))


def phase_shift(
    pot: PotentialSpec, k_grid: Sequence[float] | np.ndarray, settings: Optional[Settings] = None
) -> np.ndarray:
    """Continuous phase shift on an increasing positive grid.

    Raises:
        UnwrapError: If the grid is too coarse for the phase to be followed
    """
    settings = settings or DEFAULT_SETTINGS
    k = _positive_grid(k_grid)
    _warn_critical(pot, k)
    F = sweep(lambda kk: normalized_jost(pot, kk, settings), k, settings)
    return phase_from_F(np.asarray(F))


def s_matrix(
    pot: PotentialSpec, k_grid: Sequence[float] | np.ndarray, settings: Optional[Settings] = None
) -> np.ndarray:
    """S(k) = conj(f(k)) / f(k) = exp(2 i delta(k))."""
    settings = settings or DEFAULT_SETTINGS
    k = _positive_grid(k_grid)
    f = np.asarray(sweep(lambda kk: jost_function(pot, kk, with_g=False, settings=settings).f, k, settings))
    return np.conj(f) / f


def scattering_data(
    pot: PotentialSpec,
    k_grid: Sequence[float] | np.ndarray,
    include_bound_states: bool = True,
    with_g: bool = True,
    settings: Optional[Settings] = None,
) -> ScatteringData:
    """Jost function, phase, S-matrix and bound states on a momentum grid."""
    settings = settings or DEFAULT_SETTINGS
    k = _positive_grid(k_grid)
    _warn_critical(pot, k)
    values = sweep(lambda kk: jost_function(pot, kk, with_g=with_g, settings=settings), k, settings)
    f = np.array([v.f for v in values])
    g = np.array([v.g for v in values]) if with_g else None
    F = f * coupling_constant(pot.l) * k ** pot.l
    delta = phase_from_F(F)
    kappas = np.array([])
    if include_bound_states:
        kappas = bound_states(pot, settings=settings).kappas
    return ScatteringData(
        k_grid=k,
        f_vals=f,
        g_vals=g,
        delta=delta,
        S_vals=np.conj(f) / f,
        kappas=kappas,
        N=int(kappas.size),
    )


def phase_from_sine_fit(
    pot: PotentialSpec,
    k: float,
    radius: float = SINE_FIT_RADIUS,
    points: int = SINE_FIT_POINTS,
    settings: Optional[Settings] = None,
) -> tuple[float, float]:
    """|f(k)| and delta(k) from the far-field shape of phi(k^2, .).

    Beyond the range of q, phi = (|f| / k) (cos(delta) s_l + sin(delta) c_l)
    with the Riccati waves s_l, c_l; both coefficients are fitted by least
    squares over two wavelengths starting at ``radius``.

    Returns:
        |f(k)| and delta(k) in (-pi, pi]
    """
    settings = settings or DEFAULT_SETTINGS
    if k <= 0:
        raise ValidationError("the sine fit needs k > 0")
    xs = np.linspace(radius, radius + 4 * math.pi / k, points)
    phi, _ = regular_values(pot, k * k, xs, settings)
    s, _, c, _ = riccati_pair(pot.l, k, xs)
    design = np.column_stack([s, c])
    (A, B), *_ = np.linalg.lstsq(design, phi.real, rcond=None)
    return float(k * math.hypot(A, B)), float(math.atan2(B, A))


def delta_integrability(
    pot: PotentialSpec,
    k_min: float = 0.05,
    k_max: float = 50.0,
    doublings: int = 3,
    points: int = 600,
    settings: Optional[Settings] = None,
) -> np.ndarray:
    """Trapezoid estimates of int delta(k) / (1 + k) dk as k_max doubles.

    Returns:
        One estimate per upper limit k_max, 2 k_max, ...
    """
    settings = settings or DEFAULT_SETTINGS
    top = k_max * 2 ** doublings
    k = np.geomspace(k_min, top, points)
    delta = phase_shift(pot, k, settings)
    estimates = []
    for j in range(doublings + 1):
        mask = k <= k_max * 2 ** j * (1 + 1e-12)
        estimates.append(float(trapezoid(delta[mask] / (1 + k[mask]), k[mask])))
    return np.array(estimates)
