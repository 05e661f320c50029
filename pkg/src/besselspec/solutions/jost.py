"""Jost solution and the Weyl solution at the right endpoint.

The Jost solution f(k, x) ~ exp(i(kx - l pi/2)) (with the logarithmic
Coulomb phase when gamma != 0) is integrated backward from a truncation
radius where the neglected tail of q~ is below the configured tolerance.
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from besselspec.models.base import ComplexEnergy, GridSpec, WaveKind, WaveSample
from besselspec.models.potential import PotentialSpec
from besselspec.solutions.ode import integrate, plain_rhs, scaled_rhs, unscale
from besselspec.specfun.free import free_jost, momentum
from besselspec.utils.config import DEFAULT_SETTINGS, Settings
from besselspec.utils.constants import (
    COULOMB_RADIUS,
    MATCHING_RADIUS,
    MAX_DECAY_EXPONENT,
    MAX_GROWTH_EXPONENT,
    TAIL_MAX_RADIUS,
    WKB_DAMPING,
)
from besselspec.utils.exceptions import IntegrabilityError, TruncationError, ValidationError

logger = logging.getLogger(__name__)


def tail_radius(pot: PotentialSpec, settings: Optional[Settings] = None) -> float:
    """Smallest radius X with int_X^inf y |q~(y)| dy below the tail tolerance.

    Raises:
        IntegrabilityError: If q~ has no integrable first moment at infinity
        TruncationError: If the budget is not met before the largest radius
    """
    settings = settings or DEFAULT_SETTINGS
    if not pot.coulomb_admissible:
        raise IntegrabilityError("q~ must satisfy int_1^inf x |q~| dx < inf")
    end = pot.support_end
    if math.isfinite(end):
        radius = end
    else:
        tol = settings.tail_tolerance
        hi = 2.0
        while pot.tail_moment(hi) >= tol:
            hi *= 2
            if hi > TAIL_MAX_RADIUS:
                raise TruncationError(
                    f"tail budget {tol:g} not met before x = {TAIL_MAX_RADIUS:g}"
                )
        lo = hi / 2
        if pot.tail_moment(lo) < tol:
            radius = lo
        else:
            radius = brentq(lambda x: math.log(pot.tail_moment(x) / tol), lo, hi, xtol=1e-6)
    radius = max(radius, MATCHING_RADIUS)
    if pot.gamma != 0:
        radius = max(radius, COULOMB_RADIUS)
    logger.debug("tail radius %.4g", radius)
    return radius


def coulomb_start(pot: PotentialSpec, k: complex, x: float) -> tuple[complex, complex]:
    """Distorted-wave data at a large radius with one WKB correction.

    The phase integrates the local momentum p = sqrt(k^2 - V) through order
    1/x, and the amplitude sqrt(k/p) carries the first WKB correction.
    """
    L = pot.l * (pot.l + 1)
    g = pot.gamma
    V = L / x ** 2 + g / x + float(pot.q_tilde(x))
    dV = -2 * L / x ** 3 - g / x ** 2
    p = complex(np.sqrt(k * k - V))
    if (p / k).real < 0:
        p = -p
    dp = -dV / (2 * p)
    phase = k * x - g / (2 * k) * math.log(x) + (L / (2 * k) + g * g / (8 * k ** 3)) / x
    phase -= pot.l * math.pi / 2
    value = complex(np.sqrt(k / p)) * np.exp(1j * phase)
    return value, value * (1j * p - dp / (2 * p))


def _check_momentum(k: complex, settings: Settings) -> complex:
    k = complex(k)
    if abs(k) < settings.k_min:
        raise ValidationError(f"|k| must be at least {settings.k_min:g}; the Jost solution is singular at k = 0")
    if k.imag < 0:
        raise ValidationError("Jost solutions need Im k >= 0")
    return k


def jost_values(
    pot: PotentialSpec,
    k: complex,
    x: Sequence[float] | np.ndarray,
    settings: Optional[Settings] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """f(k, x) and f'(k, x) at the given positions.

    For Re k < 0 the solution is defined by f(k, x) = conj(f(-conj(k), x)).

    Raises:
        ValidationError: At k = 0 or Im k < 0
        IntegrabilityError: Outside the short-range and Coulomb classes
        TruncationError: If exp(-Im(k) X) underflows at the truncation radius
    """
    settings = settings or DEFAULT_SETTINGS
    k = _check_momentum(k, settings)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if k.real < 0:
        value, deriv = jost_values(pot, -k.conjugate(), xs, settings)
        return np.conj(value), np.conj(deriv)
    radius = max(tail_radius(pot, settings), float(xs.max()))
    if k.imag * radius > MAX_DECAY_EXPONENT:
        raise TruncationError(
            f"Im(k) X = {k.imag * radius:.1f} exceeds the representable decay"
        )
    if pot.gamma == 0:
        f0, df0 = free_jost(pot.l, k, radius)
        f0, df0 = complex(f0), complex(df0)
    else:
        f0, df0 = coulomb_start(pot, k, radius)
    p = -pot.l
    w0 = radius ** pot.l * f0
    dw0 = pot.l * radius ** (pot.l - 1) * f0 + radius ** pot.l * df0
    # unit start vector; the scale is restored after the sweep
    scale = max(abs(w0), abs(dw0))
    states, _ = integrate(
        scaled_rhs(pot, k * k, p), radius, float(xs.min()), [w0 / scale, dw0 / scale], xs, pot.breakpoints, settings
    )
    value, deriv = unscale(xs, states[:, 0], states[:, 1], p)
    return scale * value, scale * deriv


def jost_solution(
    pot: PotentialSpec,
    k: complex,
    grid: GridSpec,
    settings: Optional[Settings] = None,
) -> WaveSample:
    """Jost solution sampled on a grid."""
    values, derivs = jost_values(pot, k, grid.nodes, settings)
    return WaveSample(
        grid=grid,
        values=values,
        derivs=derivs,
        kind=WaveKind.JOST,
        energy=ComplexEnergy.from_k(complex(k)),
        l=pot.l,
        route="jost",
    )


def backward_log_derivative(
    pot: PotentialSpec,
    z: complex,
    x_start: float,
    x_stop: float,
    y0: Sequence[complex],
    settings: Optional[Settings] = None,
) -> complex:
    """Log-derivative at x_stop of the solution with data y0 at x_start.

    The state is renormalized between chunks so exponential growth toward
    x_stop never overflows.
    """
    settings = settings or DEFAULT_SETTINGS
    rate = max(abs(complex(np.sqrt(complex(z))).imag), math.sqrt(max(0.0, -pot.lower_bound)), 1.0)
    chunk = MAX_GROWTH_EXPONENT / rate
    knots = [x_start]
    while knots[-1] - chunk > x_stop:
        knots.append(knots[-1] - chunk)
    knots.append(x_stop)
    y = np.asarray(y0, dtype=complex)
    rhs = plain_rhs(pot, complex(z))
    for a, b in zip(knots, knots[1:]):
        _, y = integrate(rhs, a, b, y, None, pot.breakpoints, settings)
        y = y / np.linalg.norm(y)
    return complex(y[1] / y[0])


def weyl_log_derivative(
    pot: PotentialSpec,
    z: ComplexEnergy | complex,
    x: float,
    beta: float = 0.0,
    settings: Optional[Settings] = None,
) -> complex:
    """Log-derivative at x of the Weyl solution at the right endpoint.

    On an interval (pot.b finite) this is the solution with
    cos(beta) y(b) - sin(beta) y'(b) = 0. On the half-line it is the
    solution square integrable at infinity, or the outgoing Jost solution
    on the positive axis. When the decay over [x, X] is strong a WKB
    start closer to x is used instead of the tail radius.
    """
    settings = settings or DEFAULT_SETTINGS
    energy = momentum(z)
    # a constant background only shifts the energy
    shift = pot.constant_part
    base = pot.without_constant() if shift else pot
    energy = momentum(energy.z - shift) if shift else energy
    k = energy.k
    right = pot.b if pot.b is not None else tail_radius(base, settings)
    if k.imag > 0 and k.imag * (right - x) > 2 * WKB_DAMPING:
        # the far boundary only enters at relative order exp(-2 Im(k) (right - x))
        start = x + WKB_DAMPING / k.imag
        u = 1j * complex(np.sqrt(energy.z - float(base.effective(start))))
        if u.real > 0:
            u = -u
        y0 = [1.0, u]
    elif pot.b is not None:
        start, y0 = pot.b, [math.sin(beta), math.cos(beta)]
    else:
        start = max(right, x)
        f0, df0 = jost_values(base, k, [start], settings)
        y0 = [complex(f0[0]), complex(df0[0])]
    if start == x:
        return complex(y0[1] / y0[0])
    return backward_log_derivative(base, energy.z, start, x, y0, settings)
