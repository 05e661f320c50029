"""Regular and non-principal solutions by high-order integration.

Solutions are integrated in the scaled variable w = x^(-p) y with p = l + 1
for phi and p = -l for theta, which turns the singular equation into

    w'' = -(2p/x) w' + (q(x) - z) w,

free of the centrifugal term. Outward integration starts at a small radius
where the regular solution is known from its leading Volterra correction.
"""

import logging
import math
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from scipy.integrate import quad, solve_ivp

from besselspec.models.base import ComplexEnergy, GridSpec, WaveKind, WaveSample
from besselspec.models.potential import PotentialSpec
from besselspec.specfun.free import free_theta, momentum
from besselspec.utils.config import DEFAULT_SETTINGS, Settings
from besselspec.utils.constants import ODE_METHOD
from besselspec.utils.exceptions import (
    ConditionError,
    ConvergenceError,
    IntegrabilityError,
    ValidationError,
)

logger = logging.getLogger(__name__)

Rhs = Callable[[float, np.ndarray], np.ndarray]


def integrate(
    rhs: Rhs,
    x_start: float,
    x_stop: float,
    y0: Sequence[complex],
    t_eval: Optional[Iterable[float]] = None,
    breakpoints: Iterable[float] = (),
    settings: Optional[Settings] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Integrate a complex first-order system, restarting at breakpoints.

    Args:
        rhs: Right-hand side f(x, y)
        x_start: Initial point (may exceed ``x_stop`` for backward sweeps)
        x_stop: Final point
        y0: Initial state
        t_eval: Points between x_start and x_stop where the state is wanted
        breakpoints: Points where the right-hand side is not smooth
        settings: Solver tolerances

    Returns:
        States at ``t_eval`` (one row per point, input order) and the final state

    Raises:
        ConvergenceError: If the integrator fails
    """
    settings = settings or DEFAULT_SETTINGS
    direction = 1.0 if x_stop >= x_start else -1.0
    y = np.asarray(y0, dtype=complex)
    points = np.asarray([] if t_eval is None else list(t_eval), dtype=float)
    out = np.empty((points.size, y.size), dtype=complex)
    s_points = direction * points
    s_start, s_stop = direction * x_start, direction * x_stop
    out[s_points <= s_start] = y
    cuts = sorted(direction * p for p in breakpoints if s_start < direction * p < s_stop)
    knots = [s_start, *cuts, s_stop]
    for a, b in zip(knots, knots[1:]):
        if b <= a:
            continue
        mask = (s_points > a) & (s_points <= b)
        inner = np.unique(s_points[mask & (s_points < b)])
        evals = np.concatenate([inner, [b]]) * direction
        sol = solve_ivp(
            rhs,
            (direction * a, direction * b),
            y,
            method=ODE_METHOD,
            t_eval=evals,
            rtol=settings.rtol,
            atol=settings.atol,
        )
        if not sol.success:
            raise ConvergenceError(f"ODE integration failed on [{direction * a:g}, {direction * b:g}]: {sol.message}")
        states = sol.y.T
        if mask.any():
            index = np.searchsorted(np.concatenate([inner, [b]]), s_points[mask])
            out[mask] = states[index]
        y = states[-1]
    return out, y


def scaled_rhs(pot: PotentialSpec, z: complex, p: float) -> Rhs:
    """Right-hand side of the scaled equation for w = x^(-p) y."""
    residual = pot.l * (pot.l + 1) - p * (p - 1)

    def rhs(x: float, y: np.ndarray) -> np.ndarray:
        coeff = float(pot(x)) - z + residual / (x * x)
        return np.array([y[1], -(2 * p / x) * y[1] + coeff * y[0]])

    return rhs


def plain_rhs(pot: PotentialSpec, z: complex) -> Rhs:
    """Right-hand side of -y'' + V y = z y with V the full effective potential."""
    centrifugal = pot.l * (pot.l + 1)

    def rhs(x: float, y: np.ndarray) -> np.ndarray:
        return np.array([y[1], (centrifugal / (x * x) + float(pot(x)) - z) * y[0]])

    return rhs


def unscale(x: np.ndarray, w: np.ndarray, dw: np.ndarray, p: float) -> tuple[np.ndarray, np.ndarray]:
    """Map (w, w') back to (y, y') for y = x^p w."""
    xp = x ** p
    return xp * w, p * x ** (p - 1) * w + xp * dw


def start_radius(pot: PotentialSpec, first_node: float, settings: Settings) -> float:
    """Near-zero start of outward integration, left of every requested node."""
    x0 = min(settings.start_radius, first_node)
    if pot.breakpoints:
        x0 = min(x0, 0.5 * pot.breakpoints[0])
    return x0


def regular_start(pot: PotentialSpec, z: complex, x0: float) -> tuple[complex, complex]:
    """Scaled regular solution (w, w') at a small radius x0.

    With p = l + 1, (x^(2p) w')' = x^(2p) (q - z) w and w(0) = 1 give to
    first order

        w'(x0) = -z x0 / (2p + 1) + x0^(-2p) int_0^x0 y^(2p) q(y) dy,
        w(x0)  = 1 - z x0^2 / (2(2p + 1)) + int_0^x0 K(y) q(y) dy,

    where K collects the inner integral of w' after exchanging the order.
    """
    p = pot.l + 1
    if not pot.hyp12:
        raise IntegrabilityError("x q(x) must be integrable near zero")

    def moment(y: float) -> float:
        return y ** (2 * p) * float(pot(y))

    def kernel(y: float) -> float:
        if abs(2 * p - 1) < 1e-12:
            weight = y * math.log(x0 / y)
        else:
            weight = (y - y ** (2 * p) * x0 ** (1 - 2 * p)) / (2 * p - 1)
        return weight * float(pot(y))

    inner, _ = quad(moment, 0.0, x0, limit=100)
    outer, _ = quad(kernel, 0.0, x0, limit=100)
    dw = -z * x0 / (2 * p + 1) + inner * x0 ** (-2 * p)
    w = 1.0 - z * x0 * x0 / (2 * (2 * p + 1)) + outer
    return complex(w), complex(dw)


def _grid_points(grid: GridSpec | np.ndarray | Sequence[float]) -> np.ndarray:
    return grid.nodes if isinstance(grid, GridSpec) else np.atleast_1d(np.asarray(grid, dtype=float))


def regular_values(
    pot: PotentialSpec,
    z: complex,
    x: GridSpec | np.ndarray | Sequence[float],
    settings: Optional[Settings] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """phi(z, x) and phi'(z, x) at increasing positions x.

    Raises:
        IntegrabilityError: If x q(x) is not integrable near zero
    """
    settings = settings or DEFAULT_SETTINGS
    xs = _grid_points(x)
    z = complex(z)
    p = pot.l + 1
    x0 = start_radius(pot, float(xs[0]), settings)
    w0, dw0 = regular_start(pot, z, x0)
    logger.debug("regular solution: z=%s start=%.3g nodes=%d", z, x0, xs.size)
    states, _ = integrate(
        scaled_rhs(pot, z, p), x0, float(xs[-1]), [w0, dw0], xs, pot.breakpoints, settings
    )
    return unscale(xs, states[:, 0], states[:, 1], p)


def theta_values(
    pot: PotentialSpec,
    z: complex,
    x: GridSpec | np.ndarray | Sequence[float],
    settings: Optional[Settings] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """theta(z, x) and theta'(z, x) continued from free data near zero.

    The start data are the free theta_l(z, .) at the start radius, rescaled
    so that W(theta, phi) = 1. The result is entire in z and differs from
    any other admissible choice by a real-entire multiple of phi.
    """
    settings = settings or DEFAULT_SETTINGS
    xs = _grid_points(x)
    z = complex(z)
    p = -pot.l
    x0 = start_radius(pot, float(xs[0]), settings)
    theta0, dtheta0 = free_theta(pot.l, z, x0)
    theta0, dtheta0 = complex(theta0), complex(dtheta0)
    w_phi, dw_phi = regular_start(pot, z, x0)
    phi0, dphi0 = unscale(np.array(x0), np.array(w_phi), np.array(dw_phi), pot.l + 1)
    wronskian = theta0 * complex(dphi0) - dtheta0 * complex(phi0)
    theta0, dtheta0 = theta0 / wronskian, dtheta0 / wronskian
    w0 = x0 ** pot.l * theta0
    dw0 = pot.l * x0 ** (pot.l - 1) * theta0 + x0 ** pot.l * dtheta0
    states, _ = integrate(
        scaled_rhs(pot, z, p), x0, float(xs[-1]), [w0, dw0], xs, pot.breakpoints, settings
    )
    return unscale(xs, states[:, 0], states[:, 1], p)


def regular_solution(
    pot: PotentialSpec,
    z: ComplexEnergy | complex,
    grid: GridSpec,
    method: str = "ode",
    settings: Optional[Settings] = None,
) -> WaveSample:
    """Regular solution phi(z, .) normalized by phi ~ x^(l+1) at zero.

    Args:
        pot: Operator data
        z: Spectral parameter
        grid: Sampling grid
        method: ``"ode"`` (high-order integration) or ``"volterra"``
            (product-trapezoid Picard iteration on the grid)
        settings: Solver tolerances

    Raises:
        IntegrabilityError: If x q(x) is not integrable near zero
        ConvergenceError: If the Picard iteration does not settle
        ValidationError: For an unknown method
    """
    energy = momentum(z)
    if not pot.hyp12:
        raise IntegrabilityError("regular solution needs x q(x) integrable near zero")
    if method == "volterra":
        from besselspec.solutions.volterra import volterra_regular

        values, derivs = volterra_regular(pot, energy.z, grid, settings)
    elif method == "ode":
        values, derivs = regular_values(pot, energy.z, grid, settings)
    else:
        raise ValidationError(f"unknown method {method!r}; choose ode or volterra")
    return WaveSample(
        grid=grid,
        values=values,
        derivs=derivs,
        kind=WaveKind.REGULAR,
        energy=energy,
        l=pot.l,
        route=method,
    )


def theta_route(pot: PotentialSpec, allow_ambiguous: bool = False) -> str:
    """Construction route for theta: ``ode``, ``string`` or ``fallback``.

    Raises:
        ConditionError: If no route applies and the fallback is not allowed
    """
    if pot.theta_iterable:
        return "ode"
    if pot.angular.limit_circle:
        return "string"
    if allow_ambiguous:
        logger.warning(
            "theta for l=%g is continued from free data without the iteration "
            "condition; it carries an undetermined additive multiple of phi",
            pot.l,
        )
        return "fallback"
    raise ConditionError(
        "theta cannot be iterated for this potential and l >= 1/2 rules out the string route"
    )


def nonprincipal_values(
    pot: PotentialSpec,
    z: complex,
    x: GridSpec | np.ndarray | Sequence[float],
    allow_ambiguous: bool = False,
    settings: Optional[Settings] = None,
) -> tuple[np.ndarray, np.ndarray, str]:
    """theta and theta' at x along the route ``theta_route`` selects.

    Returns:
        Values, derivatives and the route name
    """
    route = theta_route(pot, allow_ambiguous)
    xs = _grid_points(x)
    if route == "string":
        from besselspec.krein.transform import theta_via_string

        values, derivs = theta_via_string(pot, complex(z), xs, settings=settings)
    else:
        values, derivs = theta_values(pot, complex(z), xs, settings)
    return values, derivs, route


def theta_solution(
    pot: PotentialSpec,
    z: ComplexEnergy | complex,
    grid: GridSpec,
    allow_ambiguous: bool = False,
    settings: Optional[Settings] = None,
) -> WaveSample:
    """Non-principal solution theta(z, .) with W(theta, phi) = 1.

    Raises:
        ConditionError: If neither the iteration condition holds nor l < 1/2,
            unless ``allow_ambiguous`` accepts the free-data continuation
    """
    energy = momentum(z)
    values, derivs, route = nonprincipal_values(pot, energy.z, grid, allow_ambiguous, settings)
    return WaveSample(
        grid=grid,
        values=values,
        derivs=derivs,
        kind=WaveKind.NONPRINCIPAL,
        energy=energy,
        l=pot.l,
        route=route,
    )
