"""Krein strings -u'' = z r(xi) u on [0, a] and their m-function.

Solutions are tabulated over the string's parameter nodes t. Near xi = 0
the Volterra equations

    c(z, t) = 1  - z int_0^t (xi(t) - xi(y)) c(z, y) dR(y)
    s(z, t) = xi - z int_0^t (xi(t) - xi(y)) s(z, y) dR(y)

are solved by Picard sweeps of cumulative Simpson sums. Once |z| xi R
exceeds one the first-order system in t takes over.
"""

import logging
import math
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy.integrate import cumulative_simpson, simpson

from besselspec.models.base import StringModel
from besselspec.solutions.ode import integrate
from besselspec.utils.config import DEFAULT_SETTINGS, Settings
from besselspec.utils.constants import (
    MAX_GROWTH_EXPONENT,
    STRING_GRID_MIN,
    STRING_GRID_SWITCH,
    STRING_LOG_NODES,
    STRING_PICARD_RADIUS,
    STRING_UNIFORM_NODES,
)
from besselspec.utils.exceptions import ConvergenceError, ValidationError

logger = logging.getLogger(__name__)


class StringSolutions(NamedTuple):
    """c and s with their xi-derivatives at the string nodes."""

    t: np.ndarray
    xi: np.ndarray
    c: np.ndarray
    dc: np.ndarray
    s: np.ndarray
    ds: np.ndarray

    def wronskian(self) -> np.ndarray:
        """W(c, s) = c s' - c' s, identically one."""
        return self.c * self.ds - self.dc * self.s


def string_grid(end: float) -> np.ndarray:
    """Geometric nodes up to the switch point, uniform nodes beyond."""
    switch = min(STRING_GRID_SWITCH, end / 2)
    head = np.geomspace(STRING_GRID_MIN, switch, STRING_LOG_NODES)
    rest = np.linspace(switch, end, STRING_UNIFORM_NODES + 1)[1:]
    return np.concatenate([head, rest])


def uniform_string(a: float = 1.0, density: float = 1.0) -> StringModel:
    """String with constant density on [0, a]."""
    if density <= 0:
        raise ValidationError("string density must be positive")
    xi = string_grid(a)
    return StringModel(
        a=a,
        t=xi,
        xi=xi,
        R=density * xi,
        r=np.full_like(xi, density),
        xi_rate=lambda t: np.ones_like(np.asarray(t, dtype=float)),
        mass_rate=lambda t: np.full_like(np.asarray(t, dtype=float), density),
    )


def power_string(alpha: float, a: float = 1.0, coefficient: float = 1.0) -> StringModel:
    """String with mass function R(xi) = coefficient * xi^alpha."""
    if alpha <= 0 or coefficient <= 0:
        raise ValidationError("power strings need alpha > 0 and a positive coefficient")
    xi = string_grid(a)

    def mass_rate(t):
        return coefficient * alpha * np.asarray(t, dtype=float) ** (alpha - 1)

    return StringModel(
        a=a,
        t=xi,
        xi=xi,
        R=coefficient * xi ** alpha,
        r=mass_rate(xi),
        xi_rate=lambda t: np.ones_like(np.asarray(t, dtype=float)),
        mass_rate=mass_rate,
    )


def _head_moments(sm: StringModel, rate: np.ndarray) -> tuple[float, float, float]:
    """int_0^t0 xi^m dR for m = 0, 1, 2 with power laws fitted at the first nodes."""
    t0, t1 = sm.t[0], sm.t[1]
    span = math.log(t1 / t0)
    a = math.log(sm.xi[1] / sm.xi[0]) / span
    b = math.log(rate[1] / rate[0]) / span
    head = [t0 * sm.xi[0] ** m * rate[0] / (m * a + b + 1) for m in range(3)]
    head[0] = float(sm.R[0])
    return head[0], head[1], head[2]


def _cumulative(values: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Cumulative Simpson sum of complex samples, real and imaginary parts apart."""
    real = cumulative_simpson(values.real, x=t, initial=0)
    imag = cumulative_simpson(values.imag, x=t, initial=0)
    return real + 1j * imag


def _picard(
    sm: StringModel, z: complex, stop: int, settings: Settings
) -> tuple[np.ndarray, ...]:
    t = sm.t[:stop]
    xi = sm.xi[:stop]
    rate = sm.mass_rate(sm.t)
    h0, h1, h2 = _head_moments(sm, rate)
    rate = rate[:stop]
    c = np.ones(stop, dtype=complex)
    s = xi.astype(complex)
    update = math.inf
    for sweep in range(1, settings.string_max_sweeps + 1):
        A_c = h0 * c[0] + _cumulative(rate * c, t)
        B_c = h1 * c[0] + _cumulative(xi * rate * c, t)
        scale = s[0] / xi[0]
        A_s = h1 * scale + _cumulative(rate * s, t)
        B_s = h2 * scale + _cumulative(xi * rate * s, t)
        c_new = 1.0 - z * (xi * A_c - B_c)
        s_new = xi - z * (xi * A_s - B_s)
        update = max(
            np.max(np.abs(c_new - c)) / np.max(np.abs(c_new)),
            np.max(np.abs(s_new - s)) / np.max(np.abs(s_new)),
        )
        c, s = c_new, s_new
        if update < settings.picard_tolerance:
            logger.debug("string Picard settled after %d sweeps on %d nodes", sweep, stop)
            return c, -z * A_c, s, 1.0 - z * A_s
    raise ConvergenceError(
        f"string iteration did not settle in {settings.string_max_sweeps} sweeps "
        f"(last update {update:.2e})"
    )


def _picard_stop(sm: StringModel, z: complex) -> int:
    """Number of leading nodes where |z| xi R stays below the Picard radius."""
    weight = abs(z) * sm.xi * sm.R
    beyond = np.flatnonzero(weight > STRING_PICARD_RADIUS)
    stop = int(beyond[0]) if beyond.size else sm.t.size
    return max(stop, 3)


def _string_rhs(sm: StringModel, z: complex):
    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        xr = float(sm.xi_rate(t))
        mr = float(sm.mass_rate(t))
        out = np.empty_like(y)
        out[0::2] = xr * y[1::2]
        out[1::2] = -z * mr * y[0::2]
        return out

    return rhs


def string_solutions(
    sm: StringModel, z: complex, settings: Optional[Settings] = None
) -> StringSolutions:
    """c(z, .) and s(z, .) with c(0) = s'(0) = 1 and c'(0) = s(0) = 0.

    Raises:
        ConvergenceError: If the Picard sweeps do not settle
    """
    settings = settings or DEFAULT_SETTINGS
    z = complex(z)
    stop = _picard_stop(sm, z)
    c, dc, s, ds = _picard(sm, z, stop, settings)
    if stop < sm.t.size:
        y0 = [c[-1], dc[-1], s[-1], ds[-1]]
        states, _ = integrate(_string_rhs(sm, z), sm.t[stop - 1], sm.t[-1], y0, sm.t[stop:], (), settings)
        c = np.concatenate([c, states[:, 0]])
        dc = np.concatenate([dc, states[:, 1]])
        s = np.concatenate([s, states[:, 2]])
        ds = np.concatenate([ds, states[:, 3]])
    return StringSolutions(t=sm.t, xi=sm.xi, c=c, dc=dc, s=s, ds=ds)


def _boundary_state(sm: StringModel, z: complex, stop: int, y_end: Sequence[complex], settings: Settings):
    """Carry a solution from xi = a back to node stop - 1, renormalizing on the way."""
    t_stop = sm.t[stop - 1]
    y = np.asarray(y_end, dtype=complex)
    if stop == sm.t.size:
        return y
    tail = sm.t[stop - 1:]
    growth = float(np.max(sm.xi_rate(tail) * sm.mass_rate(tail)))
    rate = max(math.sqrt(abs(z) * growth), 1.0)
    chunk = MAX_GROWTH_EXPONENT / rate
    knots = [sm.t[-1]]
    while knots[-1] - chunk > t_stop:
        knots.append(knots[-1] - chunk)
    knots.append(t_stop)
    rhs = _string_rhs(sm, z)
    for a, b in zip(knots, knots[1:]):
        _, y = integrate(rhs, a, b, y, None, (), settings)
        y = y / np.linalg.norm(y)
    return y


def string_m(
    sm: StringModel,
    z: complex,
    boundary: Optional[Sequence[complex]] = None,
    settings: Optional[Settings] = None,
) -> complex:
    """m-function M(z) of the string: s - M c satisfies the condition at a.

    Args:
        sm: String
        z: Spectral parameter off the real axis
        boundary: State (u, du/dxi) at a of the solution fixing the right
            condition; defaults to cos(b) u(a) - sin(b) u'(a) = 0 with
            b = ``sm.beta_tilde``
        settings: Solver tolerances

    Raises:
        ValidationError: If z is real
    """
    settings = settings or DEFAULT_SETTINGS
    z = complex(z)
    if z.imag == 0:
        raise ValidationError(f"M is evaluated off the real axis, got z = {z}")
    if boundary is None:
        boundary = (math.sin(sm.beta_tilde), math.cos(sm.beta_tilde))
    stop = _picard_stop(sm, z)
    c, dc, s, ds = _picard(sm, z, stop, settings)
    Y, V = _boundary_state(sm, z, stop, boundary, settings)
    return complex((s[-1] * V - ds[-1] * Y) / (c[-1] * V - dc[-1] * Y))


def mass_eigenvalue_count(sm: StringModel, lam: float) -> float:
    """Weyl-law count (sqrt(lam) / pi) int_0^a sqrt(r) dxi of string eigenvalues below lam."""
    length = simpson(np.sqrt(sm.xi_rate(sm.t) * sm.mass_rate(sm.t)), x=sm.t)
    return math.sqrt(max(lam, 0.0)) / math.pi * float(length)
