"""Jost function f(k) = W(f(k, .), phi(k^2, .)) and the normalized F(k).

F(k) = C_l k^l f(k) tends to one at large |k| and has two integral
representations for short-range potentials,

    F(k) = 1 + int_0^inf psi_l(k, x) phi(k^2, x) q(x) dx
         = 1 + int_0^inf psi~(k, x) phi_l(k^2, x) q(x) dx,

with psi_l = C_l k^l f_l(k, .) the free and psi~ = C_l k^l f(k, .) the
perturbed Jost solution scaled the same way.
"""

import logging
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.integrate import quad

from besselspec.models.potential import PotentialSpec
from besselspec.solutions.jost import jost_values, tail_radius
from besselspec.solutions.ode import (
    integrate,
    nonprincipal_values,
    regular_start,
    regular_values,
    scaled_rhs,
    start_radius,
)
from besselspec.specfun.free import free_jost, free_phi
from besselspec.specfun.functions import coupling_constant
from besselspec.spectral.weyl import matching_point
from besselspec.utils.config import DEFAULT_SETTINGS, Settings
from besselspec.utils.exceptions import ConditionError, IntegrabilityError, ValidationError

logger = logging.getLogger(__name__)

WRONSKIAN_SPREAD = 1e-8

Representation = Literal["forward", "backward", "wronskian"]


class JostValue(BaseModel):
    """Jost function and its companion at one momentum.

    Attributes:
        k: Momentum
        f: W(f(k, .), phi)
        g: W(f(k, .), theta), or None when not requested
        spread: Relative spread of f over the evaluation nodes
        warning: Set when g rests on the free-data continuation of theta
    """

    k: complex
    f: complex
    g: Optional[complex] = None
    spread: float = 0.0
    warning: Optional[str] = None

    model_config = ConfigDict(frozen=True)


def _half_line(pot: PotentialSpec) -> None:
    if not pot.half_line:
        raise ValidationError("the Jost function is defined for the half-line problem")


def _wronskian(a, da, b, db) -> np.ndarray:
    return a * db - da * b


def jost_function(
    pot: PotentialSpec,
    k: complex,
    with_g: bool = True,
    settings: Optional[Settings] = None,
) -> JostValue:
    """f(k) and g(k) as Wronskians at three nodes below the matching point.

    Args:
        pot: Half-line operator data
        k: Momentum with Im k >= 0, k != 0
        with_g: Also compute g(k) = W(f(k, .), theta(k^2, .))
        settings: Solver tolerances

    Raises:
        ValidationError: For an interval problem or an inadmissible k
    """
    settings = settings or DEFAULT_SETTINGS
    _half_line(pot)
    k = complex(k)
    x_m = matching_point(pot, k)
    nodes = np.array([0.5, 0.75, 1.0]) * x_m
    jost, djost = jost_values(pot, k, nodes, settings)
    phi, dphi = regular_values(pot, k * k, nodes, settings)
    f_nodes = _wronskian(jost, djost, phi, dphi)
    f = complex(f_nodes[-1])
    spread = float(np.max(np.abs(f_nodes - f)) / max(abs(f), 1e-300))
    if spread > WRONSKIAN_SPREAD:
        logger.warning("Jost Wronskian varies by %.2e across nodes at k = %s", spread, k)
    g = None
    warning = None
    if with_g:
        try:
            theta, dtheta, route = nonprincipal_values(pot, k * k, nodes, settings=settings)
        except ConditionError:
            theta, dtheta, route = nonprincipal_values(pot, k * k, nodes, True, settings)
        if route == "fallback":
            warning = "g is determined only up to an additive multiple of f"
        g = complex(_wronskian(jost, djost, theta, dtheta)[-1])
    return JostValue(k=k, f=f, g=g, spread=spread, warning=warning)


def _require_short_range(pot: PotentialSpec) -> None:
    _half_line(pot)
    if not (pot.marchenko and pot.hyp12):
        raise IntegrabilityError("F(k) needs a short-range potential with x q(x) integrable at zero")


def _scale(l: float, k: complex) -> complex:
    return coupling_constant(l) * k ** l


def _head(pot: PotentialSpec, x0: float) -> float:
    value, _ = quad(lambda y: y * float(pot(y)), 0.0, x0, limit=100)
    return value


def _forward(pot: PotentialSpec, k: complex, settings: Settings) -> complex:
    """1 + int psi_l phi q, integrating phi outward with the running integral."""
    z = k * k
    p = pot.l + 1
    end = tail_radius(pot, settings)
    x0 = start_radius(pot, end, settings)
    scale = _scale(pot.l, k)
    base = scaled_rhs(pot, z, p)

    def psi(x: float) -> complex:
        value, _ = free_jost(pot.l, k, x)
        return scale * complex(value)

    w0, dw0 = regular_start(pot, z, x0)
    # psi_l phi ~ x near zero, so the head integral is int_0^x0 y q(y) dy times the ratio
    head = psi(x0) * x0 ** p * w0 / x0 * _head(pot, x0)

    def rhs(x: float, y: np.ndarray) -> np.ndarray:
        dw = base(x, y[:2])
        return np.array([dw[0], dw[1], psi(x) * x ** p * y[0] * float(pot(x))])

    _, state = integrate(rhs, x0, end, [w0, dw0, head], None, pot.breakpoints, settings)
    return complex(1.0 + state[2])


def _backward(pot: PotentialSpec, k: complex, settings: Settings) -> complex:
    """1 + int psi~ phi_l q, integrating f(k, .) inward with the running integral."""
    z = k * k
    p = -pot.l
    end = tail_radius(pot, settings)
    x0 = start_radius(pot, end, settings)
    scale = _scale(pot.l, k)
    base = scaled_rhs(pot, z, p)
    f_end, df_end = free_jost(pot.l, k, end)
    f_end, df_end = complex(f_end), complex(df_end)
    w_end = end ** pot.l * f_end
    dw_end = pot.l * end ** (pot.l - 1) * f_end + end ** pot.l * df_end

    def rhs(x: float, y: np.ndarray) -> np.ndarray:
        dw = base(x, y[:2])
        phi_l, _ = free_phi(pot.l, z, x)
        jost = x ** p * y[0]
        return np.array([dw[0], dw[1], -scale * jost * complex(phi_l) * float(pot(x))])

    _, state = integrate(rhs, end, x0, [w_end, dw_end, 0.0], None, pot.breakpoints, settings)
    jost0 = x0 ** p * state[0]
    phi0, _ = free_phi(pot.l, z, x0)
    head = scale * jost0 * complex(phi0) / x0 * _head(pot, x0)
    return complex(1.0 + state[2] + head)


def F_function(
    pot: PotentialSpec,
    k: complex,
    representation: Representation = "forward",
    settings: Optional[Settings] = None,
) -> complex:
    """F(k) = C_l k^l f(k) for a short-range potential.

    Args:
        pot: Half-line operator data with q~ short range and x q integrable at zero
        k: Momentum with Im k >= 0, k != 0
        representation: ``forward`` (free Jost solution against phi),
            ``backward`` (perturbed Jost solution against phi_l) or
            ``wronskian`` (C_l k^l W(f(k, .), phi))
        settings: Solver tolerances

    Raises:
        IntegrabilityError: Outside the short-range class
    """
    settings = settings or DEFAULT_SETTINGS
    _require_short_range(pot)
    k = complex(k)
    if abs(k) < settings.k_min or k.imag < 0:
        raise ValidationError(f"F needs Im k >= 0 and |k| >= {settings.k_min:g}, got {k}")
    if representation == "forward":
        return _forward(pot, k, settings)
    if representation == "backward":
        return _backward(pot, k, settings)
    if representation == "wronskian":
        return complex(_scale(pot.l, k) * jost_function(pot, k, with_g=False, settings=settings).f)
    raise ValueError(f"unknown representation {representation!r}")


def normalized_jost(pot: PotentialSpec, k: complex, settings: Optional[Settings] = None) -> complex:
    """C_l k^l f(k) from the Wronskian, valid for Coulomb tails as well."""
    k = complex(k)
    return complex(_scale(pot.l, k) * jost_function(pot, k, with_g=False, settings=settings).f)


def jost_modulus_ratio(pot: PotentialSpec, k: float, settings: Optional[Settings] = None) -> float:
    """|f(k)| C_l k^l, which tends to one at large k."""
    if k <= 0:
        raise ValidationError("the modulus ratio is taken on positive k")
    return abs(normalized_jost(pot, k, settings))


def wronskian_identity_gap(pot: PotentialSpec, k: float, settings: Optional[Settings] = None) -> float:
    """|W(f(-k, .), f(k, .)) - 2ik| / |k| at the matching point."""
    settings = settings or DEFAULT_SETTINGS
    x = np.array([matching_point(pot, complex(k))])
    f_plus, df_plus = jost_values(pot, k, x, settings)
    f_minus, df_minus = jost_values(pot, -k, x, settings)
    w = complex(_wronskian(f_minus, df_minus, f_plus, df_plus)[0])
    return abs(w - 2j * k) / abs(k)


def companion_identity_gap(value: JostValue) -> float:
    """|Im(conj(f) g) + k| / k on real k."""
    if value.g is None:
        raise ValidationError("the companion identity needs g")
    k = value.k.real
    return abs((value.f.conjugate() * value.g).imag + k) / abs(k)

