"""Liouville transform of a Bessel problem with l < 1/2 onto a Krein string.

With a positive solution theta_0 = theta(lambda_0, .) on (0, 1] the maps

    xi(x) = int_0^x theta_0^-2,    r(xi) = theta_0(x)^4,    (U v)(xi) = v(x) / theta_0(x)

turn H - lambda_0 into the string operator -(1/r) d^2/dxi^2 on [0, a] with
a = xi(1). U is isometric from L^2(0, 1) onto L^2((0, a); r dxi), U theta
is the string solution c and U phi is s.
"""

import logging
import math
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import cumulative_simpson, simpson
from scipy.interpolate import CubicSpline

from besselspec.krein.string import string_grid, string_m, string_solutions
from besselspec.models.base import StringModel
from besselspec.models.potential import PotentialSpec
from besselspec.solutions.jost import weyl_log_derivative
from besselspec.solutions.ode import (
    integrate,
    nonprincipal_values,
    plain_rhs,
    regular_values,
    scaled_rhs,
    theta_values,
    unscale,
)
from besselspec.specfun.free import momentum
from besselspec.spectral.weyl import matching_point
from besselspec.utils.config import DEFAULT_SETTINGS, Settings
from besselspec.utils.constants import (
    POSITIVITY_ATTEMPTS,
    REDUCTION_FACTOR,
    STRING_LOG_NODES,
    TRANSFORM_END,
)
from besselspec.utils.exceptions import PositivityError, ValidationError

logger = logging.getLogger(__name__)


def transform_end(pot: PotentialSpec) -> float:
    return TRANSFORM_END if pot.b is None else min(TRANSFORM_END, pot.b)


def reference_solution(
    pot: PotentialSpec,
    lambda0: float,
    t: np.ndarray,
    settings: Optional[Settings] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """theta(lambda_0, .) and its derivative at the nodes t.

    When theta can be iterated from zero it is continued directly.
    Otherwise it is built by reduction of order,

        theta_0(x) = phi(x) int_x^x1 phi(y)^-2 dy,

    integrated backward from x1 = 2 * t[-1] with theta_0(x1) = 0 and
    theta_0'(x1) = -1 / phi(x1), which fixes W(theta_0, phi) = 1.
    """
    settings = settings or DEFAULT_SETTINGS
    if pot.theta_iterable:
        values, derivs = theta_values(pot, lambda0, t, settings)
        return values.real, derivs.real
    x1 = REDUCTION_FACTOR * float(t[-1])
    phi1, _ = regular_values(pot, lambda0, [x1], settings)
    p = -pot.l
    dtheta1 = -1.0 / complex(phi1[0])
    states, _ = integrate(
        scaled_rhs(pot, lambda0, p), x1, float(t[0]), [0.0, x1 ** pot.l * dtheta1], t, pot.breakpoints, settings
    )
    values, derivs = unscale(t, states[:, 0], states[:, 1], p)
    return values.real, derivs.real


def transformed_beta(theta0: float, dtheta0: float, beta: float) -> float:
    """String boundary angle: cot(b~) = theta_0^2 cot(b) - theta_0 theta_0' at the end."""
    angle = math.atan2(math.sin(beta), theta0 ** 2 * math.cos(beta) - theta0 * dtheta0 * math.sin(beta))
    return angle % math.pi


def printed_beta_tilde(theta0: float, beta: float) -> float:
    """Angle with cot(b~) = theta_0(1) (cot(b) + 1).

    This form agrees with ``transformed_beta`` for the Dirichlet condition
    only; it is kept for comparison.
    """
    angle = math.atan2(math.sin(beta), theta0 * (math.cos(beta) + math.sin(beta)))
    return angle % math.pi


def _head_xi(l: float, t0: float, theta0: float) -> float:
    if abs(l + 0.5) < 1e-12:
        return math.sqrt(t0) / theta0
    return t0 / (theta0 ** 2 * (2 * l + 1))


def liouville_transform(
    pot: PotentialSpec,
    lambda0: Optional[float] = None,
    beta: float = 0.0,
    settings: Optional[Settings] = None,
) -> StringModel:
    """Krein string of the problem on (0, min(1, b)].

    Args:
        pot: Operator data with l < 1/2
        lambda0: Energy of the positive reference solution; by default one
            unit below the spectral floor, lowered until theta_0 > 0
        beta: Boundary angle at the right end
        settings: Solver tolerances

    Raises:
        ValidationError: If l >= 1/2 or no floor is known and lambda0 is missing
        PositivityError: If theta_0 has a zero on (0, 1]
    """
    settings = settings or DEFAULT_SETTINGS
    if not pot.angular.limit_circle:
        raise ValidationError(f"the Liouville transform needs l < 1/2, got l = {pot.l}")
    t = string_grid(transform_end(pot))
    if lambda0 is None:
        floor = pot.spectral_floor
        if not math.isfinite(floor):
            raise ValidationError("potential has no finite lower bound; pass lambda0 explicitly")
        candidates = [floor - 2.0 ** k for k in range(POSITIVITY_ATTEMPTS)]
    else:
        candidates = [float(lambda0)]
    for lam in candidates:
        theta0, dtheta0 = reference_solution(pot, lam, t, settings)
        if np.all(theta0 > 0):
            break
        logger.debug("theta_0 changes sign at lambda_0 = %g", lam)
    else:
        raise PositivityError(f"theta(lambda_0, .) has a zero on (0, {t[-1]:g}] for lambda_0 = {lam:g}")
    head_xi = _head_xi(pot.l, t[0], theta0[0])
    head_R = t[0] * theta0[0] ** 2 / (1 - 2 * pot.l)
    xi = head_xi + cumulative_simpson(theta0 ** -2, x=t, initial=0)
    R = head_R + cumulative_simpson(theta0 ** 2, x=t, initial=0)
    spline = CubicSpline(np.log(t), np.log(theta0))

    def xi_rate(s):
        return np.exp(-2 * spline(np.log(s)))

    def mass_rate(s):
        return np.exp(2 * spline(np.log(s)))

    logger.debug("string length a = %.6g, total mass %.6g at lambda_0 = %g", xi[-1], R[-1], lam)
    return StringModel(
        a=float(xi[-1]),
        t=t,
        xi=xi,
        R=R,
        r=theta0 ** 4,
        theta0=theta0,
        dtheta0=dtheta0,
        beta_tilde=transformed_beta(theta0[-1], dtheta0[-1], beta),
        lambda0=lam,
        l=pot.l,
        xi_rate=xi_rate,
        mass_rate=mass_rate,
    )


@lru_cache(maxsize=16)
def _cached_transform(document: str, beta: float, settings: Settings) -> StringModel:
    return liouville_transform(PotentialSpec.model_validate_json(document), beta=beta, settings=settings)


def cached_transform(pot: PotentialSpec, beta: float = 0.0, settings: Optional[Settings] = None) -> StringModel:
    """Transform shared across calls for the same potential."""
    return _cached_transform(pot.to_document(), float(beta), settings or DEFAULT_SETTINGS)


def theta_via_string(
    pot: PotentialSpec,
    z: complex,
    x: Sequence[float] | np.ndarray,
    settings: Optional[Settings] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """theta(z, x) = theta_0(x) c(z - lambda_0, xi(x)) and its derivative.

    Nodes left of the switch point are interpolated from the string table;
    from the switch point on the Bessel equation itself is integrated.

    Raises:
        ValidationError: If a node lies left of the string table
    """
    settings = settings or DEFAULT_SETTINGS
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    sm = cached_transform(pot, settings=settings)
    if np.any(xs < sm.t[0]):
        raise ValidationError(f"theta via the string needs x >= {sm.t[0]:g}")
    sol = string_solutions(sm, complex(z) - sm.lambda0, settings)
    theta = sm.theta0 * sol.c
    dtheta = sm.dtheta0 * sol.c + sol.dc / sm.theta0
    values = np.empty(xs.shape, dtype=complex)
    derivs = np.empty(xs.shape, dtype=complex)
    switch = STRING_LOG_NODES - 1
    inner = xs < sm.t[switch]
    if inner.any():
        log_t = np.log(sm.t[: switch + 1])
        values[inner] = CubicSpline(log_t, theta[: switch + 1])(np.log(xs[inner]))
        derivs[inner] = CubicSpline(log_t, dtheta[: switch + 1])(np.log(xs[inner]))
    if (~inner).any():
        states, _ = integrate(
            plain_rhs(pot, complex(z)),
            sm.t[switch],
            float(xs.max()),
            [theta[switch], dtheta[switch]],
            xs[~inner],
            pot.breakpoints,
            settings,
        )
        values[~inner] = states[:, 0]
        derivs[~inner] = states[:, 1]
    return values, derivs


def _right_state(pot: PotentialSpec, z: complex, sm: StringModel, beta: float, settings: Settings):
    """String state (U y, d(U y)/dxi) at a of the solution fixing the right condition."""
    end = float(sm.t[-1])
    if pot.b is not None and pot.b <= end:
        y, dy = math.sin(beta), math.cos(beta)
    else:
        y, dy = 1.0, weyl_log_derivative(pot, z, end, beta, settings)
    theta0, dtheta0 = sm.theta0[-1], sm.dtheta0[-1]
    return y / theta0, theta0 * dy - dtheta0 * y


def transformed_m(
    pot: PotentialSpec,
    z: complex,
    beta: float = 0.0,
    settings: Optional[Settings] = None,
) -> complex:
    """String m-function M(z - lambda_0) of the transformed problem.

    On the half-line, or when b > 1, the right condition is carried to the
    string end by the Weyl solution of the remaining interval.
    """
    settings = settings or DEFAULT_SETTINGS
    sm = cached_transform(pot, settings=settings)
    z = complex(z)
    boundary = _right_state(pot, z, sm, beta, settings)
    return string_m(sm, z - sm.lambda0, boundary=boundary, settings=settings)


def bessel_m_tilde(
    pot: PotentialSpec,
    z: complex,
    beta: float = 0.0,
    allow_ambiguous: bool = False,
    settings: Optional[Settings] = None,
) -> complex:
    """m~(z) = W(psi, phi) / W(psi, theta), computed on the Bessel side."""
    settings = settings or DEFAULT_SETTINGS
    energy = momentum(z)
    x = matching_point(pot, energy.k)
    phi, dphi = regular_values(pot, energy.z, [x], settings)
    theta, dtheta, _ = nonprincipal_values(pot, energy.z, [x], allow_ambiguous, settings)
    u = weyl_log_derivative(pot, energy, x, beta, settings)
    return complex((dphi[0] - u * phi[0]) / (dtheta[0] - u * theta[0]))


def isometry_defect(sm: StringModel, v: np.ndarray) -> float:
    """| ||U v||^2 - ||v||^2 | for v sampled at the string nodes."""
    if sm.theta0 is None:
        raise ValidationError("isometry needs a transformed string")
    v = np.asarray(v)
    u = v / sm.theta0
    transformed = simpson(np.abs(u) ** 2 * sm.r, x=sm.xi)
    original = simpson(np.abs(v) ** 2, x=sm.t)
    return float(abs(transformed - original))
