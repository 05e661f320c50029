"""Singular Weyl m-function along three construction routes.

jost
    m = -W(psi, theta) / W(psi, phi) with psi the Weyl solution at the
    right endpoint (the Jost solution on the half-line), evaluated at a
    matching point where neither solution overflows.
truncated
    m_c = -theta(z, c) / phi(z, c), the m-function of the problem cut off
    at c with a Dirichlet condition; it shares the large-|z| asymptotics.
string
    m = -1 / M with M the m-function of the Krein string obtained by the
    Liouville transform (l < 1/2 only).
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from besselspec.models.base import ComplexEnergy, MRoute, MSample
from besselspec.models.potential import PotentialSpec
from besselspec.solutions.jost import weyl_log_derivative
from besselspec.solutions.ode import nonprincipal_values, regular_values
from besselspec.specfun.free import momentum
from besselspec.utils.config import DEFAULT_SETTINGS, Settings, sweep
from besselspec.utils.constants import (
    MATCHING_RADIUS,
    MAX_GROWTH_EXPONENT,
    RESIDUE_POINTS,
    RESIDUE_RADIUS,
)
from besselspec.utils.exceptions import RouteUnavailableError, ValidationError

logger = logging.getLogger(__name__)


def matching_point(pot: PotentialSpec, k: complex) -> float:
    """Point where Wronskians are evaluated: inside (0, b), before phi overflows."""
    x = MATCHING_RADIUS
    if pot.b is not None:
        x = min(x, pot.b / 2)
    if k.imag > 0:
        x = min(x, MAX_GROWTH_EXPONENT / k.imag)
    return x


def _jost_route(
    pot: PotentialSpec, energy: ComplexEnergy, beta: float, allow_ambiguous: bool, settings: Settings
) -> complex:
    if pot.half_line and not (pot.coulomb_admissible or pot.without_constant().coulomb_admissible):
        raise RouteUnavailableError("the jost route needs a short-range or Coulomb tail")
    x = matching_point(pot, energy.k)
    phi, dphi = regular_values(pot, energy.z, [x], settings)
    theta, dtheta, _ = nonprincipal_values(pot, energy.z, [x], allow_ambiguous, settings)
    u = weyl_log_derivative(pot, energy, x, beta, settings)
    return complex(-(dtheta[0] - u * theta[0]) / (dphi[0] - u * phi[0]))


def _truncated_route(
    pot: PotentialSpec, energy: ComplexEnergy, c: float, allow_ambiguous: bool, settings: Settings
) -> complex:
    phi, _ = regular_values(pot, energy.z, [c], settings)
    theta, _, _ = nonprincipal_values(pot, energy.z, [c], allow_ambiguous, settings)
    return complex(-theta[0] / phi[0])


def weyl_m(
    pot: PotentialSpec,
    z: ComplexEnergy | complex,
    route: Optional[MRoute | str] = None,
    c: float = MATCHING_RADIUS,
    beta: float = 0.0,
    allow_ambiguous: bool = False,
    settings: Optional[Settings] = None,
) -> MSample:
    """Singular m-function at a nonreal z.

    Args:
        pot: Operator data; ``pot.b`` selects the interval problem
        z: Spectral parameter off the real axis
        route: ``jost`` (default), ``truncated`` or ``string``
        c: Cut-off point of the truncated route
        beta: Boundary angle at b for interval problems
        allow_ambiguous: Accept the free-data continuation of theta
        settings: Solver tolerances

    Raises:
        ValidationError: If z is real
        RouteUnavailableError: If the route does not apply to ``pot``
    """
    settings = settings or DEFAULT_SETTINGS
    energy = momentum(z)
    if energy.z.imag == 0:
        raise ValidationError(f"m is evaluated off the real axis, got z = {energy.z}")
    route = MRoute(route or MRoute.JOST)
    if route is MRoute.JOST:
        m = _jost_route(pot, energy, beta, allow_ambiguous, settings)
    elif route is MRoute.TRUNCATED:
        if c <= 0 or (pot.b is not None and c > pot.b):
            raise ValidationError(f"cut-off c = {c} must lie in (0, b]")
        m = _truncated_route(pot, energy, c, allow_ambiguous, settings)
    else:
        if not pot.angular.limit_circle:
            raise RouteUnavailableError("the string route needs l < 1/2")
        from besselspec.krein.transform import transformed_m

        m = -1.0 / transformed_m(pot, energy.z, beta=beta, settings=settings)
    logger.debug("m(%s) = %s via %s", energy.z, m, route.value)
    return MSample(z=energy.z, m=m, route=route)


class RouteComparison(BaseModel):
    """Two m routes on a common z sample after constant alignment.

    Attributes:
        z: Spectral parameters
        first: m along the first route
        second: m along the second route
        shift: first - second at the reference point
        residual: Largest |first - second - shift| relative to |first|
        warning: Set when the routes differ by more than a constant
    """

    z: list[complex]
    first: list[MSample]
    second: list[MSample]
    shift: complex
    residual: float
    warning: Optional[str] = None

    model_config = ConfigDict(frozen=True)


def compare_routes(
    pot: PotentialSpec,
    zs: Sequence[complex],
    routes: tuple[MRoute | str, MRoute | str] = (MRoute.JOST, MRoute.STRING),
    tolerance: float = 1e-6,
    settings: Optional[Settings] = None,
) -> RouteComparison:
    """Evaluate two routes and align them by their difference at zs[0].

    Routes built on different non-principal solutions differ by a real
    entire function; after removing the constant part any remainder is
    reported as a warning on the samples.
    """
    settings = settings or DEFAULT_SETTINGS
    zs = [complex(z) for z in zs]
    if not zs:
        raise ValidationError("route comparison needs at least one z")
    first = sweep(lambda z: weyl_m(pot, z, routes[0], settings=settings), zs, settings)
    second = sweep(lambda z: weyl_m(pot, z, routes[1], settings=settings), zs, settings)
    shift = first[0].m - second[0].m
    gaps = [abs(a.m - b.m - shift) / max(abs(a.m), 1e-300) for a, b in zip(first, second)]
    residual = float(max(gaps))
    warning = None
    if residual > tolerance:
        warning = (
            f"routes differ by a nonconstant real entire term (relative gap {residual:.2e})"
        )
        logger.warning(warning)
        first = [s.model_copy(update={"warning": warning}) for s in first]
        second = [s.model_copy(update={"warning": warning}) for s in second]
    return RouteComparison(
        z=zs, first=first, second=second, shift=shift, residual=residual, warning=warning
    )


def m_residue(
    pot: PotentialSpec,
    lam: float,
    radius: float = RESIDUE_RADIUS,
    points: int = RESIDUE_POINTS,
    settings: Optional[Settings] = None,
) -> float:
    """Residue of the jost-route m at a real pole, by a contour average.

    At an eigenvalue lambda_n the residue equals -gamma_n.
    """
    settings = settings or DEFAULT_SETTINGS
    r = radius * max(1.0, abs(lam))
    angles = 2 * math.pi * (np.arange(points) + 0.5) / points
    offsets = r * np.exp(1j * angles)
    values = sweep(lambda dz: weyl_m(pot, lam + dz, settings=settings).m, offsets, settings)
    return float(np.mean(np.asarray(values) * offsets).real)
