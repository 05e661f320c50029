"""Spectral measure: absolutely continuous density, point masses and rho.

On the half-line the density is sqrt(lambda) / (pi |f(sqrt(lambda))|^2) and
the point masses are the norming constants of the bound states; rho is
normalized by rho(0) = 0 with the midpoint value at every jump.
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict
from scipy.integrate import simpson

from besselspec.models.base import SpectralData
from besselspec.models.potential import PotentialSpec
from besselspec.scattering.jost import jost_function
from besselspec.specfun.free import model_density, model_m
from besselspec.spectral.eigen import eigen_count, eigenvalues, norming_constants
from besselspec.spectral.weyl import weyl_m
from besselspec.utils.config import DEFAULT_SETTINGS, Settings, sweep
from besselspec.utils.constants import BOUNDARY_VALUE_OFFSET
from besselspec.utils.exceptions import IntegrabilityError, ValidationError

logger = logging.getLogger(__name__)

RHO_NODES = 401


def _require_scattering(pot: PotentialSpec) -> None:
    if not pot.half_line:
        raise ValidationError("the spectral density is defined for the half-line problem")
    if not pot.coulomb_admissible:
        raise IntegrabilityError("the spectral density needs a short-range or Coulomb tail")


def _positive_energies(lam_grid: Sequence[float] | np.ndarray) -> np.ndarray:
    lam = np.atleast_1d(np.asarray(lam_grid, dtype=float))
    if lam.size == 0 or np.any(lam <= 0):
        raise ValidationError("density energies must be positive")
    return lam


def spectral_density(
    pot: PotentialSpec,
    lam_grid: Sequence[float] | np.ndarray,
    settings: Optional[Settings] = None,
) -> np.ndarray:
    """d rho / d lambda = sqrt(lambda) / (pi |f(sqrt(lambda))|^2).

    Raises:
        ValidationError: For interval problems or nonpositive energies
        IntegrabilityError: If q has no admissible tail
    """
    settings = settings or DEFAULT_SETTINGS
    _require_scattering(pot)
    lam = _positive_energies(lam_grid)

    def density(energy: float) -> float:
        k = math.sqrt(energy)
        f = jost_function(pot, k, with_g=False, settings=settings).f
        return k / (math.pi * abs(f) ** 2)

    return np.array(sweep(density, lam, settings), dtype=float)


def density_from_m(
    pot: PotentialSpec,
    lam_grid: Sequence[float] | np.ndarray,
    offset: float = BOUNDARY_VALUE_OFFSET,
    settings: Optional[Settings] = None,
) -> np.ndarray:
    """Im m(lambda + i offset lambda) / pi, the boundary-value form of the density."""
    settings = settings or DEFAULT_SETTINGS
    lam = _positive_energies(lam_grid)
    values = sweep(lambda e: weyl_m(pot, complex(e, offset * e), settings=settings).m, lam, settings)
    return np.array([v.imag / math.pi for v in values])


def spectral_data(
    pot: PotentialSpec,
    lam_grid: Sequence[float] | np.ndarray,
    include_bound_states: bool = True,
    settings: Optional[Settings] = None,
) -> SpectralData:
    """Density on ``lam_grid`` plus the eigenvalues and norming constants.

    For an interval problem the spectrum is discrete: no density is
    sampled and the eigenvalues up to max(lam_grid) are returned.
    """
    settings = settings or DEFAULT_SETTINGS
    lam = np.atleast_1d(np.asarray(lam_grid, dtype=float))
    if pot.half_line:
        density = spectral_density(pot, lam, settings)
        lams = eigenvalues(pot, settings=settings) if include_bound_states else np.array([])
    else:
        lam, density = np.array([]), np.array([])
        top = float(np.max(np.asarray(lam_grid, dtype=float)))
        count = eigen_count(pot, top, settings=settings)
        lams = eigenvalues(pot, count=count, settings=settings) if count else np.array([])
    norming = norming_constants(pot, lams, settings) if lams.size else np.array([])
    return SpectralData(lam=lam, density=density, eigenvalues=lams, norming=norming)


def _point_masses(pot: PotentialSpec, lam: float, settings: Settings) -> SpectralData:
    if pot.half_line:
        lams = eigenvalues(pot, settings=settings)
    else:
        above = lam + 1e-9 * max(1.0, abs(lam))
        count = eigen_count(pot, above, settings=settings)
        lams = eigenvalues(pot, count=count, settings=settings) if count else np.array([])
    norming = norming_constants(pot, lams, settings) if lams.size else np.array([])
    return SpectralData(eigenvalues=lams, norming=norming)


def _continuous_part(pot: PotentialSpec, lam: float, settings: Settings) -> float:
    """int_0^lam density = (2 / pi) int_0^sqrt(lam) k^2 / |f(k)|^2 dk."""
    top = math.sqrt(lam)
    k_min = settings.k_min
    if top <= k_min:
        f = jost_function(pot, top, with_g=False, settings=settings).f
        return float(2 / math.pi * top ** 3 / abs(f) ** 2 / (2 * pot.l + 3))
    if pot.angular.critical:
        logger.warning("l = -1/2: the density carries a logarithm near zero; rho below k = %g is approximate", k_min)
    k = np.geomspace(k_min, top, RHO_NODES)
    values = np.array(
        sweep(lambda kk: kk * kk / abs(jost_function(pot, kk, with_g=False, settings=settings).f) ** 2, k, settings)
    )
    # integrand ~ k^(2l+2) below k_min
    head = values[0] * k_min / (2 * pot.l + 3)
    return float(2 / math.pi * (simpson(values, x=k) + head))


def spectral_function(pot: PotentialSpec, lam: float, settings: Optional[Settings] = None) -> float:
    """rho(lambda) with rho(0) = 0 and the midpoint convention at jumps.

    Args:
        pot: Operator data
        lam: Energy
        settings: Solver tolerances

    Returns:
        The spectral function, negative below zero when bound states exist
    """
    settings = settings or DEFAULT_SETTINGS
    lam = float(lam)
    total = _point_masses(pot, lam, settings).point_mass_rho(lam)
    if pot.half_line and lam > 0:
        _require_scattering(pot)
        total += _continuous_part(pot, lam, settings)
    return total


class AsymptoticsReport(BaseModel):
    """m and density against the free model along a ray z = r e^(i angle).

    Attributes:
        l: Angular momentum
        angle: Ray angle in (0, pi)
        magnitudes: |z| samples
        z: Spectral parameters on the ray
        m: m-function values
        im_ratio: Im m / Im m_l
        density_ratio: density / rho_l' at lambda = |z|, half-line only
        warning: Set when the additive polynomial term may contaminate the ratio
    """

    l: float
    angle: float
    magnitudes: list[float]
    z: list[complex]
    m: list[complex]
    im_ratio: list[float]
    density_ratio: Optional[list[float]] = None
    warning: Optional[str] = None

    model_config = ConfigDict(frozen=True)

    @property
    def converging(self) -> bool:
        """True when |im_ratio - 1| decreases along the magnitudes."""
        gaps = np.abs(np.asarray(self.im_ratio) - 1.0)
        return bool(np.all(np.diff(gaps) <= 0))

    def to_frame(self) -> pd.DataFrame:
        z = np.asarray(self.z)
        m = np.asarray(self.m)
        frame = pd.DataFrame(
            {
                "magnitude": self.magnitudes,
                "z_re": z.real,
                "z_im": z.imag,
                "m_re": m.real,
                "m_im": m.imag,
                "im_ratio": self.im_ratio,
            }
        )
        if self.density_ratio is not None:
            frame["density_ratio"] = self.density_ratio
        return frame


def asymptotics_report(
    pot: PotentialSpec,
    angle: float = math.pi / 2,
    magnitudes: Sequence[float] = (1e2, 1e3, 1e4),
    route: str = "jost",
    settings: Optional[Settings] = None,
) -> AsymptoticsReport:
    """Ratios Im m(z) / Im m_l(z) along a nonreal ray, with density ratios.

    Raises:
        ValidationError: If the ray is real or a magnitude is not positive
    """
    settings = settings or DEFAULT_SETTINGS
    if not 0 < angle < math.pi:
        raise ValidationError(f"ray angle must lie in (0, pi), got {angle}")
    radii = [float(r) for r in magnitudes]
    if not radii or min(radii) <= 0:
        raise ValidationError("magnitudes must be positive")
    warning = None
    if pot.angular.kappa >= 1:
        warning = f"kappa_l = {pot.angular.kappa}: the additive polynomial of m may affect the ratio"
        logger.warning(warning)
    zs = [r * complex(math.cos(angle), math.sin(angle)) for r in radii]
    ms = [s.m for s in sweep(lambda z: weyl_m(pot, z, route, settings=settings), zs, settings)]
    im_ratio = [m.imag / model_m(pot.l, z).imag for m, z in zip(ms, zs)]
    density_ratio = None
    if pot.half_line and pot.coulomb_admissible:
        density = spectral_density(pot, radii, settings)
        density_ratio = list(density / model_density(pot.l, np.asarray(radii)))
    for r, ratio in zip(radii, im_ratio):
        logger.debug("|z| = %g: Im m / Im m_l = %.6f", r, ratio)
    return AsymptoticsReport(
        l=pot.l,
        angle=angle,
        magnitudes=radii,
        z=zs,
        m=ms,
        im_ratio=im_ratio,
        density_ratio=density_ratio,
        warning=warning,
    )
