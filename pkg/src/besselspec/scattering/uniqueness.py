"""Comparison of two potentials through their spectral and scattering data.

A desk check of the uniqueness statements: data that differ beyond
solver tolerance force the potentials to differ, and potentials that
agree on (0, c) have m-functions whose difference decays like
exp(-2 c Im k) along a nonreal ray.
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from besselspec.models.base import MRoute
from besselspec.models.potential import PotentialSpec
from besselspec.scattering.jost import F_function
from besselspec.scattering.phase import phase_shift
from besselspec.solutions.jost import tail_radius
from besselspec.spectral.eigen import eigenvalues, norming_constants
from besselspec.spectral.measure import spectral_density
from besselspec.spectral.weyl import weyl_m
from besselspec.utils.config import DEFAULT_SETTINGS, Settings, sweep
from besselspec.utils.constants import LOG_FIT_WINDOW, MATCHING_RADIUS
from besselspec.utils.exceptions import ValidationError

logger = logging.getLogger(__name__)

COMPARE_TOLERANCE = 1e-6
Q_SAMPLES = 400


def fit_log_coefficient(
    pot: PotentialSpec,
    window: tuple[float, float] = LOG_FIT_WINDOW,
    points: int = 24,
    settings: Optional[Settings] = None,
) -> tuple[float, float, float]:
    """Fit F(i kappa) = c log(kappa^2) + d near k = 0 at l = -1/2.

    F is real on the positive imaginary axis, and -k^2 = kappa^2 there.

    Returns:
        The coefficient c, the intercept d and the largest fit residual

    Raises:
        ValidationError: Unless l = -1/2 and the window is positive and increasing
    """
    settings = settings or DEFAULT_SETTINGS
    if not pot.angular.critical:
        raise ValidationError("the logarithmic term of F is specific to l = -1/2")
    lo, hi = window
    if not 0 < lo < hi:
        raise ValidationError(f"fit window {window} must be positive and increasing")
    kappas = np.geomspace(lo, hi, points)
    values = sweep(lambda kap: F_function(pot, 1j * kap, "wronskian", settings), kappas, settings)
    F = np.array([v.real for v in values])
    design = np.column_stack([np.log(kappas ** 2), np.ones_like(kappas)])
    (c, d), *_ = np.linalg.lstsq(design, F, rcond=None)
    residual = float(np.max(np.abs(design @ np.array([c, d]) - F)))
    logger.debug("log fit on [%g, %g]: c = %.6e, d = %.6e, residual %.1e", lo, hi, c, d, residual)
    return float(c), float(d), residual


class UniquenessReport(BaseModel):
    """Sup-differences between the data of two potentials.

    Attributes:
        c: Right end of the interval where the potentials are compared
        delta_gap: max |delta_1 - delta_2| on the momentum grid
        eigen_gap: max |lambda_n^1 - lambda_n^2|, infinite when the counts differ
        norming_gap: max relative gap of the norming constants
        density_gap: max relative gap of the spectral densities
        q_gap: max |q_1 - q_2| on (0, c)
        tolerance: Threshold separating equal from different
    """

    c: float
    delta_gap: float
    eigen_gap: float
    norming_gap: float
    density_gap: float
    q_gap: float
    tolerance: float = COMPARE_TOLERANCE

    model_config = ConfigDict(frozen=True)

    @property
    def data_differ(self) -> bool:
        gaps = (self.delta_gap, self.eigen_gap, self.norming_gap, self.density_gap)
        return any(g > self.tolerance for g in gaps)

    @property
    def potentials_differ(self) -> bool:
        return self.q_gap > self.tolerance

    @property
    def consistent(self) -> bool:
        """Data differ exactly when the potentials differ on (0, c)."""
        return self.data_differ == self.potentials_differ


def _point_gaps(pot1: PotentialSpec, pot2: PotentialSpec, settings: Settings) -> tuple[float, float]:
    lams1 = eigenvalues(pot1, settings=settings)
    lams2 = eigenvalues(pot2, settings=settings)
    if lams1.size != lams2.size:
        logger.info("bound-state counts differ: %d vs %d", lams1.size, lams2.size)
        return math.inf, math.inf
    if lams1.size == 0:
        return 0.0, 0.0
    gam1 = norming_constants(pot1, lams1, settings)
    gam2 = norming_constants(pot2, lams2, settings)
    return float(np.max(np.abs(lams1 - lams2))), float(np.max(np.abs(gam1 - gam2) / gam1))


def uniqueness_compare(
    pot1: PotentialSpec,
    pot2: PotentialSpec,
    c: float,
    k_grid: Sequence[float] | np.ndarray = tuple(np.linspace(0.5, 20.0, 80)),
    lam_grid: Sequence[float] | np.ndarray = (1.0, 4.0, 16.0, 64.0),
    tolerance: float = COMPARE_TOLERANCE,
    settings: Optional[Settings] = None,
) -> UniquenessReport:
    """Compare phase shifts, eigenvalues, norming constants, densities and q.

    Raises:
        ValidationError: Unless both problems are on the half-line with the
            same angular momentum and c > 0
    """
    settings = settings or DEFAULT_SETTINGS
    if not (pot1.half_line and pot2.half_line):
        raise ValidationError("the comparison uses half-line scattering data")
    if pot1.l != pot2.l:
        raise ValidationError("compare potentials at one angular momentum")
    if c <= 0:
        raise ValidationError(f"comparison interval end must be positive, got {c}")
    delta_gap = float(np.max(np.abs(phase_shift(pot1, k_grid, settings) - phase_shift(pot2, k_grid, settings))))
    eigen_gap, norming_gap = _point_gaps(pot1, pot2, settings)
    rho1 = spectral_density(pot1, lam_grid, settings)
    rho2 = spectral_density(pot2, lam_grid, settings)
    density_gap = float(np.max(np.abs(rho1 - rho2) / rho1))
    x = np.linspace(0.0, c, Q_SAMPLES + 1)[1:]
    q_gap = float(np.max(np.abs(pot1(x) - pot2(x))))
    report = UniquenessReport(
        c=c,
        delta_gap=delta_gap,
        eigen_gap=eigen_gap,
        norming_gap=norming_gap,
        density_gap=density_gap,
        q_gap=q_gap,
        tolerance=tolerance,
    )
    if not report.consistent:
        logger.warning("spectral data and potentials disagree on whether the problems differ")
    return report


def m_difference_decay(
    pot1: PotentialSpec,
    pot2: PotentialSpec,
    ys: Sequence[float] | np.ndarray,
    settings: Optional[Settings] = None,
    route: MRoute | str = MRoute.TRUNCATED,
    cut: Optional[float] = None,
) -> float:
    """Exponential rate of |m_1(iy) - m_2(iy)| in Im k.

    Fits log|m_1 - m_2| = a - s Im k - p log|k| over z = iy; for potentials
    agreeing on (0, c) the rate s is close to 2c. The truncated route reads
    m = -theta(z, X) / phi(z, X) at a common cut X, by default the tail
    radius of both potentials (b on an interval).

    Raises:
        ValidationError: With fewer than four samples or a nonpositive y
    """
    settings = settings or DEFAULT_SETTINGS
    ys = np.asarray(ys, dtype=float)
    if ys.size < 4 or np.any(ys <= 0):
        raise ValidationError("the decay fit needs at least four positive y")
    route = MRoute(route)
    if route is MRoute.TRUNCATED and cut is None:
        if pot1.b is not None and pot2.b is not None:
            cut = min(pot1.b, pot2.b)
        else:
            cut = max(tail_radius(pot1, settings), tail_radius(pot2, settings))
    c = cut if cut is not None else MATCHING_RADIUS
    zs = 1j * ys

    def gap(z: complex) -> float:
        m1 = weyl_m(pot1, z, route, c=c, settings=settings).m
        m2 = weyl_m(pot2, z, route, c=c, settings=settings).m
        return abs(m1 - m2)

    gaps = np.array(sweep(gap, zs, settings))
    k = np.sqrt(zs)
    design = np.column_stack([np.ones_like(ys), -k.imag, -np.log(np.abs(k))])
    (_, rate, power), *_ = np.linalg.lstsq(design, np.log(gaps), rcond=None)
    logger.debug("m-difference decay via %s: rate %.4f, power %.4f", route.value, rate, power)
    return float(rate)
