"""Bound states as zeros of the Jost function on the positive imaginary axis.

f(i kappa) exp(i l pi / 2) is real for kappa > 0; its sign changes on a
logarithmic kappa grid are refined with Brent's method and checked against
the eigenvalues found by Prüfer shooting.
"""

import logging
import math
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.optimize import brentq

from besselspec.models.potential import PotentialSpec
from besselspec.scattering.jost import jost_function
from besselspec.spectral.eigen import eigenvalues
from besselspec.utils.config import DEFAULT_SETTINGS, Settings, sweep
from besselspec.utils.constants import BOUND_STATE_AGREEMENT, BOUND_STATE_SCAN_NODES
from besselspec.utils.exceptions import BoundStateMismatchError, ConvergenceError, ValidationError

logger = logging.getLogger(__name__)


class BoundStates(BaseModel):
    """Bound-state momenta with the shooting cross-check.

    Attributes:
        kappas: Momenta kappa_n > 0, deepest state first
        N: Number of bound states
        eigenvalues: Shooting eigenvalues -kappa_n^2 in increasing order
        bargmann_bound: int x |q~| dx / (2l + 1)
    """

    kappas: np.ndarray
    N: int
    eigenvalues: np.ndarray
    bargmann_bound: float

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @property
    def within_bargmann(self) -> bool:
        return self.N <= math.ceil(self.bargmann_bound) if math.isfinite(self.bargmann_bound) else True


def _jost_on_axis(pot: PotentialSpec, settings: Settings):
    phase = complex(np.exp(0.5j * math.pi * pot.l))

    def value(kappa: float) -> float:
        return (phase * jost_function(pot, 1j * kappa, with_g=False, settings=settings).f).real

    return value


def _scan_sample(value, kappa: float) -> float:
    """One scan node; a failed integration leaves a gap in the scan."""
    try:
        return value(kappa)
    except ConvergenceError as e:
        logger.warning("skipping scan node kappa = %.3e: %s", kappa, e)
        return math.nan


def jost_zeros(
    pot: PotentialSpec,
    kappa_max: Optional[float] = None,
    nodes: int = BOUND_STATE_SCAN_NODES,
    settings: Optional[Settings] = None,
) -> np.ndarray:
    """Zeros kappa of f(i kappa) on [k_min, kappa_max], largest first.

    Raises:
        ValidationError: If no scan range can be derived from the potential
    """
    settings = settings or DEFAULT_SETTINGS
    if kappa_max is None:
        floor = pot.spectral_floor
        if not math.isfinite(floor):
            raise ValidationError("potential has no finite lower bound; pass kappa_max")
        kappa_max = math.sqrt(max(-floor, 0.0)) + 1.0
    grid = np.geomspace(settings.k_min, kappa_max, nodes)
    value = _jost_on_axis(pot, settings)
    samples = np.array(sweep(lambda kappa: _scan_sample(value, kappa), grid, settings))
    zeros = []
    for j in np.flatnonzero(np.sign(samples[:-1]) * np.sign(samples[1:]) < 0):
        zeros.append(brentq(value, grid[j], grid[j + 1], xtol=1e-15, rtol=1e-14))
    zeros.extend(grid[samples == 0])
    return np.sort(np.asarray(zeros, dtype=float))[::-1]


def bound_states(pot: PotentialSpec, settings: Optional[Settings] = None) -> BoundStates:
    """Bound states from Jost-function zeros, validated by shooting.

    Raises:
        BoundStateMismatchError: If the two routes disagree in number or
            location beyond the agreement tolerance
    """
    settings = settings or DEFAULT_SETTINGS
    kappas = jost_zeros(pot, settings=settings)
    shooting = eigenvalues(pot, settings=settings)
    if shooting.size != kappas.size:
        raise BoundStateMismatchError(
            f"Jost zeros give {kappas.size} bound states, shooting gives {shooting.size}"
        )
    from_zeros = -kappas ** 2
    if kappas.size:
        gap = np.max(np.abs(from_zeros - shooting) / np.abs(shooting))
        if gap > BOUND_STATE_AGREEMENT:
            raise BoundStateMismatchError(f"bound-state energies disagree by {gap:.2e} relative")
    bound = pot.bargmann_bound()
    result = BoundStates(kappas=kappas, N=int(kappas.size), eigenvalues=shooting, bargmann_bound=bound)
    if not result.within_bargmann:
        logger.warning("%d bound states exceed the Bargmann bound %.3f", result.N, bound)
    logger.debug("bound states: kappas=%s", kappas)
    return result
