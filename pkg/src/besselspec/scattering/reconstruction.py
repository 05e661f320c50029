"""|f(k)| from the phase shift and the bound states by a dispersion integral.

    log|f(k)| = log(k^-l / C_l) + sum_n log(1 + kappa_n^2 / k^2)
                - (1/pi) PV int_{-inf}^{inf} delta(t) / (t - k) dt

With delta odd the integral folds onto (0, inf) as PV int 2 t delta(t) / (t^2 - k^2).
The principal value on (0, K) uses the Cauchy-weight rule of QUADPACK;
beyond K the phase is continued as delta(K) K / t.
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator

from besselspec.models.potential import PotentialSpec
from besselspec.scattering.bound_states import bound_states
from besselspec.scattering.jost import jost_function
from besselspec.scattering.phase import phase_shift
from besselspec.specfun.functions import coupling_constant
from besselspec.utils.config import DEFAULT_SETTINGS, Settings, sweep
from besselspec.utils.constants import CRITICAL_K_EXCLUSION, PV_TAIL_FACTOR
from besselspec.utils.exceptions import QuadratureError, ValidationError

logger = logging.getLogger(__name__)


class Reconstruction(BaseModel):
    """Reconstructed Jost modulus against a reference.

    Attributes:
        k: Evaluation momenta
        modulus: Reconstructed |f(k)|
        reference: Directly computed |f(k)|, if supplied
        max_rel_error: Largest relative deviation from the reference
    """

    k: np.ndarray
    modulus: np.ndarray
    reference: Optional[np.ndarray] = None
    max_rel_error: Optional[float] = None

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


def _principal_value(delta: PchipInterpolator, k: float, top: float) -> float:
    def weight_free(t: float) -> float:
        return 2 * t * float(delta(t)) / (t + k)

    value, error = quad(weight_free, 0.0, top, weight="cauchy", wvar=k, limit=400)
    if not math.isfinite(value):
        raise QuadratureError(f"principal value at k = {k:g} did not converge")
    logger.debug("PV at k=%g: %.6e (error estimate %.1e)", k, value, error)
    return value


def reconstruct_jost(
    k_table: Sequence[float] | np.ndarray,
    delta: Sequence[float] | np.ndarray,
    kappas: Sequence[float] | np.ndarray,
    l: float,
    k_eval: Sequence[float] | np.ndarray,
    include_bound_states: bool = True,
) -> np.ndarray:
    """|f(k)| at k_eval from a tabulated phase shift.

    Args:
        k_table: Increasing positive momenta of the phase table
        delta: Continuous phase shift at ``k_table``
        kappas: Bound-state momenta
        l: Angular momentum
        k_eval: Positive momenta inside the table range
        include_bound_states: Include the bound-state factors; switch off to
            see the reconstruction fail when bound states exist

    Raises:
        ValidationError: If the tables do not match or are not increasing
        QuadratureError: If an evaluation point reaches the top of the table
    """
    k_table = np.asarray(k_table, dtype=float)
    delta = np.asarray(delta, dtype=float)
    if k_table.shape != delta.shape or k_table.size < 4:
        raise ValidationError("phase table needs matching k and delta columns with at least 4 rows")
    if np.any(k_table <= 0) or np.any(np.diff(k_table) <= 0):
        raise ValidationError("phase table momenta must be positive and increasing")
    top = float(k_table[-1])
    interpolant = PchipInterpolator(k_table, delta, extrapolate=True)
    tail = delta[-1] * top
    kappas = np.asarray(kappas, dtype=float)
    out = []
    for k in np.atleast_1d(np.asarray(k_eval, dtype=float)):
        if k <= 0 or k >= top:
            raise QuadratureError(f"k = {k:g} must lie inside (0, {top:g})")
        if top < PV_TAIL_FACTOR * k:
            logger.warning("phase table ends at %g, below %g times k = %g", top, PV_TAIL_FACTOR, k)
        integral = _principal_value(interpolant, k, top)
        integral += tail / k * math.log((top + k) / (top - k))
        log_f = math.log(k ** (-l) / coupling_constant(l)) - integral / math.pi
        if include_bound_states:
            log_f += float(np.sum(np.log1p(kappas ** 2 / k ** 2)))
        out.append(math.exp(log_f))
    return np.array(out)


def reconstruction_report(
    k_table: np.ndarray,
    delta: np.ndarray,
    kappas: np.ndarray,
    l: float,
    k_eval: np.ndarray,
    reference: np.ndarray,
    include_bound_states: bool = True,
) -> Reconstruction:
    """Reconstruct |f| and compare it with a directly computed modulus."""
    modulus = reconstruct_jost(k_table, delta, kappas, l, k_eval, include_bound_states)
    reference = np.asarray(reference, dtype=float)
    error = float(np.max(np.abs(modulus - reference) / reference))
    return Reconstruction(
        k=np.asarray(k_eval, dtype=float), modulus=modulus, reference=reference, max_rel_error=error
    )


def roundtrip_report(
    pot: PotentialSpec,
    k_eval: Sequence[float] | np.ndarray,
    table_top: float = 400.0,
    table_nodes: int = 800,
    include_bound_states: bool = True,
    settings: Optional[Settings] = None,
) -> Reconstruction:
    """Tabulate delta for ``pot``, rebuild |f| at k_eval and compare with |f| itself.

    The phase table runs geometrically from 0.01 (0.05 at l = -1/2) to
    ``table_top``; bound-state momenta come from the dual-route scan.
    """
    settings = settings or DEFAULT_SETTINGS
    bottom = CRITICAL_K_EXCLUSION if pot.angular.critical else 1e-2
    k_table = np.geomspace(bottom, table_top, table_nodes)
    delta = phase_shift(pot, k_table, settings)
    kappas = bound_states(pot, settings).kappas
    k_eval = np.atleast_1d(np.asarray(k_eval, dtype=float))
    direct = np.abs(sweep(lambda k: jost_function(pot, k, with_g=False, settings=settings).f, k_eval, settings))
    return reconstruction_report(k_table, delta, kappas, pot.l, k_eval, direct, include_bound_states)
