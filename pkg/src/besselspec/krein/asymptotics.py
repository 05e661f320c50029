"""One-term asymptotics of string m-functions from the mass distribution.

If the mass function R has limit order alpha at zero, R(s x) / R(x) -> s^alpha,
the string m-function satisfies

    M(mu rho) = K_nu (-mu)^(-nu) f(rho) (1 + o(1)),    rho -> inf,

with nu = 1 / (1 + alpha) and f the inverse of F(x) = 1 / (x R(x)). The
closed forms below describe the string of the free operator at l = -1/2,
which has limit order infinity.
"""

import logging
import math
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator

from besselspec.models.base import LimitOrderData
from besselspec.specfun.functions import coupling_constant, gamma_fn, lambert_w_m1
from besselspec.utils.constants import (
    LIMIT_ORDER_DIVERGENT,
    LIMIT_ORDER_SCALES,
    LIMIT_ORDER_SPREAD,
    LIMIT_ORDER_WINDOW,
)
from besselspec.utils.exceptions import DomainError, InconclusiveError, ValidationError

logger = logging.getLogger(__name__)


def _log_log_interpolant(xi: np.ndarray, R: np.ndarray) -> PchipInterpolator:
    return PchipInterpolator(np.log(xi), np.log(R))


def limit_order(
    xi: Sequence[float] | np.ndarray,
    R: Sequence[float] | np.ndarray,
    window: tuple[float, float] = LIMIT_ORDER_WINDOW,
    scales: Sequence[float] = LIMIT_ORDER_SCALES,
) -> LimitOrderData:
    """Estimate the limit order of a tabulated mass function.

    For each scale s the ratio log(R(s x) / R(x)) / log(s) is read off a
    monotone log-log interpolant at x = window[0]. Estimates beyond the
    divergence threshold for every s give alpha = inf.

    Args:
        xi: Increasing abscissae
        R: Positive, increasing mass function at ``xi``
        window: Smallest and largest x where the ratios are read
        scales: Scale factors s > 1

    Returns:
        LimitOrderData carrying the table and F = 1 / (xi R)

    Raises:
        ValidationError: If the table is not positive and increasing or
            does not cover the scaled window
        InconclusiveError: If the estimates spread by more than 10%
    """
    xi = np.asarray(xi, dtype=float)
    R = np.asarray(R, dtype=float)
    if xi.shape != R.shape or xi.size < 4:
        raise ValidationError("limit order needs matching xi and R tables with at least 4 rows")
    if np.any(xi <= 0) or np.any(R <= 0):
        raise ValidationError("limit order needs positive xi and R")
    if np.any(np.diff(xi) <= 0) or np.any(np.diff(R) <= 0):
        raise ValidationError("xi and R must be strictly increasing")
    scales = np.asarray(scales, dtype=float)
    if np.any(scales <= 1):
        raise ValidationError("scale factors must exceed 1")
    x0, x1 = window
    if x0 < xi[0] or x1 * scales.max() > xi[-1]:
        raise ValidationError(
            f"table [{xi[0]:g}, {xi[-1]:g}] does not cover the window {window} at scale {scales.max():g}"
        )
    log_R = _log_log_interpolant(xi, R)

    def estimates(x: float) -> np.ndarray:
        base = log_R(math.log(x))
        return np.array([(log_R(math.log(s * x)) - base) / math.log(s) for s in scales])

    fine = estimates(x0)
    coarse = estimates(x1)
    logger.debug("limit order estimates %s at x=%g, %s at x=%g", fine, x0, coarse, x1)
    if np.all(fine > LIMIT_ORDER_DIVERGENT):
        alpha = math.inf
        spread = 0.0
    else:
        mean = float(np.mean(fine))
        spread = float((fine.max() - fine.min()) / max(abs(mean), 1e-300))
        if spread > LIMIT_ORDER_SPREAD:
            raise InconclusiveError(
                f"limit order estimates {np.round(fine, 4).tolist()} spread by {spread:.1%}"
            )
        weights = np.log(scales)
        alpha = max(float(np.sum(fine * weights ** 2) / np.sum(weights ** 2)), 0.0)
    return LimitOrderData(alpha=alpha, spread=spread, xi=xi, R=R, F=1.0 / (xi * R))


def bennewitz_constant(nu: float) -> float:
    """K_nu = nu^(1-nu) Gamma(nu) / ((1-nu)^nu Gamma(1-nu)), with K_0 = K_1 = 1.

    Raises:
        DomainError: Outside [0, 1]
    """
    if not 0.0 <= nu <= 1.0:
        raise DomainError(f"K_nu is defined for nu in [0, 1], got {nu}")
    if nu in (0.0, 1.0):
        return 1.0
    return nu ** (1 - nu) * gamma_fn(nu) / ((1 - nu) ** nu * gamma_fn(1 - nu))


def limit_order_constant(l: float) -> float:
    """A_alpha = (1 - 2l)(1 + 2l)^((2l+3)/(2l+1)) of the free string, R ~ xi^alpha / A_alpha.

    Raises:
        DomainError: Unless -1/2 < l < 1/2
    """
    if not -0.5 < l < 0.5:
        raise DomainError(f"A_alpha needs -1/2 < l < 1/2, got {l}")
    return (1 - 2 * l) * (1 + 2 * l) ** ((2 * l + 3) / (2 * l + 1))


def free_limit_order(l: float) -> float:
    """alpha = (1 - 2l)/(1 + 2l) of the free string, infinite at l = -1/2."""
    if abs(l + 0.5) < 1e-12:
        return math.inf
    if not -0.5 < l < 0.5:
        raise DomainError(f"the free string is defined for -1/2 <= l < 1/2, got {l}")
    return (1 - 2 * l) / (1 + 2 * l)


def string_constant_identity(l: float) -> tuple[float, float, float]:
    """Three forms of the constant in the free m-function asymptotics.

    Returns:
        K_nu A_alpha^nu, 2^(2l) (2l+1)^2 Gamma(1/2+l) / Gamma(1/2-l) and
        sin(pi nu) / C_l^2 with nu = l + 1/2; all three coincide
    """
    nu = l + 0.5
    lhs = bennewitz_constant(nu) * limit_order_constant(l) ** nu
    middle = 2 ** (2 * l) * (2 * l + 1) ** 2 * gamma_fn(0.5 + l) / gamma_fn(0.5 - l)
    rhs = math.sin(math.pi * nu) / coupling_constant(l) ** 2
    return lhs, middle, rhs


def bennewitz_asymptote(
    lod: LimitOrderData,
    mu: complex,
    rho: Sequence[float] | np.ndarray,
    f: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> np.ndarray:
    """Predicted M(mu rho) = K_nu (-mu)^(-nu) f(rho).

    Args:
        lod: Limit order of the string mass function
        mu: Direction on the unit circle, off the real axis
        rho: Magnitudes
        f: Inverse of F to use instead of the tabulated one, e.g. the
            closed-form inverse of an asymptotically equal mass function

    Raises:
        ValidationError: If mu is real or not of unit modulus
    """
    mu = complex(mu)
    if mu.imag == 0 or abs(abs(mu) - 1) > 1e-12:
        raise ValidationError(f"mu must lie on the unit circle off the real axis, got {mu}")
    rho = np.asarray(rho, dtype=float)
    nu = lod.nu
    inverse = f(rho) if f is not None else lod.f_inv(rho)
    phase = np.exp(-nu * np.log(-mu))
    return bennewitz_constant(nu) * phase * np.asarray(inverse)


def invert_F(xi: np.ndarray, R: np.ndarray, rho: Sequence[float] | np.ndarray) -> np.ndarray:
    """Tabulated inverse f of F(x) = 1 / (x R(x))."""
    xi = np.asarray(xi, dtype=float)
    F = 1.0 / (xi * np.asarray(R, dtype=float))
    if np.any(np.diff(F) >= 0):
        raise ValidationError("F = 1/(xi R) must decrease on the table")
    log_rho = np.log(np.asarray(rho, dtype=float))
    log_F, log_x = np.log(F[::-1]), np.log(xi[::-1])
    if np.any(log_rho < log_F[0]) or np.any(log_rho > log_F[-1]):
        raise ValidationError("rho outside the tabulated range of F")
    return np.exp(PchipInterpolator(log_F, log_x)(log_rho))


def inverse_ratio_check(
    xi: np.ndarray,
    R: np.ndarray,
    R0: np.ndarray,
    rho: Sequence[float] | np.ndarray,
) -> np.ndarray:
    """f(rho) / f0(rho) for two mass functions with R / R0 -> 1 at zero.

    The ratio tends to one as rho grows.
    """
    return invert_F(xi, R, rho) / invert_F(xi, R0, rho)


# closed forms for l = -1/2


def log_endpoint_xi(x):
    """G_0(x) = -1 / log(x), the free string coordinate at l = -1/2."""
    x = np.asarray(x, dtype=float)
    return -1.0 / np.log(x)


def log_endpoint_mass(x):
    """P_0(x) = int_0^x y log(y)^2 dy = x^2/2 (log^2 x - log x + 1/2)."""
    x = np.asarray(x, dtype=float)
    log_x = np.log(x)
    return x ** 2 / 2 * (log_x ** 2 - log_x + 0.5)


def log_endpoint_R0(xi):
    """R_0 = P_0(G_0^-1(xi)) = (2 + 2 xi + xi^2) / (4 xi^2 e^(2/xi))."""
    xi = np.asarray(xi, dtype=float)
    return (2 + 2 * xi + xi ** 2) / (4 * xi ** 2) * np.exp(-2 / xi)


def log_endpoint_R0_tilde(xi):
    """Leading term 1 / (2 xi^2 e^(2/xi)) of R_0."""
    xi = np.asarray(xi, dtype=float)
    return np.exp(-2 / xi) / (2 * xi ** 2)


def log_endpoint_inverse(rho: float) -> float:
    """Inverse of 1 / (xi R0~(xi)) = 2 xi e^(2/xi): -2 / W_-1(-4 / rho).

    Raises:
        DomainError: For rho < 4e, where the inverse does not exist
    """
    if rho < 4 * math.e:
        raise DomainError(f"2 xi e^(2/xi) >= 4e, got rho = {rho}")
    return -2.0 / lambert_w_m1(-4.0 / rho)


def lambert_expansion_residual(x: float) -> float:
    """Relative error of -W_-1(-1/x) ~ log(x) + log(log(x)).

    Raises:
        DomainError: For x <= e
    """
    if x <= math.e:
        raise DomainError(f"expansion needs x > e, got {x}")
    exact = -lambert_w_m1(-1.0 / x)
    approx = math.log(x) + math.log(math.log(x))
    return abs(approx - exact) / exact
