"""Special functions used across the package.

Thin, validated wrappers around :mod:`scipy.special` with the domain checks
and conventions the solvers rely on.
"""

import math
from typing import NamedTuple, Union

import numpy as np
from scipy import special

from besselspec.models.base import AngularMomentum
from besselspec.utils.constants import SQRT_PI
from besselspec.utils.exceptions import DomainError

Number = Union[float, complex]


class BesselTrio(NamedTuple):
    """J, Y and H1 of one order at one argument."""

    J: complex
    Y: complex
    H1: complex


def gamma_fn(x: Number) -> Number:
    """Euler Gamma function.

    Args:
        x: Real or complex argument

    Returns:
        Gamma(x), real for real input

    Raises:
        DomainError: At the poles x = 0, -1, -2, ...
    """
    z = complex(x)
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise DomainError(f"Gamma has a pole at {z.real:g}")
    if isinstance(x, complex):
        return complex(special.gamma(z))
    return float(special.gamma(float(x)))


def bessel_trio(nu: float, w: Number) -> BesselTrio:
    """Bessel, Neumann and Hankel functions of the first kind.

    Args:
        nu: Nonnegative order
        w: Nonzero argument

    Raises:
        DomainError: If nu < 0 or w = 0
    """
    if nu < 0:
        raise DomainError(f"order must be nonnegative, got {nu}")
    w = complex(w)
    if w == 0:
        raise DomainError("Y and H1 are singular at w = 0")
    J = complex(special.jv(nu, w))
    Y = complex(special.yv(nu, w))
    return BesselTrio(J=J, Y=Y, H1=complex(special.hankel1(nu, w)))


def lambert_w_m1(x: float) -> float:
    """Lower real branch W_{-1} of the Lambert W function.

    Args:
        x: Argument in [-1/e, 0)

    Returns:
        w <= -1 with w * exp(w) = x

    Raises:
        DomainError: Outside [-1/e, 0)
    """
    branch_point = -math.exp(-1.0)
    if not branch_point - 1e-16 <= x < 0:
        raise DomainError(f"W_-1 is real only on [-1/e, 0), got {x}")
    if abs(x - branch_point) < 1e-16:
        return -1.0
    w = float(special.lambertw(x, k=-1).real)
    if w < -1.0 - 1e-6:
        # one Newton step on w e^w - x polishes the residual
        ew = math.exp(w)
        w -= (w * ew - x) / (ew * (w + 1))
    return w


def coupling_constant(l: Union[AngularMomentum, float]) -> float:
    """C_l = sqrt(pi) / (Gamma(l + 3/2) 2^(l+1))."""
    lv = l.l if isinstance(l, AngularMomentum) else float(l)
    return SQRT_PI / (special.gamma(lv + 1.5) * 2.0 ** (lv + 1))


def besselj_series(nu: float, w: Number, terms: int = 40) -> complex:
    """Truncated power series of J_nu, an independent check of the library values."""
    w = complex(w)
    half = w / 2
    total = 0j
    for m in range(terms):
        total += (-1) ** m * half ** (2 * m) / (math.factorial(m) * special.gamma(m + nu + 1))
    return complex(total * half ** nu)


def riccati_pair(l: float, k: float, x: np.ndarray) -> tuple[np.ndarray, ...]:
    """Riccati-Bessel sine and cosine waves and their x-derivatives.

    s_l(kx) = sqrt(pi k x / 2) J_nu(kx) ~ sin(kx - l pi/2) and
    c_l(kx) = -sqrt(pi k x / 2) Y_nu(kx) ~ cos(kx - l pi/2).
    """
    nu = l + 0.5
    x = np.asarray(x, dtype=float)
    w = k * x
    amp = np.sqrt(np.pi * w / 2)
    damp = np.sqrt(np.pi * k / (8 * x))
    J, Jp = special.jv(nu, w), special.jvp(nu, w)
    Y, Yp = special.yv(nu, w), special.yvp(nu, w)
    s = amp * J
    c = -amp * Y
    s_prime = damp * J + amp * k * Jp
    c_prime = -(damp * Y + amp * k * Yp)
    return s, s_prime, c, c_prime
