"""Unperturbed Bessel operator: solutions, model m-function and Green kernel.

The free operator is -d^2/dx^2 + l(l+1)/x^2 on (0, inf). Its regular
solution phi_l ~ x^(l+1), non-principal solution theta_l ~ x^(-l)/(2l+1)
(-sqrt(x) log x at l = -1/2) and Weyl solution psi_l = theta_l + m_l phi_l
are given in terms of Bessel functions of order nu = l + 1/2.

All functions accept scalar or array ``x`` and return arrays of the same
shape.
"""

import math
from typing import NamedTuple, Union

import numpy as np
from scipy import special

from besselspec.models.base import AngularMomentum, ComplexEnergy
from besselspec.specfun.functions import coupling_constant
from besselspec.utils.constants import EULER_GAMMA
from besselspec.utils.exceptions import BranchError, ValidationError

LType = Union[AngularMomentum, float]
ZType = Union[ComplexEnergy, complex, float]


class FreeSolutions(NamedTuple):
    """Free solutions and their x-derivatives."""

    phi: np.ndarray
    dphi: np.ndarray
    theta: np.ndarray
    dtheta: np.ndarray
    psi: np.ndarray
    dpsi: np.ndarray


def _angular(l: LType) -> AngularMomentum:
    return l if isinstance(l, AngularMomentum) else AngularMomentum(l=l)


def momentum(z: ZType) -> ComplexEnergy:
    """Spectral parameter with k = sqrt(z) on the Im k >= 0 branch."""
    return z if isinstance(z, ComplexEnergy) else ComplexEnergy.from_z(complex(z))


def _positions(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValidationError("free solutions need x > 0")
    return x


def free_phi(l: LType, z: ZType, x) -> tuple[np.ndarray, np.ndarray]:
    """Regular solution phi_l(z, x) and its derivative."""
    ang, energy, x = _angular(l), momentum(z), _positions(x)
    lv, nu = ang.l, ang.nu
    if energy.z == 0:
        return (x ** (lv + 1)).astype(complex), ((lv + 1) * x ** lv).astype(complex)
    k = energy.k
    pref = np.sqrt(np.pi * x / 2) / coupling_constant(ang) * k ** (-nu)
    w = k * x
    value = pref * special.jv(nu, w)
    deriv = value / (2 * x) + pref * k * special.jvp(nu, w)
    return value, deriv


def free_theta(l: LType, z: ZType, x) -> tuple[np.ndarray, np.ndarray]:
    """Non-principal solution theta_l(z, x) and its derivative.

    theta_l is entire in z. For integer nu the log(z) correction uses the
    principal logarithm, continuous from above on the negative axis.
    """
    ang, energy, x = _angular(l), momentum(z), _positions(x)
    lv, nu = ang.l, ang.nu
    C = coupling_constant(ang)
    if energy.z == 0:
        if ang.critical:
            log_term = np.log(x) + EULER_GAMMA - math.log(2.0)
            value = -np.sqrt(x) * log_term
            deriv = -(log_term / 2 + 1) / np.sqrt(x)
            return value.astype(complex), deriv.astype(complex)
        value = x ** (-lv) / (2 * lv + 1)
        deriv = -lv * x ** (-lv - 1) / (2 * lv + 1)
        return value.astype(complex), deriv.astype(complex)
    if ang.half_integer:
        n = int(round(nu))
        s = complex(np.sqrt(energy.z))
        log_z = complex(np.log(energy.z))
        w = s * x
        pref = -C * s ** n * np.sqrt(np.pi * x / 2)
        bracket = special.yv(n, w) - log_z / np.pi * special.jv(n, w)
        dbracket = s * (special.yvp(n, w) - log_z / np.pi * special.jvp(n, w))
        value = pref * bracket
        deriv = value / (2 * x) + pref * dbracket
        return value, deriv
    k = energy.k
    pref = C * k ** nu * np.sqrt(np.pi * x / 2) / math.sin(nu * math.pi)
    w = k * x
    value = pref * special.jv(-nu, w)
    deriv = value / (2 * x) + pref * k * special.jvp(-nu, w)
    return value, deriv


def free_psi(l: LType, z: ZType, x) -> tuple[np.ndarray, np.ndarray]:
    """Weyl solution psi_l = i C_l k^nu sqrt(pi x / 2) H1_nu(k x).

    Raises:
        BranchError: At z = 0, and for l = -1/2 on [0, inf)
    """
    ang, energy, x = _angular(l), momentum(z), _positions(x)
    if energy.z == 0:
        raise BranchError("psi_l is not defined at z = 0")
    if ang.critical and energy.z.imag == 0 and energy.z.real > 0:
        raise BranchError("psi_l at l = -1/2 needs z off [0, inf)")
    nu, k = ang.nu, energy.k
    pref = 1j * coupling_constant(ang) * k ** nu * np.sqrt(np.pi * x / 2)
    w = k * x
    value = pref * special.hankel1(nu, w)
    deriv = value / (2 * x) + pref * k * special.h1vp(nu, w)
    return value, deriv


def free_solutions(l: LType, z: ZType, x, include_psi: bool = True) -> FreeSolutions:
    """phi_l, theta_l and psi_l with derivatives at ``x``.

    Args:
        l: Angular momentum
        z: Spectral parameter
        x: Positive positions
        include_psi: Skip the Weyl solution (filled with NaN) when False

    Raises:
        BranchError: If psi is requested where it is undefined
    """
    phi, dphi = free_phi(l, z, x)
    theta, dtheta = free_theta(l, z, x)
    if include_psi:
        psi, dpsi = free_psi(l, z, x)
    else:
        psi = np.full_like(phi, np.nan)
        dpsi = np.full_like(phi, np.nan)
    return FreeSolutions(phi, dphi, theta, dtheta, psi, dpsi)


def model_m(l: LType, z: complex) -> complex:
    """Singular m-function of the free operator.

    m_l(z) = -C_l^2 / sin(nu pi) (-z)^nu, or -C_l^2 / pi z^nu log(-z) for
    integer nu, with the principal logarithm of -z.

    Raises:
        BranchError: For z on [0, inf)
    """
    ang = _angular(l)
    z = complex(z)
    if z.imag == 0 and z.real >= 0:
        raise BranchError(f"m_l has its cut on [0, inf), got z = {z}")
    C2 = coupling_constant(ang) ** 2
    log_mz = complex(np.log(-z))
    if ang.half_integer:
        n = int(round(ang.nu))
        return -C2 / math.pi * z ** n * log_mz
    return -C2 / math.sin(ang.nu * math.pi) * complex(np.exp(ang.nu * log_mz))


def model_rho(l: LType, lam: float) -> float:
    """rho_l(lambda) = C_l^2 / (pi (l + 3/2)) lambda^(l + 3/2) on [0, inf)."""
    ang = _angular(l)
    if lam <= 0:
        return 0.0
    return coupling_constant(ang) ** 2 / (math.pi * (ang.l + 1.5)) * lam ** (ang.l + 1.5)


def model_density(l: LType, lam) -> np.ndarray:
    """d rho_l / d lambda = C_l^2 lambda^(l + 1/2) / pi for lambda > 0."""
    ang = _angular(l)
    lam = np.asarray(lam, dtype=float)
    positive = np.clip(lam, 0.0, None)
    return np.where(lam > 0, coupling_constant(ang) ** 2 * positive ** ang.nu / math.pi, 0.0)


def green_kernel(l: LType, z: ZType, x, y, derivative: bool = False) -> np.ndarray:
    """G_l(z, x, y) = phi_l(x) theta_l(y) - phi_l(y) theta_l(x), y <= x.

    Args:
        derivative: Return dG/dx instead

    Raises:
        ValidationError: Unless 0 < y <= x
    """
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    if np.any(y <= 0) or np.any(y > x):
        raise ValidationError("Green kernel needs 0 < y <= x")
    phi_x, dphi_x = free_phi(l, z, x)
    theta_x, dtheta_x = free_theta(l, z, x)
    phi_y, _ = free_phi(l, z, y)
    theta_y, _ = free_theta(l, z, y)
    if derivative:
        return dphi_x * theta_y - phi_y * dtheta_x
    return phi_x * theta_y - phi_y * theta_x


def kernel_bound(l: LType, k: complex, x, y, derivative: bool = False) -> np.ndarray:
    """Right-hand side of the Green-kernel estimates without the constant.

    For l > -1/2 this is (x/(1+|k|x))^(l+1) ((1+|k|y)/y)^l e^(|Im k|(x-y)),
    with exponent l on the first factor for the derivative. At l = -1/2 the
    square-root form carries the extra factor 1 - log(|k|y/(1+|k|y)).
    """
    ang = _angular(l)
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    a = abs(complex(k))
    growth = np.exp(abs(complex(k).imag) * (x - y))
    if ang.critical:
        if a == 0:
            return np.full(x.shape, np.inf)
        log_factor = 1 - np.log(a * y / (1 + a * y))
        if derivative:
            return np.sqrt((y + a * x * y) / (x + a * x * y)) * growth * log_factor
        return np.sqrt(x / (1 + a * x) * y / (1 + a * y)) * growth * log_factor
    power = ang.l if derivative else ang.l + 1
    return (x / (1 + a * x)) ** power * ((1 + a * y) / y) ** ang.l * growth


def free_jost(l: LType, k: complex, x) -> tuple[np.ndarray, np.ndarray]:
    """Free Jost solution f_l(k, x) = i sqrt(pi x k / 2) H1_nu(k x) ~ e^(i(kx - l pi/2)).

    For Re k < 0 the solution is extended by f_l(k, x) = conj(f_l(-conj(k), x)).

    Raises:
        ValidationError: At k = 0 or Im k < 0
    """
    k = complex(k)
    if k == 0:
        raise ValidationError("the Jost solution is singular at k = 0")
    if k.imag < 0:
        raise ValidationError("the Jost solution needs Im k >= 0")
    if k.real < 0:
        value, deriv = free_jost(l, -k.conjugate(), x)
        return np.conj(value), np.conj(deriv)
    ang, x = _angular(l), _positions(x)
    nu = ang.nu
    w = k * x
    pref = 1j * np.sqrt(np.pi * k / 2)
    h, hp = special.hankel1(nu, w), special.h1vp(nu, w)
    value = pref * np.sqrt(x) * h
    deriv = pref * (h / (2 * np.sqrt(x)) + np.sqrt(x) * k * hp)
    return value, deriv


def free_jost_function(l: LType, k: complex) -> complex:
    """Free Jost function k^(-l) / C_l with the same conjugate extension."""
    ang = _angular(l)
    k = complex(k)
    if k.real < 0:
        return free_jost_function(ang, -k.conjugate()).conjugate()
    return k ** (-ang.l) / coupling_constant(ang)


def free_decaying_log_derivative(l: LType, kappa: float, x: float) -> float:
    """Log-derivative of sqrt(x) K_nu(kappa x), the free solution decaying at infinity."""
    ang = _angular(l)
    w = kappa * x
    ratio = -(special.kve(ang.nu - 1, w) + special.kve(ang.nu + 1, w)) / (2 * special.kve(ang.nu, w))
    return float(1 / (2 * x) + kappa * ratio)
