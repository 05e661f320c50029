"""Discrete spectrum by Prüfer-angle shooting, and norming constants.

With y = R sin(t), y' = S R cos(t) the angle obeys

    t' = S cos(t)^2 + ((lambda - V(x)) / S) sin(t)^2,

V the full effective potential and S = sqrt(max(|lambda|, 1)). The angle
is started from the regular solution close to zero, so the condition at
the singular endpoint is built in, and it increases with lambda. The n-th
eigenvalue is the lambda where the angle at the right end reaches the
boundary angle plus (n - 1) pi.
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy import special
from scipy.integrate import simpson
from scipy.optimize import brentq

from besselspec.models.potential import PotentialSpec
from besselspec.solutions.jost import jost_values, tail_radius, weyl_log_derivative
from besselspec.solutions.ode import integrate, regular_start, regular_values, scaled_rhs, start_radius, unscale
from besselspec.specfun.free import free_decaying_log_derivative
from besselspec.utils.config import DEFAULT_SETTINGS, Settings, sweep
from besselspec.utils.constants import EIGEN_RTOL, EIGEN_XTOL, WKB_DAMPING
from besselspec.utils.exceptions import TruncationError, ValidationError, WindowError

logger = logging.getLogger(__name__)


def _scale(lam: float) -> float:
    return math.sqrt(max(abs(lam), 1.0))


def _end_point(pot: PotentialSpec, settings: Settings) -> float:
    return pot.b if pot.b is not None else tail_radius(pot, settings)


def _boundary_angle(pot: PotentialSpec, lam: float, beta: float, end: float, settings: Settings) -> float:
    """Prüfer angle in (0, pi] that the eigenfunction takes at the right end."""
    S = _scale(lam)
    if pot.b is not None:
        if math.sin(beta) == 0:
            return math.pi
        return math.atan2(S * math.sin(beta), math.cos(beta)) % math.pi
    if pot.gamma == 0:
        u = free_decaying_log_derivative(pot.l, math.sqrt(-lam), end)
    else:
        u = weyl_log_derivative(pot, complex(lam), end, settings=settings).real
    return math.atan2(S, u)


def prufer_angle(
    pot: PotentialSpec, lam: float, end: Optional[float] = None, settings: Optional[Settings] = None
) -> float:
    """Prüfer angle of phi(lam, .) at the right end."""
    settings = settings or DEFAULT_SETTINGS
    end = end if end is not None else _end_point(pot, settings)
    S = _scale(lam)
    x_s = min(0.01 * end, 0.5 / S)
    phi, dphi = regular_values(pot, lam, [x_s], settings)
    angle0 = math.atan2(S * phi[0].real, dphi[0].real)
    centrifugal = pot.l * (pot.l + 1)

    def rhs(x: float, y: np.ndarray) -> np.ndarray:
        V = centrifugal / (x * x) + float(pot(x))
        s, c = np.sin(y[0].real), np.cos(y[0].real)
        return np.array([S * c * c + (lam - V) / S * s * s])

    _, state = integrate(rhs, x_s, end, [angle0], None, pot.breakpoints, settings)
    return float(state[0].real)


def eigen_count(
    pot: PotentialSpec, lam: float, beta: float = 0.0, settings: Optional[Settings] = None
) -> int:
    """Number of eigenvalues strictly below lam."""
    settings = settings or DEFAULT_SETTINGS
    end = _end_point(pot, settings)
    angle = prufer_angle(pot, lam, end, settings)
    target = _boundary_angle(pot, lam, beta, end, settings)
    return max(0, math.floor((angle - target) / math.pi) + 1)


def _shooting(pot: PotentialSpec, n: int, beta: float, end: float, settings: Settings):
    def mismatch(lam: float) -> float:
        target = _boundary_angle(pot, lam, beta, end, settings) + (n - 1) * math.pi
        return prufer_angle(pot, lam, end, settings) - target

    return mismatch


def _half_line_top(settings: Settings) -> float:
    return -settings.k_min ** 2


def _check_window(pot: PotentialSpec, window: tuple[float, float], settings: Settings) -> tuple[float, float]:
    lo, hi = (float(v) for v in window)
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
        raise WindowError(f"eigenvalue window {window} must be finite and increasing")
    if pot.half_line:
        hi = min(hi, _half_line_top(settings))
        if lo >= hi:
            raise WindowError("half-line eigenvalues lie below zero; the window holds no bound state")
    return lo, hi


def default_window(pot: PotentialSpec, settings: Optional[Settings] = None) -> tuple[float, float]:
    """Window (floor - 1, 0) holding every bound state of a half-line problem.

    Raises:
        ValidationError: For interval problems or an unbounded-below potential
    """
    settings = settings or DEFAULT_SETTINGS
    if not pot.half_line:
        raise ValidationError("interval problems have no default window; pass a window or a count")
    floor = pot.spectral_floor
    if not math.isfinite(floor):
        raise ValidationError("potential has no finite lower bound; pass a window")
    return floor - 1.0, _half_line_top(settings)


def eigenvalues(
    pot: PotentialSpec,
    window: Optional[tuple[float, float]] = None,
    beta: float = 0.0,
    count: Optional[int] = None,
    settings: Optional[Settings] = None,
) -> np.ndarray:
    """All eigenvalues inside a window, or the lowest ``count`` of them.

    Each eigenvalue is the unique root of the shooting mismatch for its
    index, bracketed by the window ends.

    Args:
        pot: Operator data; ``pot.b`` selects the interval problem
        window: Energy range (lo, hi); on the half-line it defaults to
            (floor - 1, 0) and is clipped below zero
        beta: Boundary angle at b, Dirichlet for 0
        count: Number of eigenvalues from the bottom, used when no window
            is given
        settings: Solver tolerances and thread cap

    Returns:
        Increasing eigenvalues

    Raises:
        WindowError: If the window is invalid or two roots collide
    """
    settings = settings or DEFAULT_SETTINGS
    if window is None and count is not None:
        values = np.array(sweep(lambda n: eigenvalue(pot, n, beta, settings), range(1, count + 1), settings))
        if np.any(np.diff(values) <= 0):
            raise WindowError("eigenvalue brackets collide")
        return values
    if window is None:
        window = default_window(pot, settings)
    lo, hi = _check_window(pot, window, settings)
    end = _end_point(pot, settings)
    first = eigen_count(pot, lo, beta, settings) + 1
    last = eigen_count(pot, hi, beta, settings)
    logger.debug("eigenvalues %d..%d in [%g, %g]", first, last, lo, hi)

    def solve(n: int) -> float:
        return brentq(_shooting(pot, n, beta, end, settings), lo, hi, xtol=EIGEN_XTOL, rtol=EIGEN_RTOL)

    values = np.array(sweep(solve, range(first, last + 1), settings), dtype=float)
    if np.any(np.diff(values) <= 0):
        raise WindowError("eigenvalue brackets collide; refine the window")
    return values


def eigenvalue(
    pot: PotentialSpec, n: int, beta: float = 0.0, settings: Optional[Settings] = None
) -> float:
    """The n-th eigenvalue (n >= 1), with the bracket grown until it holds.

    Raises:
        ValidationError: If n < 1
        WindowError: If the half-line problem has fewer than n bound states
    """
    settings = settings or DEFAULT_SETTINGS
    if n < 1:
        raise ValidationError(f"eigenvalue index starts at 1, got {n}")
    end = _end_point(pot, settings)
    floor = pot.spectral_floor
    lo = floor - 1.0 if math.isfinite(floor) else -1.0
    while eigen_count(pot, lo, beta, settings) >= n:
        lo -= max(1.0, abs(lo))
    if pot.half_line:
        hi = _half_line_top(settings)
        if eigen_count(pot, hi, beta, settings) < n:
            raise WindowError(f"the problem has fewer than {n} bound states")
    else:
        hi = max(lo + 1.0, (n * math.pi / end) ** 2)
        while eigen_count(pot, hi, beta, settings) < n:
            hi = 2 * hi + 1.0
    return brentq(_shooting(pot, n, beta, end, settings), lo, hi, xtol=EIGEN_XTOL, rtol=EIGEN_RTOL)


def _square_integral(pot: PotentialSpec, lam: float, end: float, settings: Settings) -> tuple[float, float, float]:
    """int_0^end phi(lam, x)^2 dx together with phi and phi' at end."""
    p = pot.l + 1
    x0 = start_radius(pot, end, settings)
    w0, dw0 = regular_start(pot, lam, x0)
    head = x0 ** (2 * p + 1) / (2 * p + 1)
    base = scaled_rhs(pot, lam, p)

    def rhs(x: float, y: np.ndarray) -> np.ndarray:
        dw = base(x, y[:2])
        return np.array([dw[0], dw[1], x ** (2 * p) * y[0] * y[0]])

    _, state = integrate(rhs, x0, end, [w0, dw0, head], None, pot.breakpoints, settings)
    phi, dphi = unscale(np.array(end), state[0], state[1], p)
    return float(state[2].real), float(np.real(phi)), float(np.real(dphi))


def _tail_integral(pot: PotentialSpec, lam: float, end: float, phi_end: float, settings: Settings) -> float:
    """int_end^inf phi^2 for a bound state, continued by the decaying solution."""
    kappa = math.sqrt(-lam)
    if pot.gamma == 0:
        nu = pot.l + 0.5
        w = kappa * end
        k_nu = special.kve(nu, w)
        cross = special.kve(nu - 1, w) * special.kve(nu + 1, w)
        return float(phi_end ** 2 * end / 2 * (cross - k_nu ** 2) / k_nu ** 2)
    span = WKB_DAMPING / kappa
    xs = np.linspace(end, end + span, 2001)
    f, _ = jost_values(pot, 1j * kappa, xs, settings)
    g = (f / f[0]).real
    return float(phi_end ** 2 * simpson(g ** 2, x=xs))


def norming_constants(
    pot: PotentialSpec,
    lams: Sequence[float] | np.ndarray,
    settings: Optional[Settings] = None,
) -> np.ndarray:
    """gamma_n = 1 / int phi(lambda_n, x)^2 dx for validated eigenvalues.

    Raises:
        ValidationError: For a nonnegative energy on the half-line
        TruncationError: If the integral is not finite and positive
    """
    settings = settings or DEFAULT_SETTINGS
    end = _end_point(pot, settings)

    def norming(lam: float) -> float:
        lam = float(lam)
        if pot.half_line and lam >= 0:
            raise ValidationError(f"half-line bound states lie below zero, got {lam}")
        total, phi_end, _ = _square_integral(pot, lam, end, settings)
        if pot.half_line:
            total += _tail_integral(pot, lam, end, phi_end, settings)
        if not math.isfinite(total) or total <= 0:
            raise TruncationError(f"norm integral of phi({lam:g}, .) is not finite and positive")
        return 1.0 / total

    return np.array(sweep(norming, lams, settings), dtype=float)
