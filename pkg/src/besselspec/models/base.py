"""Core data structures shared by the spectral and scattering modules.

Everything here is immutable after construction so sweeps can share
instances freely across threads.
"""

import math
from enum import Enum
from typing import Any, Callable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.integrate import trapezoid

from besselspec.utils.constants import HALF_INTEGER_TOL, L_MIN


def _frozen_array(values: Any, dtype=float) -> np.ndarray:
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


class AngularMomentum(BaseModel):
    """Angular momentum of the Bessel operator.

    Attributes:
        l: Angular momentum, l >= -1/2
    """

    l: float = Field(ge=L_MIN, description="Angular momentum")

    model_config = ConfigDict(frozen=True)

    @property
    def nu(self) -> float:
        """Bessel order l + 1/2."""
        return self.l + 0.5

    @property
    def kappa(self) -> int:
        """Number of negative squares of the singular m-function."""
        return math.floor(self.l / 2 + 0.75)

    @property
    def n_l(self) -> int:
        return math.floor(self.l + 0.5)

    @property
    def half_integer(self) -> bool:
        """True when l + 1/2 is a nonnegative integer (log branch)."""
        return abs(self.nu - round(self.nu)) < HALF_INTEGER_TOL

    @property
    def critical(self) -> bool:
        """True at l = -1/2."""
        return abs(self.nu) < HALF_INTEGER_TOL

    @property
    def limit_circle(self) -> bool:
        """True when x = 0 is in the limit circle case."""
        return self.l < 0.5


class ComplexEnergy(BaseModel):
    """Spectral parameter z together with its momentum k = sqrt(z), Im k >= 0.

    Attributes:
        z: Spectral parameter
        k: Momentum on the upper half-plane branch
    """

    z: complex
    k: complex

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_branch(self) -> "ComplexEnergy":
        """Enforce the momentum branch and k**2 = z."""
        if self.k.imag < 0:
            raise ValueError(f"momentum {self.k} is not on the Im k >= 0 branch")
        scale = max(abs(self.z), 1e-300)
        if abs(self.k * self.k - self.z) > 1e-14 * scale * 4:
            raise ValueError(f"k**2 = {self.k * self.k} does not reproduce z = {self.z}")
        return self

    @classmethod
    def from_z(cls, z: complex) -> "ComplexEnergy":
        z = complex(z)
        k = complex(np.sqrt(z))
        if k.imag < 0 or (k.imag == 0 and k.real < 0):
            k = -k
        return cls(z=z, k=k)

    @classmethod
    def from_k(cls, k: complex) -> "ComplexEnergy":
        k = complex(k)
        return cls(z=k * k, k=k)


class Grading(str, Enum):
    """Node distribution of a radial grid."""

    LOG = "log"
    UNIFORM = "uniform"
    CUSTOM = "custom"


class GridSpec(BaseModel):
    """Radial grid on [x_min, x_max].

    Attributes:
        x_min: Left end, strictly positive
        x_max: Right end
        nodes: Strictly increasing nodes inside [x_min, x_max]
        grading: How the nodes are distributed
    """

    x_min: float = Field(gt=0, description="Left end of the grid")
    x_max: float = Field(gt=0, description="Right end of the grid")
    nodes: np.ndarray
    grading: Grading = Grading.CUSTOM

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("nodes", mode="before")
    @classmethod
    def validate_nodes(cls, v: Any) -> np.ndarray:
        """Ensure at least two strictly increasing nodes."""
        nodes = np.asarray(v, dtype=float).ravel()
        if nodes.size < 2:
            raise ValueError("a grid needs at least 2 nodes")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("grid nodes must be strictly increasing")
        return _frozen_array(nodes)

    @model_validator(mode="after")
    def check_bounds(self) -> "GridSpec":
        """Nodes must lie inside [x_min, x_max]."""
        span = self.x_max - self.x_min
        slack = 1e-12 * max(1.0, self.x_max)
        if span <= 0:
            raise ValueError("x_max must exceed x_min")
        if self.nodes[0] < self.x_min - slack or self.nodes[-1] > self.x_max + slack:
            raise ValueError("grid nodes fall outside [x_min, x_max]")
        return self

    @classmethod
    def uniform(cls, x_min: float, x_max: float, num: int) -> "GridSpec":
        return cls(
            x_min=x_min, x_max=x_max, nodes=np.linspace(x_min, x_max, num), grading=Grading.UNIFORM
        )

    @classmethod
    def log_graded(
        cls, x_min: float, x_max: float, num: int, switch: float = 1.0
    ) -> "GridSpec":
        """Geometric nodes up to ``switch``, uniform beyond.

        Node density is proportional to 1/x near zero, which keeps product
        rules accurate against the power behaviour of the solutions.
        """
        switch = min(switch, x_max)
        if switch <= x_min:
            return cls.uniform(x_min, x_max, num)
        if switch == x_max:
            nodes = np.geomspace(x_min, x_max, num)
        else:
            n_head = max(num // 2, 2)
            head = np.geomspace(x_min, switch, n_head)
            rest = np.linspace(switch, x_max, max(num - n_head, 1) + 1)[1:]
            nodes = np.concatenate([head, rest])
        return cls(x_min=x_min, x_max=x_max, nodes=nodes, grading=Grading.LOG)

    @classmethod
    def custom(cls, nodes: Any) -> "GridSpec":
        array = np.asarray(nodes, dtype=float)
        return cls(x_min=float(array[0]), x_max=float(array[-1]), nodes=array)

    def __len__(self) -> int:
        return int(self.nodes.size)


class WaveKind(str, Enum):
    """Which distinguished solution a sample holds."""

    REGULAR = "regular"
    NONPRINCIPAL = "nonprincipal"
    JOST = "jost"


class WaveSample(BaseModel):
    """Sampled solution values and derivatives on a grid.

    Attributes:
        grid: Grid the solution was sampled on
        values: Solution values at the nodes
        derivs: Derivatives at the nodes
        kind: Regular, non-principal or Jost solution
        energy: Spectral parameter and momentum
        l: Angular momentum of the operator
        route: Construction route used
    """

    grid: GridSpec
    values: np.ndarray
    derivs: np.ndarray
    kind: WaveKind
    energy: ComplexEnergy
    l: float
    route: str = "ode"

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("values", "derivs", mode="before")
    @classmethod
    def validate_samples(cls, v: Any) -> np.ndarray:
        return _frozen_array(v, dtype=complex)

    @model_validator(mode="after")
    def check_shapes(self) -> "WaveSample":
        if self.values.shape != self.grid.nodes.shape or self.derivs.shape != self.grid.nodes.shape:
            raise ValueError("sample arrays must match the grid")
        return self

    @property
    def x(self) -> np.ndarray:
        return self.grid.nodes

    def wronskian(self, other: "WaveSample") -> np.ndarray:
        """W(self, other) = self * other' - self' * other at every node."""
        if not np.array_equal(self.grid.nodes, other.grid.nodes):
            raise ValueError("Wronskian needs samples on a shared grid")
        return self.values * other.derivs - self.derivs * other.values


class MRoute(str, Enum):
    """Construction route of a singular m-function sample."""

    JOST = "jost"
    STRING = "string"
    TRUNCATED = "truncated"


AMBIGUITY_NOTE = (
    "m is defined up to an additive real entire function g(z) inherited from "
    "the non-uniqueness of the non-principal solution"
)


class MSample(BaseModel):
    """Value of the singular m-function at one spectral parameter.

    Attributes:
        z: Spectral parameter
        m: m-function value
        route: How m was computed
        ambiguity_note: The additive real entire freedom of m
        warning: Diagnostic attached when routes disagree beyond a constant
    """

    z: complex
    m: complex
    route: MRoute
    ambiguity_note: str = AMBIGUITY_NOTE
    warning: Optional[str] = None

    model_config = ConfigDict(frozen=True)


class SpectralData(BaseModel):
    """Absolutely continuous density and point masses of the spectral measure.

    Attributes:
        lam: Positive energies where the density was sampled
        density: d rho / d lambda at ``lam``
        eigenvalues: Point spectrum lambda_n
        norming: Norming constants gamma_n (the jumps of rho)
    """

    lam: np.ndarray = Field(default_factory=lambda: _frozen_array([]))
    density: np.ndarray = Field(default_factory=lambda: _frozen_array([]))
    eigenvalues: np.ndarray = Field(default_factory=lambda: _frozen_array([]))
    norming: np.ndarray = Field(default_factory=lambda: _frozen_array([]))

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("lam", "density", "eigenvalues", "norming", mode="before")
    @classmethod
    def validate_arrays(cls, v: Any) -> np.ndarray:
        return _frozen_array(v)

    @model_validator(mode="after")
    def check_consistency(self) -> "SpectralData":
        if self.lam.shape != self.density.shape:
            raise ValueError("density must be sampled on lam")
        if self.eigenvalues.shape != self.norming.shape:
            raise ValueError("one norming constant per eigenvalue")
        if np.any(self.density < 0):
            raise ValueError("spectral density must be nonnegative")
        if np.any(self.norming <= 0):
            raise ValueError("norming constants must be positive")
        return self

    def point_mass_rho(self, lam: float) -> float:
        """Point-mass part of rho with rho(0) = 0 and midpoints at jumps."""
        total = 0.0
        for lam_n, gamma_n in zip(self.eigenvalues, self.norming):
            if lam_n > 0:
                total += gamma_n if lam_n < lam else 0.5 * gamma_n if lam_n == lam else 0.0
            elif lam_n < 0:
                total -= gamma_n if lam < lam_n else 0.5 * gamma_n if lam == lam_n else 0.0
            elif lam != 0:
                total += math.copysign(0.5 * gamma_n, lam)
        return total

    def rho(self, lam: float) -> float:
        """Integrated spectral function from the tabulated density and jumps."""
        total = self.point_mass_rho(lam)
        if lam <= 0 or self.lam.size == 0:
            return total
        nodes = np.concatenate([[0.0], self.lam[self.lam < lam], [lam]])
        values = np.interp(
            nodes, np.concatenate([[0.0], self.lam]), np.concatenate([[0.0], self.density])
        )
        return total + float(trapezoid(values, nodes))


class ScatteringData(BaseModel):
    """Jost function samples on a real momentum grid.

    Attributes:
        k_grid: Positive momenta
        f_vals: Jost function f(k)
        g_vals: Companion Wronskian g(k)
        delta: Continuous phase shift with delta -> 0 at the top of the grid
        S_vals: Scattering matrix exp(2 i delta)
        kappas: Bound-state momenta
        N: Number of bound states
    """

    k_grid: np.ndarray
    f_vals: np.ndarray
    g_vals: Optional[np.ndarray] = None
    delta: np.ndarray
    S_vals: np.ndarray
    kappas: np.ndarray = Field(default_factory=lambda: _frozen_array([]))
    N: int = Field(default=0, ge=0)

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("k_grid", "delta", "kappas", mode="before")
    @classmethod
    def validate_real(cls, v: Any) -> np.ndarray:
        return _frozen_array(v)

    @field_validator("f_vals", "S_vals", mode="before")
    @classmethod
    def validate_complex(cls, v: Any) -> np.ndarray:
        return _frozen_array(v, dtype=complex)

    @field_validator("g_vals", mode="before")
    @classmethod
    def validate_optional_complex(cls, v: Any) -> Optional[np.ndarray]:
        return None if v is None else _frozen_array(v, dtype=complex)

    @model_validator(mode="after")
    def check_unitarity(self) -> "ScatteringData":
        if np.any(self.k_grid <= 0):
            raise ValueError("scattering grid must be positive")
        if self.S_vals.size and np.max(np.abs(np.abs(self.S_vals) - 1.0)) > 1e-10:
            raise ValueError("scattering matrix is not unitary on the real axis")
        return self


class StringModel(BaseModel):
    """Krein string -u'' = z r(xi) u on [0, a], tabulated over a parameter t.

    The string is parametrized by t (t = x for a Liouville transform,
    t = xi for closed-form strings) through the rates dxi/dt and dR/dt,
    so that r(xi) dxi = (dR/dt) dt.

    Attributes:
        a: Right endpoint
        t: Parameter nodes
        xi: xi(t) at the nodes
        R: Mass function R(xi(t)) = int_0^xi r
        r: Density r(xi(t))
        theta0: Reference solution at the nodes (transformed strings only)
        dtheta0: Its x-derivative at the nodes
        beta_tilde: Boundary angle at xi = a
        lambda0: Energy of the reference solution; string parameter is z - lambda0
        l: Angular momentum of the source operator, if any
    """

    a: float = Field(gt=0, description="Right endpoint of the string")
    t: np.ndarray
    xi: np.ndarray
    R: np.ndarray
    r: np.ndarray
    theta0: Optional[np.ndarray] = None
    dtheta0: Optional[np.ndarray] = None
    beta_tilde: float = 0.0
    lambda0: float = 0.0
    l: Optional[float] = None
    xi_rate: Callable[[np.ndarray], np.ndarray]
    mass_rate: Callable[[np.ndarray], np.ndarray]

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("t", "xi", "R", "r", mode="before")
    @classmethod
    def validate_tables(cls, v: Any) -> np.ndarray:
        return _frozen_array(v)

    @field_validator("theta0", "dtheta0", mode="before")
    @classmethod
    def validate_theta0(cls, v: Any) -> Optional[np.ndarray]:
        return None if v is None else _frozen_array(v)

    @model_validator(mode="after")
    def check_monotone(self) -> "StringModel":
        if np.any(np.diff(self.xi) <= 0):
            raise ValueError("xi(t) must be strictly increasing")
        if np.any(self.r <= 0):
            raise ValueError("string density must be positive")
        if self.theta0 is not None and np.any(self.theta0 <= 0):
            raise ValueError("reference solution must be positive")
        return self

    @property
    def total_mass(self) -> float:
        """int_0^a r, finite for an L^1 density."""
        return float(self.R[-1])


class LimitOrderData(BaseModel):
    """Limit order of a mass function and the inverse of F(x) = 1/(x R(x)).

    Attributes:
        alpha: Limit order, ``math.inf`` when R decays faster than any power
        spread: Relative disagreement between scale factors at the finest window
        xi: Abscissae of the R samples
        R: Mass function samples
        F: 1/(xi R(xi))
    """

    alpha: float = Field(ge=0)
    spread: float = Field(ge=0)
    xi: np.ndarray
    R: np.ndarray
    F: np.ndarray

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("xi", "R", "F", mode="before")
    @classmethod
    def validate_tables(cls, v: Any) -> np.ndarray:
        return _frozen_array(v)

    @property
    def nu(self) -> float:
        return 1.0 / (1.0 + self.alpha) if math.isfinite(self.alpha) else 0.0

    def f_inv(self, rho: np.ndarray) -> np.ndarray:
        """Inverse of F by log-log interpolation of the tabulated pairs."""
        rho = np.asarray(rho, dtype=float)
        log_f = np.log(self.F[::-1])
        log_x = np.log(self.xi[::-1])
        if np.any(np.log(rho) < log_f[0]) or np.any(np.log(rho) > log_f[-1]):
            raise ValueError("rho outside the tabulated range of F")
        return np.exp(np.interp(np.log(rho), log_f, log_x))
