"""Potentials q(x) = gamma/x + q~(x) and the operator data built on them.

Each family is a pydantic model tagged by ``kind`` so a potential document
round-trips through JSON; ``PotentialSpec`` combines a sum of families with
the angular momentum, the Coulomb coefficient and an optional cutoff b.
"""

import json
import math
from functools import cached_property
from pathlib import Path
from typing import Annotated, Any, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.integrate import quad

from besselspec.models.base import AngularMomentum
from besselspec.utils.constants import L_MIN
from besselspec.utils.exceptions import ValidationError


class _Term(BaseModel):
    """Common interface of the potential families."""

    model_config = ConfigDict(frozen=True)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Points where the term is not smooth."""
        return ()

    @property
    def support_end(self) -> float:
        """Right end of the support, ``math.inf`` when not compact."""
        return math.inf

    @property
    def singular_exponent(self) -> float:
        """Exponent p with |q(x)| <= C x^p near zero."""
        return 0.0

    @property
    def decays_integrably(self) -> bool:
        """True when x q(x) is integrable at infinity."""
        return self.support_end < math.inf

    def tail_moment(self, x: float) -> float:
        """int_x^inf y |q(y)| dy."""
        end = self.support_end
        if x >= end:
            return 0.0
        value, _ = quad(lambda y: y * abs(float(self(np.array([y]))[0])), x, end, limit=200)
        return float(value)

    def lower_bound(self) -> float:
        """A lower bound of q on (0, inf), used to size bound-state scans."""
        return 0.0


class FreeTerm(_Term):
    kind: Literal["free"] = "free"

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return np.zeros_like(np.asarray(x, dtype=float))

    @property
    def support_end(self) -> float:
        return 0.0


class ConstantTerm(_Term):
    """q(x) = value on (0, inf)."""

    kind: Literal["constant"] = "constant"
    value: float

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return np.full_like(np.asarray(x, dtype=float), self.value)

    @property
    def support_end(self) -> float:
        return 0.0 if self.value == 0 else math.inf

    @property
    def decays_integrably(self) -> bool:
        return self.value == 0

    def tail_moment(self, x: float) -> float:
        return 0.0 if self.value == 0 else math.inf

    def lower_bound(self) -> float:
        return min(self.value, 0.0)


class WellTerm(_Term):
    """q(x) = depth on (start, radius), zero elsewhere.

    A negative depth is an attractive well.
    """

    kind: Literal["well"] = "well"
    depth: float
    radius: float = Field(gt=0, description="Right edge of the well")
    start: float = Field(default=0.0, ge=0, description="Left edge of the well")

    @model_validator(mode="after")
    def check_edges(self) -> "WellTerm":
        if self.start >= self.radius:
            raise ValueError("well start must lie left of its radius")
        return self

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.where((x > self.start) & (x < self.radius), self.depth, 0.0)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return (self.start, self.radius) if self.start > 0 else (self.radius,)

    @property
    def support_end(self) -> float:
        return self.radius

    def tail_moment(self, x: float) -> float:
        lo = max(x, self.start)
        if lo >= self.radius:
            return 0.0
        return abs(self.depth) * (self.radius ** 2 - lo ** 2) / 2

    def lower_bound(self) -> float:
        return min(self.depth, 0.0)


class ExpDecayTerm(_Term):
    """q(x) = amplitude * exp(-rate * x)."""

    kind: Literal["exp-decay"] = "exp-decay"
    amplitude: float = 1.0
    rate: float = Field(default=1.0, gt=0)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.amplitude * np.exp(-self.rate * np.asarray(x, dtype=float))

    @property
    def decays_integrably(self) -> bool:
        return True

    def tail_moment(self, x: float) -> float:
        a, b = abs(self.amplitude), self.rate
        return a * math.exp(-b * x) * (x / b + 1 / b ** 2)

    def lower_bound(self) -> float:
        return min(self.amplitude, 0.0)


class PowerTerm(_Term):
    """q(x) = coefficient * x^exponent on (0, cutoff), zero beyond."""

    kind: Literal["power"] = "power"
    coefficient: float
    exponent: float
    cutoff: float = Field(default=1.0, gt=0)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            values = self.coefficient * np.power(x, self.exponent)
        return np.where((x > 0) & (x < self.cutoff), values, 0.0)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return (self.cutoff,)

    @property
    def support_end(self) -> float:
        return self.cutoff

    @property
    def singular_exponent(self) -> float:
        return min(self.exponent, 0.0)

    def tail_moment(self, x: float) -> float:
        if x >= self.cutoff:
            return 0.0
        p = self.exponent + 2
        c = abs(self.coefficient)
        if abs(p) < 1e-14:
            return c * math.log(self.cutoff / x)
        return c * (self.cutoff ** p - x ** p) / p

    def lower_bound(self) -> float:
        if self.coefficient >= 0:
            return 0.0
        if self.exponent >= 0:
            return self.coefficient * self.cutoff ** self.exponent
        return -math.inf


class TableTerm(_Term):
    """Tabulated (x, q) pairs, linearly interpolated, zero beyond the last node."""

    kind: Literal["table"] = "table"
    x: tuple[float, ...]
    q: tuple[float, ...]

    @model_validator(mode="after")
    def check_table(self) -> "TableTerm":
        if len(self.x) != len(self.q) or len(self.x) < 2:
            raise ValueError("table needs matching x and q columns with at least 2 rows")
        if any(b <= a for a, b in zip(self.x, self.x[1:])):
            raise ValueError("table abscissae must be strictly increasing")
        if self.x[0] < 0:
            raise ValueError("table abscissae must be nonnegative")
        return self

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        values = np.interp(x, self.x, self.q)
        return np.where(x <= self.x[-1], values, 0.0)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return (self.x[-1],)

    @property
    def support_end(self) -> float:
        return self.x[-1]

    def lower_bound(self) -> float:
        return min(min(self.q), 0.0)


PotentialTerm = Annotated[
    Union[FreeTerm, ConstantTerm, WellTerm, ExpDecayTerm, PowerTerm, TableTerm],
    Field(discriminator="kind"),
]


class PotentialSpec(BaseModel):
    """Operator data: -d^2/dx^2 + l(l+1)/x^2 + gamma/x + q~(x) on (0, b).

    Attributes:
        l: Angular momentum, l >= -1/2
        gamma: Coulomb coefficient
        q: Terms summed into q~
        b: Right endpoint, ``None`` for the half-line
    """

    l: float = Field(ge=L_MIN, description="Angular momentum")
    gamma: float = Field(default=0.0, description="Coulomb coefficient")
    q: tuple[PotentialTerm, ...] = ()
    b: Optional[float] = Field(default=None, gt=0, description="Right endpoint")

    model_config = ConfigDict(frozen=True)

    @field_validator("b", mode="before")
    @classmethod
    def validate_b(cls, v: Any) -> Optional[float]:
        """Accept ``"inf"`` and infinity as the half-line."""
        if v is None:
            return None
        if isinstance(v, str) and v.strip().lower() in ("inf", "infinity"):
            return None
        if isinstance(v, (int, float)) and math.isinf(v):
            return None
        return v

    @field_validator("q", mode="before")
    @classmethod
    def validate_terms(cls, v: Any) -> Any:
        if isinstance(v, (dict, BaseModel)):
            return (v,)
        return v

    @property
    def angular(self) -> AngularMomentum:
        return AngularMomentum(l=self.l)

    @property
    def half_line(self) -> bool:
        return self.b is None

    # potential evaluation

    def q_tilde(self, x: Any) -> np.ndarray:
        """Short-range part q~(x)."""
        x = np.asarray(x, dtype=float)
        total = np.zeros_like(x)
        for term in self.q:
            total = total + term(x)
        return total

    def __call__(self, x: Any) -> np.ndarray:
        """Full perturbation gamma/x + q~(x)."""
        x = np.asarray(x, dtype=float)
        total = self.q_tilde(x)
        if self.gamma != 0:
            total = total + self.gamma / x
        return total

    def effective(self, x: Any) -> np.ndarray:
        """Full potential including the centrifugal term."""
        x = np.asarray(x, dtype=float)
        return self.l * (self.l + 1) / x ** 2 + self(x)

    @cached_property
    def breakpoints(self) -> tuple[float, ...]:
        points = {p for term in self.q for p in term.breakpoints if p > 0}
        if self.b is not None:
            points = {p for p in points if p < self.b}
        return tuple(sorted(points))

    @cached_property
    def support_end(self) -> float:
        """Right end of the support of q~."""
        ends = [term.support_end for term in self.q]
        return max(ends, default=0.0)

    def tail_moment(self, x: float) -> float:
        """int_x^inf y |q~(y)| dy, bounded by the sum over terms."""
        return float(sum(term.tail_moment(x) for term in self.q))

    @cached_property
    def lower_bound(self) -> float:
        """Lower bound of q~, ``-inf`` for unbounded attractive terms."""
        return float(sum(term.lower_bound() for term in self.q))

    @cached_property
    def spectral_floor(self) -> float:
        """Lower bound of the spectrum, with the hydrogen ground state for gamma < 0."""
        floor = self.lower_bound
        if self.gamma < 0:
            floor -= self.gamma ** 2 / (4 * (self.l + 1) ** 2)
        return floor

    # integrability classes

    @cached_property
    def singular_exponent(self) -> float:
        exponents = [term.singular_exponent for term in self.q]
        if self.gamma != 0:
            exponents.append(-1.0)
        return min(exponents, default=0.0)

    @cached_property
    def hyp12(self) -> bool:
        """x q(x) integrable near zero (log-weighted at l = -1/2).

        Read off the near-zero exponents of the term families, which are exact
        for the supported forms; ``hyp12_moment`` evaluates the moment itself.
        """
        return self.singular_exponent > -2.0

    @cached_property
    def marchenko(self) -> bool:
        """Short-range class int_1^inf x |q~| < inf with no Coulomb tail.

        Decided per term family; ``tail_moment`` gives the value.
        """
        return self.gamma == 0 and all(term.decays_integrably for term in self.q)

    @cached_property
    def coulomb_admissible(self) -> bool:
        """Coulomb tail with q~ and x q~ integrable at infinity."""
        return all(term.decays_integrably for term in self.q)

    @cached_property
    def theta_iterable(self) -> bool:
        """int_0 y^(-2l) max(1, -log y) |q(y)| dy < inf, from the near-zero exponents."""
        return self.singular_exponent - 2 * self.l > -1.0

    def hyp12_moment(self) -> float:
        """int_0^1 w(x) x |q(x)| dx with the log weight at l = -1/2."""
        if not self.hyp12:
            return math.inf
        critical = self.angular.critical

        def integrand(x: float) -> float:
            weight = 1.0 - math.log(x / (1 + x)) if critical else 1.0
            return weight * x * abs(float(self(np.array([x]))[0]))

        points = [p for p in self.breakpoints if p < 1]
        value, _ = quad(integrand, 0.0, 1.0, points=points or None, limit=200)
        return float(value)

    def moment(self) -> float:
        """int_0^inf x |q~(x)| dx."""
        return self.tail_moment(0.0)

    def bargmann_bound(self) -> float:
        """int_0^inf x |q~| dx / (2l + 1), infinite at l = -1/2."""
        if self.angular.critical:
            return math.inf
        return self.moment() / (2 * self.l + 1)

    # derived potentials

    def shifted(self, c: float) -> "PotentialSpec":
        """Potential q + c."""
        return self.plus(ConstantTerm(value=c))

    def plus(self, *terms: _Term) -> "PotentialSpec":
        return PotentialSpec(l=self.l, gamma=self.gamma, q=self.q + tuple(terms), b=self.b)

    @cached_property
    def constant_part(self) -> float:
        """Sum of the constant terms, the threshold of the essential spectrum."""
        return float(sum(term.value for term in self.q if isinstance(term, ConstantTerm)))

    def without_constant(self) -> "PotentialSpec":
        """The potential with its constant terms removed."""
        terms = tuple(term for term in self.q if not isinstance(term, ConstantTerm))
        return PotentialSpec(l=self.l, gamma=self.gamma, q=terms, b=self.b)

    def with_l(self, l: float) -> "PotentialSpec":
        return PotentialSpec(l=l, gamma=self.gamma, q=self.q, b=self.b)

    def on_interval(self, b: Optional[float]) -> "PotentialSpec":
        return PotentialSpec(l=self.l, gamma=self.gamma, q=self.q, b=b)

    def to_document(self) -> str:
        data = self.model_dump(mode="json")
        data["b"] = "inf" if self.b is None else self.b
        return json.dumps(data, indent=2)


def parse_terms(text: str) -> tuple[tuple[_Term, ...], float]:
    """Parse the inline potential shorthand.

    Accepted forms are ``free``, ``constant:c``, ``well:depth,radius``,
    ``exp-decay[:amplitude,rate]``, ``power:coefficient,exponent[,cutoff]``
    and ``coulomb:gamma``; several forms may be joined with ``+``.

    Returns:
        The q~ terms and the Coulomb coefficient

    Raises:
        ValidationError: If a form is not recognised
    """
    terms: list[_Term] = []
    gamma = 0.0
    for part in text.split("+"):
        part = part.strip()
        if not part:
            continue
        name, _, args = part.partition(":")
        name = name.strip().lower()
        try:
            values = [float(a) for a in args.split(",") if a.strip()]
        except ValueError as e:
            raise ValidationError(f"Invalid numbers in potential form {part!r}") from e
        try:
            if name == "free" and not values:
                terms.append(FreeTerm())
            elif name == "constant" and len(values) == 1:
                terms.append(ConstantTerm(value=values[0]))
            elif name == "well" and len(values) in (2, 3):
                start = values[2] if len(values) == 3 else 0.0
                terms.append(WellTerm(depth=values[0], radius=values[1], start=start))
            elif name == "exp-decay" and len(values) in (0, 2):
                terms.append(ExpDecayTerm(**dict(zip(("amplitude", "rate"), values))))
            elif name == "power" and len(values) in (2, 3):
                terms.append(PowerTerm(**dict(zip(("coefficient", "exponent", "cutoff"), values))))
            elif name == "coulomb" and len(values) == 1:
                gamma += values[0]
            else:
                raise ValidationError(f"Unknown potential form {part!r}")
        except ValueError as e:
            raise ValidationError(f"Invalid potential form {part!r}: {e}") from e
    return tuple(terms), gamma


def load_potential(
    source: str, l: Optional[float] = None, b: Optional[float] = None
) -> PotentialSpec:
    """Build a potential from a JSON document path or the inline shorthand.

    Args:
        source: Path to a JSON potential document, or an inline form
        l: Angular momentum, overrides the document value
        b: Right endpoint, overrides the document value

    Raises:
        ValidationError: If the document or the shorthand is invalid
    """
    path = Path(source)
    if source.endswith(".json") or path.is_file():
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ValidationError(f"Cannot read potential document {source}: {e}") from e
        if l is not None:
            data["l"] = l
        if b is not None:
            data["b"] = b
        try:
            return PotentialSpec.model_validate(data)
        except ValueError as e:
            raise ValidationError(f"Invalid potential document {source}: {e}") from e
    terms, gamma = parse_terms(source)
    try:
        return PotentialSpec(l=0.0 if l is None else l, gamma=gamma, q=terms, b=b)
    except ValueError as e:
        raise ValidationError(f"Invalid potential: {e}") from e
