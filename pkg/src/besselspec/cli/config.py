"""Run configuration of the command-line interface."""

from enum import Enum
from pathlib import Path
from typing import Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from besselspec.models.potential import PotentialSpec, load_potential
from besselspec.utils.config import Settings
from besselspec.utils.constants import ODE_ATOL, ODE_RTOL
from besselspec.utils.exceptions import ValidationError

Number = Union[float, complex]


class OutputFormat(str, Enum):
    """Serialization of command output."""

    CSV = "csv"
    JSON = "json"


def parse_number(text: str) -> Number:
    """Parse a real or complex literal; ``i`` and ``j`` both mark the imaginary unit.

    Raises:
        ValidationError: If the text is not a number
    """
    if text.strip().lower() in ("inf", "+inf", "-inf", "nan"):
        raise ValidationError(f"{text!r} is not a finite number")
    cleaned = text.strip().replace(" ", "").replace("i", "j")
    try:
        return float(cleaned)
    except ValueError:
        pass
    try:
        value = complex(cleaned)
    except ValueError as e:
        raise ValidationError(f"{text!r} is not a number") from e
    return value.real if value.imag == 0 else value


def parse_sweep(text: str) -> list[Number]:
    """Expand a sweep given as ``start:stop:num[:log]`` or a comma list.

    Examples:
        ``1:10:4`` gives 1, 4, 7, 10; ``1:100:3:log`` gives 1, 10, 100;
        ``1+1i,2`` gives (1+1j), 2.0.

    Raises:
        ValidationError: If the sweep is empty or malformed
    """
    text = text.strip()
    if not text:
        raise ValidationError("sweep is empty")
    if ":" in text:
        parts = text.split(":")
        if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3].strip().lower() != "log"):
            raise ValidationError(f"range sweep {text!r} must read start:stop:num[:log]")
        start, stop = parse_number(parts[0]), parse_number(parts[1])
        if isinstance(start, complex) or isinstance(stop, complex):
            raise ValidationError("range sweeps are real; list complex values with commas")
        try:
            num = int(parts[2])
        except ValueError as e:
            raise ValidationError(f"sweep count {parts[2]!r} is not an integer") from e
        if num < 1:
            raise ValidationError("sweep count must be positive")
        if len(parts) == 4:
            if start <= 0 or stop <= 0:
                raise ValidationError("log sweeps need positive ends")
            values = np.geomspace(start, stop, num)
        else:
            values = np.linspace(start, stop, num)
        return [float(v) for v in values]
    return [parse_number(part) for part in text.split(",") if part.strip()]


class RunConfig(BaseModel):
    """Validated inputs of one CLI invocation.

    Attributes:
        potential: Path of a JSON potential document or an inline form
        l: Angular momentum, overrides the document
        b: Right endpoint, overrides the document
        command: Subcommand name
        sweeps: Named parameter sweeps
        rtol: ODE relative tolerance
        atol: ODE absolute tolerance
        threads: Parallel sweep width, from the environment when unset
        output: Output file, stdout when unset
        format: csv or json
    """

    potential: str = Field(default="free", description="Potential document or inline form")
    l: Optional[float] = Field(default=None, ge=-0.5, description="Angular momentum")
    b: Optional[float] = Field(default=None, gt=0, description="Right endpoint")
    command: str
    sweeps: dict[str, list[Number]] = Field(default_factory=dict)
    rtol: float = Field(default=ODE_RTOL, gt=0)
    atol: float = Field(default=ODE_ATOL, gt=0)
    threads: Optional[int] = Field(default=None, ge=1)
    output: Optional[Path] = None
    format: OutputFormat = OutputFormat.CSV

    model_config = ConfigDict(frozen=True)

    @field_validator("sweeps")
    @classmethod
    def validate_sweeps(cls, v: dict[str, list[Number]]) -> dict[str, list[Number]]:
        """Every sweep carries at least one value."""
        for name, values in v.items():
            if not values:
                raise ValueError(f"sweep --{name} is empty")
        return v

    def settings(self) -> Settings:
        overrides: dict = {"rtol": self.rtol, "atol": self.atol}
        if self.threads is not None:
            overrides["threads"] = self.threads
        return Settings.from_env(**overrides)

    def load_potential(self) -> PotentialSpec:
        return load_potential(self.potential, l=self.l, b=self.b)
