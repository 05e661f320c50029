"""Runtime settings and sweep execution."""

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Optional, TypeVar

from pydantic import BaseModel, ConfigDict, Field, field_validator

from besselspec.utils.constants import (
    K_MIN,
    ODE_ATOL,
    ODE_RTOL,
    PICARD_MAX_SWEEPS,
    PICARD_TOLERANCE,
    START_RADIUS,
    STRING_MAX_SWEEPS,
    TAIL_TOLERANCE,
    THREADS_ENV,
)
from besselspec.utils.exceptions import ValidationError

T = TypeVar("T")
R = TypeVar("R")


class Settings(BaseModel):
    """Solver tolerances and execution limits.

    Attributes:
        rtol: Relative tolerance of the ODE integrator
        atol: Absolute tolerance of the ODE integrator
        picard_tolerance: Relative sup-norm update that stops Picard sweeps
        picard_max_sweeps: Sweep cap for the Volterra iteration
        string_max_sweeps: Sweep cap for the string iteration
        tail_tolerance: Budget for the neglected Jost tail integral
        k_min: Smallest admissible |k|
        start_radius: Near-zero start of outward integration
        threads: Parallel width for sweeps
    """

    rtol: float = Field(default=ODE_RTOL, gt=0, description="ODE relative tolerance")
    atol: float = Field(default=ODE_ATOL, gt=0, description="ODE absolute tolerance")
    picard_tolerance: float = Field(default=PICARD_TOLERANCE, gt=0)
    picard_max_sweeps: int = Field(default=PICARD_MAX_SWEEPS, gt=0)
    string_max_sweeps: int = Field(default=STRING_MAX_SWEEPS, gt=0)
    tail_tolerance: float = Field(default=TAIL_TOLERANCE, gt=0)
    k_min: float = Field(default=K_MIN, gt=0, description="Smallest admissible |k|")
    start_radius: float = Field(default=START_RADIUS, gt=0, lt=1)
    threads: int = Field(default=1, ge=1, description="Parallel sweep width")

    model_config = ConfigDict(frozen=True)

    @field_validator("rtol")
    @classmethod
    def validate_rtol(cls, v: float) -> float:
        """Keep the relative tolerance above round-off."""
        if v < 1e-15:
            raise ValueError("rtol below 1e-15 cannot be met in double precision")
        return v

    @classmethod
    def from_env(cls, **overrides) -> "Settings":
        """Build settings, reading the thread cap from the environment.

        Raises:
            ValidationError: If the environment variable is not a positive integer
        """
        raw = os.environ.get(THREADS_ENV)
        values = dict(overrides)
        if raw is not None and "threads" not in values:
            try:
                threads = int(raw)
            except ValueError as e:
                raise ValidationError(f"{THREADS_ENV} must be an integer, got {raw!r}") from e
            if threads < 1:
                raise ValidationError(f"{THREADS_ENV} must be positive, got {threads}")
            values["threads"] = threads
        return cls(**values)


DEFAULT_SETTINGS = Settings()


def sweep(
    func: Callable[[T], R],
    items: Iterable[T],
    settings: Optional[Settings] = None,
) -> list[R]:
    """Evaluate ``func`` over ``items``, in input order.

    Independent evaluations fan out over a thread pool when more than one
    thread is allowed; results are merged by index.
    """
    settings = settings or DEFAULT_SETTINGS
    items = list(items)
    if settings.threads == 1 or len(items) < 2:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=settings.threads) as pool:
        return list(pool.map(func, items))
