"""Pytest configuration and fixtures for besselspec tests."""

import logging

import pytest

from besselspec.models.potential import (
    ConstantTerm,
    ExpDecayTerm,
    PotentialSpec,
    WellTerm,
)
from besselspec.utils.config import Settings


@pytest.fixture(autouse=True)
def reset_package_logger():
    """Undo the handler the CLI installs so caplog sees package records."""
    yield
    logger = logging.getLogger("besselspec")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    logger.propagate = True
    logger.setLevel(logging.NOTSET)


@pytest.fixture
def settings():
    """Default solver settings, single-threaded."""
    return Settings(threads=1)


@pytest.fixture
def free_potential():
    """Free operator at l = 0 on the half-line: phi = sin(kx)/k, theta = cos(kx)."""
    return PotentialSpec(l=0.0)


@pytest.fixture
def exp_decay_potential():
    """q(x) = e^(-x) at l = 0, smooth and short-range with no bound states."""
    return PotentialSpec(l=0.0, q=(ExpDecayTerm(),))


@pytest.fixture
def constant_potential():
    """q(x) = 0.5 at l = 0, the energy-shift oracle."""
    return PotentialSpec(l=0.0, q=(ConstantTerm(value=0.5),))


@pytest.fixture
def shallow_well():
    """q = -1 on (0, 1) at l = 0.

    The l = 0 square well binds when depth > pi^2/4, so this one has no
    bound states.
    """
    return PotentialSpec(l=0.0, q=(WellTerm(depth=-1.0, radius=1.0),))


@pytest.fixture
def deep_well():
    """q = -10 on (0, 1) at l = 0, exactly one bound state (pi^2/4 < 10 < 9 pi^2/4)."""
    return PotentialSpec(l=0.0, q=(WellTerm(depth=-10.0, radius=1.0),))


@pytest.fixture(params=[-0.5, 0.0, 0.25, 0.75])
def angular_momentum(request):
    """Representative l values: critical, integer, generic and limit point."""
    return request.param
