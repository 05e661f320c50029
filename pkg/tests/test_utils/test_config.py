"""Tests for settings, sweeps and logging setup."""

import logging

import pytest
from rich.logging import RichHandler

from besselspec.utils.config import Settings, sweep
from besselspec.utils.constants import THREADS_ENV
from besselspec.utils.exceptions import ValidationError
from besselspec.utils.logging import configure_logging, get_logger


class TestSettings:
    """Test solver settings."""

    def test_defaults(self):
        settings = Settings()
        assert settings.picard_max_sweeps == 50
        assert settings.string_max_sweeps == 60
        assert settings.tail_tolerance == 1e-8
        assert settings.threads == 1

    def test_nonpositive_tolerance_rejected(self):
        with pytest.raises(ValueError):
            Settings(rtol=0.0)

    def test_rtol_below_round_off_rejected(self):
        with pytest.raises(ValueError, match="double precision"):
            Settings(rtol=1e-17)

    def test_threads_from_environment(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV, "4")
        assert Settings.from_env().threads == 4
        assert Settings.from_env(threads=2).threads == 2

    @pytest.mark.parametrize("raw", ["many", "0", "-3"])
    def test_invalid_environment(self, monkeypatch, raw):
        monkeypatch.setenv(THREADS_ENV, raw)
        with pytest.raises(ValidationError, match=THREADS_ENV):
            Settings.from_env()

    def test_settings_are_hashable(self):
        """Frozen settings key the transform cache."""
        assert hash(Settings()) == hash(Settings())


class TestSweep:
    """Test ordered sweep evaluation."""

    def test_serial_order(self):
        assert sweep(lambda v: v * v, [3, 1, 2]) == [9, 1, 4]

    def test_threaded_order(self):
        settings = Settings(threads=4)
        items = list(range(20))
        assert sweep(lambda v: -v, items, settings) == [-v for v in items]


class TestLogging:
    """Test the rich handler setup."""

    def test_single_handler(self):
        logger = configure_logging("DEBUG")
        configure_logging("INFO")
        handlers = [h for h in logger.handlers if isinstance(h, RichHandler)]
        assert len(handlers) == 1
        assert logger.level == logging.INFO

    def test_namespace(self):
        assert get_logger("solver").name == "besselspec.solver"
        assert get_logger("besselspec.krein").name == "besselspec.krein"
