"""Tests for sweep parsing and the run configuration."""

from pathlib import Path

import pytest

from besselspec.cli.config import OutputFormat, RunConfig, parse_number, parse_sweep
from besselspec.utils.exceptions import ValidationError


class TestParseNumber:
    """Test real and complex literals."""

    def test_real(self):
        assert parse_number("2.5") == 2.5

    @pytest.mark.parametrize("text", ["1+1i", "1+1j", " 1 + 1i "])
    def test_complex(self, text):
        assert parse_number(text) == 1 + 1j

    def test_pure_imaginary(self):
        assert parse_number("2i") == 2j

    def test_zero_imaginary_part_is_real(self):
        value = parse_number("3+0i")
        assert isinstance(value, float) and value == 3.0

    @pytest.mark.parametrize("text", ["inf", "nan", "abc", ""])
    def test_rejected(self, text):
        with pytest.raises(ValidationError):
            parse_number(text)


class TestParseSweep:
    """Test range and list sweeps."""

    def test_linear_range(self):
        assert parse_sweep("1:10:4") == [1.0, 4.0, 7.0, 10.0]

    def test_log_range(self):
        values = parse_sweep("1:100:3:log")
        assert values == pytest.approx([1.0, 10.0, 100.0])

    def test_list(self):
        assert parse_sweep("1+1i,2") == [1 + 1j, 2.0]

    @pytest.mark.parametrize(
        "text,message",
        [
            ("", "empty"),
            ("1:2", "start:stop:num"),
            ("1:2:3:lin", "start:stop:num"),
            ("1:2:x", "integer"),
            ("1:2:0", "positive"),
            ("0:10:3:log", "positive ends"),
            ("1i:2:3", "real"),
        ],
    )
    def test_malformed(self, text, message):
        with pytest.raises(ValidationError, match=message):
            parse_sweep(text)


class TestRunConfig:
    """Test validated CLI inputs."""

    def test_defaults(self):
        cfg = RunConfig(command="phi")
        assert cfg.format is OutputFormat.CSV
        assert cfg.output is None
        assert cfg.load_potential().half_line

    def test_empty_sweep_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            RunConfig(command="jost", sweeps={"k": []})

    def test_nonpositive_tolerance_rejected(self):
        with pytest.raises(ValueError):
            RunConfig(command="jost", rtol=-1.0)

    def test_unknown_format_rejected(self):
        with pytest.raises(ValueError):
            RunConfig(command="jost", format="xml")

    def test_settings_overrides(self):
        cfg = RunConfig(command="m", rtol=1e-10, threads=3, output=Path("out.csv"))
        settings = cfg.settings()
        assert settings.rtol == 1e-10
        assert settings.threads == 3

    def test_potential_overrides(self):
        cfg = RunConfig(command="eigen", potential="well:-10,1", l=0.75, b=2.0)
        pot = cfg.load_potential()
        assert pot.l == 0.75 and pot.b == 2.0
