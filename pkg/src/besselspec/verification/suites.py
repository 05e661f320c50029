"""Bundled verification suites.

Each suite runs one family of checks against a potential and returns a
:class:`SuiteReport` with one row per sample and an overall pass flag.
"""

import logging
import math
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from besselspec.krein.asymptotics import string_constant_identity
from besselspec.krein.transform import bessel_m_tilde, transformed_m
from besselspec.models.potential import PotentialSpec
from besselspec.scattering.jost import (
    companion_identity_gap,
    jost_function,
    wronskian_identity_gap,
)
from besselspec.scattering.reconstruction import roundtrip_report
from besselspec.spectral.eigen import eigenvalue
from besselspec.spectral.measure import asymptotics_report
from besselspec.spectral.weyl import weyl_m
from besselspec.utils.config import DEFAULT_SETTINGS, Settings, sweep
from besselspec.utils.exceptions import ValidationError

logger = logging.getLogger(__name__)


class Suite(str, Enum):
    """Names of the bundled suites."""

    THEOREM_MAIN = "theorem-main"
    EIGEN_ASYMP = "eigen-asymp"
    STRING_IDENTITY = "string-identity"
    ROUNDTRIP = "roundtrip"
    WRONSKIANS = "wronskians"


class SuiteReport(BaseModel):
    """Rows of one verification run.

    Attributes:
        name: Suite name
        rows: One record per sample, real-valued columns only
        passed: Whether every criterion of the suite held
        criterion: Human-readable statement of the criterion
    """

    name: Suite
    rows: list[dict[str, float]]
    passed: bool
    criterion: str

    model_config = ConfigDict(frozen=True)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows)


def theorem_main(
    pot: PotentialSpec,
    magnitudes: Sequence[float] = (1e2, 1e3, 1e4),
    tolerance: float = 0.05,
    density_tolerance: float = 0.02,
    settings: Optional[Settings] = None,
) -> SuiteReport:
    """Im m(iy) / Im m_l(iy) and the density ratio approach one."""
    report = asymptotics_report(pot, magnitudes=magnitudes, settings=settings)
    rows = []
    for j, y in enumerate(report.magnitudes):
        row = {"y": y, "m_re": report.m[j].real, "m_im": report.m[j].imag, "im_ratio": report.im_ratio[j]}
        if report.density_ratio is not None:
            row["density_ratio"] = report.density_ratio[j]
        rows.append(row)
    passed = report.converging and abs(report.im_ratio[-1] - 1) <= tolerance
    if report.density_ratio is not None:
        passed = passed and abs(report.density_ratio[-1] - 1) <= density_tolerance
    return SuiteReport(
        name=Suite.THEOREM_MAIN,
        rows=rows,
        passed=passed,
        criterion=f"|Im m / Im m_l - 1| <= {tolerance:g} at the largest y and decreasing",
    )


def eigen_asymptotics(
    pot: PotentialSpec,
    ns: Sequence[int] = (5, 10, 20),
    tolerance: float = 0.02,
    settings: Optional[Settings] = None,
) -> SuiteReport:
    """n / sqrt(lambda_n) against b / pi on (0, b), b = 1 for half-line input."""
    settings = settings or DEFAULT_SETTINGS
    if pot.half_line:
        pot = pot.on_interval(1.0)
    target = pot.b / math.pi
    lams = sweep(lambda n: eigenvalue(pot, n, settings=settings), ns, settings)
    rows = []
    for n, lam in zip(ns, lams):
        ratio = n / math.sqrt(lam)
        rows.append({"n": n, "lambda": lam, "ratio": ratio, "target": target, "rel_gap": abs(ratio / target - 1)})
    return SuiteReport(
        name=Suite.EIGEN_ASYMP,
        rows=rows,
        passed=rows[-1]["rel_gap"] < tolerance,
        criterion=f"|n / sqrt(lambda_n) - b / pi| < {tolerance:.0%} of b / pi at n = {ns[-1]}",
    )


DEFAULT_STRING_SAMPLES = tuple(
    r * complex(math.cos(a), math.sin(a))
    for r in (2.0, 10.0, 50.0, 200.0)
    for a in (math.pi / 4, 3 * math.pi / 4)
)


def string_identity(
    pot: PotentialSpec,
    zs: Sequence[complex] = DEFAULT_STRING_SAMPLES,
    tolerance: float = 1e-6,
    settings: Optional[Settings] = None,
) -> SuiteReport:
    """String m-function of the transformed problem against the Bessel-side m~.

    Raises:
        ValidationError: If l >= 1/2
    """
    settings = settings or DEFAULT_SETTINGS
    if not pot.angular.limit_circle:
        raise ValidationError("the string identity needs l < 1/2")

    def pair(z: complex) -> tuple[complex, complex]:
        return transformed_m(pot, z, settings=settings), bessel_m_tilde(pot, z, settings=settings)

    rows = []
    for z, (M, m_tilde) in zip(zs, sweep(pair, zs, settings)):
        gap = abs(M - m_tilde) / abs(m_tilde)
        rows.append(
            {"z_re": z.real, "z_im": z.imag, "M_re": M.real, "M_im": M.imag,
             "m_tilde_re": m_tilde.real, "m_tilde_im": m_tilde.imag, "rel_gap": gap}
        )
    passed = max(r["rel_gap"] for r in rows) < tolerance
    if -0.5 < pot.l < 0.5:
        lhs, middle, rhs = string_constant_identity(pot.l)
        constant_gap = max(abs(lhs - rhs), abs(middle - rhs))
        rows.append({"constant_lhs": lhs, "constant_middle": middle, "constant_rhs": rhs, "rel_gap": constant_gap})
        passed = passed and constant_gap < 1e-10
    return SuiteReport(
        name=Suite.STRING_IDENTITY,
        rows=rows,
        passed=passed,
        criterion=f"|M(z) - m~(z)| < {tolerance:g} |m~(z)| on every sample",
    )


def roundtrip(
    pot: PotentialSpec,
    k_eval: Sequence[float] = tuple(np.linspace(0.5, 20.0, 12)),
    table_top: float = 400.0,
    table_nodes: int = 800,
    tolerance: float = 0.01,
    settings: Optional[Settings] = None,
) -> SuiteReport:
    """|f| rebuilt from the phase shift and bound states against |f| itself."""
    result = roundtrip_report(pot, k_eval, table_top, table_nodes, settings=settings)
    errors = np.abs(result.modulus - result.reference) / result.reference
    rows = [
        {"k": k, "reconstructed": a, "direct": b, "rel_err": e}
        for k, a, b, e in zip(result.k, result.modulus, result.reference, errors)
    ]
    return SuiteReport(
        name=Suite.ROUNDTRIP,
        rows=rows,
        passed=bool(np.max(errors) < tolerance),
        criterion=f"reconstructed |f| within {tolerance:.0%} of the direct value",
    )


def wronskians(
    pot: PotentialSpec,
    k_grid: Sequence[float] = tuple(np.geomspace(1.0, 50.0, 8)),
    settings: Optional[Settings] = None,
) -> SuiteReport:
    """Wronskian identities, unitarity of S and Im m(k^2) = k / |f(k)|^2."""
    settings = settings or DEFAULT_SETTINGS

    def row(k: float) -> dict[str, float]:
        value = jost_function(pot, k, settings=settings)
        S = value.f.conjugate() / value.f
        im_m = weyl_m(pot, complex(k * k, 1e-9 * k * k), settings=settings).m.imag
        return {
            "k": k,
            "wronskian_gap": wronskian_identity_gap(pot, k, settings),
            "companion_gap": companion_identity_gap(value),
            "unitarity_gap": abs(abs(S) - 1),
            "im_m_gap": abs(im_m * abs(value.f) ** 2 / k - 1),
        }

    rows = sweep(row, [float(k) for k in k_grid], settings)
    passed = all(
        r["wronskian_gap"] < 1e-8 and r["companion_gap"] < 1e-8 and r["unitarity_gap"] < 1e-10 and r["im_m_gap"] < 0.01
        for r in rows
    )
    return SuiteReport(
        name=Suite.WRONSKIANS,
        rows=rows,
        passed=passed,
        criterion="W(f(-k), f(k)) = 2ik, Im(conj(f) g) = -k, |S| = 1, Im m(k^2) = k / |f|^2",
    )


SUITES: dict[Suite, Callable[..., SuiteReport]] = {
    Suite.THEOREM_MAIN: theorem_main,
    Suite.EIGEN_ASYMP: eigen_asymptotics,
    Suite.STRING_IDENTITY: string_identity,
    Suite.ROUNDTRIP: roundtrip,
    Suite.WRONSKIANS: wronskians,
}


def run_suite(name: Suite | str, pot: PotentialSpec, settings: Optional[Settings] = None) -> SuiteReport:
    """Run a bundled suite by name with its default samples.

    Raises:
        ValidationError: For an unknown suite name
    """
    try:
        suite = Suite(name)
    except ValueError as e:
        choices = ", ".join(s.value for s in Suite)
        raise ValidationError(f"Unknown suite {name!r}; choose one of {choices}") from e
    report = SUITES[suite](pot, settings=settings)
    logger.info("suite %s: %s", suite.value, "passed" if report.passed else "FAILED")
    return report
