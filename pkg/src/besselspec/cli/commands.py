"""Command-line interface for besselspec."""

import json
import sys
from enum import Enum
from pathlib import Path
from typing import Any, Optional, Sequence

import click
import numpy as np
import pandas as pd
import typer
from rich import print as rprint
from rich.console import Console
from rich.table import Table

try:  # typer >= 0.26 raises exceptions from its bundled copy of click
    from typer._click import exceptions as _typer_click_exc
except ImportError:  # older typer uses the installed click directly
    from click import exceptions as _typer_click_exc

from besselspec.cli.config import Number, OutputFormat, RunConfig, parse_sweep
from besselspec.krein.asymptotics import free_limit_order, limit_order
from besselspec.krein.string import power_string
from besselspec.krein.transform import liouville_transform
from besselspec.models.base import GridSpec, MRoute
from besselspec.scattering.jost import jost_function
from besselspec.scattering.phase import phase_shift, s_matrix
from besselspec.scattering.reconstruction import roundtrip_report
from besselspec.scattering.uniqueness import uniqueness_compare
from besselspec.solutions.ode import regular_solution, theta_solution
from besselspec.specfun.free import model_density, model_rho
from besselspec.spectral.eigen import eigen_count, eigenvalues, norming_constants
from besselspec.spectral.measure import spectral_density, spectral_function
from besselspec.spectral.weyl import weyl_m
from besselspec.utils.constants import CSV_FLOAT_FORMAT, LIMIT_ORDER_WINDOW, ODE_ATOL, ODE_RTOL
from besselspec.utils.exceptions import BesselSpecError, NumericalError, ValidationError
from besselspec.utils.logging import configure_logging
from besselspec.verification.suites import Suite, run_suite

app = typer.Typer(
    name="besselspec",
    help="Spectral and scattering data of perturbed spherical Schrodinger (Bessel) operators",
    add_completion=False,
)

console = Console(stderr=True)


class LogLevel(str, Enum):
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"


Q_OPTION = typer.Option("free", "--q", help="Potential document (.json) or inline form, e.g. well:-1,1")
L_OPTION = typer.Option(None, "--l", help="Angular momentum (overrides the document)")
B_OPTION = typer.Option(None, "--b", help="Right endpoint; the half-line when omitted")


@app.callback()
def options(
    ctx: typer.Context,
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Output file (stdout by default)"),
    fmt: OutputFormat = typer.Option(OutputFormat.CSV, "--format", "-f", help="Output format"),
    log_level: LogLevel = typer.Option(LogLevel.WARNING, "--log-level", case_sensitive=False, help="Log level"),
    threads: Optional[int] = typer.Option(None, "--threads", min=1, help="Parallel sweep width"),
    rtol: float = typer.Option(ODE_RTOL, "--rtol", min=1e-15, help="ODE relative tolerance"),
    atol: float = typer.Option(ODE_ATOL, "--atol", help="ODE absolute tolerance, positive"),
):
    """Spectral and scattering toolkit for Bessel operators."""
    if atol <= 0:
        raise typer.BadParameter("must be positive", param_hint="--atol")
    configure_logging(log_level.value)
    ctx.obj = {"output": output, "format": fmt, "threads": threads, "rtol": rtol, "atol": atol}


# helpers


def _config(
    ctx: typer.Context, q: str, l: Optional[float], b: Optional[float], **sweeps: Optional[str]
) -> RunConfig:
    parsed: dict[str, list[Number]] = {}
    for name, text in sweeps.items():
        if text is None:
            continue
        try:
            parsed[name] = parse_sweep(text)
        except ValidationError as e:
            raise typer.BadParameter(str(e), param_hint=f"--{name.replace('_', '-')}") from e
    try:
        return RunConfig(potential=q, l=l, b=b, command=ctx.info_name, sweeps=parsed, **ctx.obj)
    except ValueError as e:
        raise ValidationError(f"Invalid run configuration: {e}") from e


def _real(cfg: RunConfig, name: str, positive: bool = False) -> list[float]:
    values = cfg.sweeps[name]
    if any(isinstance(v, complex) for v in values):
        raise typer.BadParameter("values must be real", param_hint=f"--{name}")
    if positive and any(v <= 0 for v in values):
        raise typer.BadParameter("values must be positive", param_hint=f"--{name}")
    return [float(v) for v in values]


def _grid(cfg: RunConfig, name: str = "x") -> GridSpec:
    xs = sorted(set(_real(cfg, name, positive=True)))
    if len(xs) == 1:
        xs = [xs[0] / 2, xs[0]]
    return GridSpec.custom(xs)


def _window(text: Optional[str], hint: str) -> Optional[tuple[float, float]]:
    if text is None:
        return None
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError as e:
        raise typer.BadParameter(f"{text!r} is not a pair of numbers", param_hint=hint) from e
    if len(values) != 2:
        raise typer.BadParameter("give the window as lo,hi", param_hint=hint)
    return values[0], values[1]


def _split(name: str, value: complex) -> dict[str, float]:
    value = complex(value)
    return {f"{name}_re": value.real, f"{name}_im": value.imag}


def _emit(cfg: RunConfig, rows: Sequence[dict[str, Any]]) -> None:
    """Write rows as CSV (17 significant digits) or JSON, in input order."""
    rows = [{key: (float(v) if isinstance(v, (np.floating, np.integer)) else v) for key, v in r.items()} for r in rows]
    if cfg.format is OutputFormat.JSON:
        text = json.dumps(rows, indent=2) + "\n"
    else:
        text = pd.DataFrame(rows).to_csv(index=False, float_format=CSV_FLOAT_FORMAT)
    if cfg.output is not None:
        cfg.output.write_text(text)
    else:
        typer.echo(text, nl=False)


# solutions


@app.command()
def phi(
    ctx: typer.Context,
    q: str = Q_OPTION,
    l: Optional[float] = L_OPTION,
    b: Optional[float] = B_OPTION,
    z: str = typer.Option(..., "--z", help="Spectral parameters, e.g. 1+1i,2"),
    x: str = typer.Option(..., "--x", help="Positions, e.g. 0.1:1:10"),
    method: str = typer.Option("ode", "--method", help="ode or volterra"),
):
    """Regular solution phi(z, x) and its derivative."""
    cfg = _config(ctx, q, l, b, z=z, x=x)
    pot, settings, grid = cfg.load_potential(), cfg.settings(), _grid(cfg)
    rows = []
    for zz in cfg.sweeps["z"]:
        sample = regular_solution(pot, zz, grid, method, settings)
        for xx, v, dv in zip(sample.x, sample.values, sample.derivs):
            rows.append({**_split("z", zz), "x": xx, **_split("phi", v), **_split("dphi", dv)})
    _emit(cfg, rows)


@app.command()
def theta(
    ctx: typer.Context,
    q: str = Q_OPTION,
    l: Optional[float] = L_OPTION,
    b: Optional[float] = B_OPTION,
    z: str = typer.Option(..., "--z", help="Spectral parameters"),
    x: str = typer.Option(..., "--x", help="Positions"),
    allow_ambiguous: bool = typer.Option(False, "--allow-ambiguous", help="Accept the free-data continuation"),
):
    """Non-principal solution theta(z, x) and its derivative."""
    cfg = _config(ctx, q, l, b, z=z, x=x)
    pot, settings, grid = cfg.load_potential(), cfg.settings(), _grid(cfg)
    rows = []
    for zz in cfg.sweeps["z"]:
        sample = theta_solution(pot, zz, grid, allow_ambiguous, settings)
        for xx, v, dv in zip(sample.x, sample.values, sample.derivs):
            rows.append(
                {**_split("z", zz), "x": xx, **_split("theta", v), **_split("dtheta", dv), "route": sample.route}
            )
    _emit(cfg, rows)


# spectral


@app.command()
def jost(
    ctx: typer.Context,
    q: str = Q_OPTION,
    l: Optional[float] = L_OPTION,
    k: str = typer.Option(..., "--k", help="Momenta with Im k >= 0"),
):
    """Jost function f(k) and its companion g(k)."""
    cfg = _config(ctx, q, l, None, k=k)
    pot, settings = cfg.load_potential(), cfg.settings()
    rows = []
    for kk in cfg.sweeps["k"]:
        value = jost_function(pot, kk, settings=settings)
        g = value.g if value.g is not None else complex("nan")
        rows.append({**_split("k", kk), **_split("f", value.f), **_split("g", g), "spread": value.spread})
    _emit(cfg, rows)


@app.command()
def m(
    ctx: typer.Context,
    q: str = Q_OPTION,
    l: Optional[float] = L_OPTION,
    b: Optional[float] = B_OPTION,
    z: str = typer.Option(..., "--z", help="Nonreal spectral parameters"),
    route: MRoute = typer.Option(MRoute.JOST, "--route", help="jost, truncated or string"),
    c: float = typer.Option(1.0, "--c", help="Cut-off of the truncated route"),
    beta: float = typer.Option(0.0, "--beta", help="Boundary angle at b"),
):
    """Singular Weyl m-function."""
    cfg = _config(ctx, q, l, b, z=z)
    pot, settings = cfg.load_potential(), cfg.settings()
    rows = []
    for zz in cfg.sweeps["z"]:
        sample = weyl_m(pot, zz, route, c=c, beta=beta, settings=settings)
        rows.append({**_split("z", sample.z), **_split("m", sample.m), "route": sample.route.value})
    _emit(cfg, rows)


@app.command()
def density(
    ctx: typer.Context,
    q: str = Q_OPTION,
    l: Optional[float] = L_OPTION,
    lam: str = typer.Option(..., "--lam", help="Positive energies"),
):
    """Spectral density sqrt(lambda) / (pi |f|^2) against the free density."""
    cfg = _config(ctx, q, l, None, lam=lam)
    pot, settings = cfg.load_potential(), cfg.settings()
    energies = _real(cfg, "lam", positive=True)
    values = spectral_density(pot, energies, settings)
    free = model_density(pot.l, np.asarray(energies))
    _emit(cfg, [{"lam": e, "density": d, "model_density": f} for e, d, f in zip(energies, values, free)])


@app.command()
def rho(
    ctx: typer.Context,
    q: str = Q_OPTION,
    l: Optional[float] = L_OPTION,
    b: Optional[float] = B_OPTION,
    lam: str = typer.Option(..., "--lam", help="Energies"),
):
    """Spectral function rho(lambda), normalized by rho(0) = 0."""
    cfg = _config(ctx, q, l, b, lam=lam)
    pot, settings = cfg.load_potential(), cfg.settings()
    rows = [
        {"lam": e, "rho": spectral_function(pot, e, settings), "model_rho": model_rho(pot.l, e)}
        for e in _real(cfg, "lam")
    ]
    _emit(cfg, rows)


def _eigenvalues(cfg: RunConfig, window: Optional[str], count: Optional[int], beta: float):
    pot, settings = cfg.load_potential(), cfg.settings()
    bounds = _window(window, "--window")
    lams = eigenvalues(pot, window=bounds, beta=beta, count=count, settings=settings)
    first = eigen_count(pot, bounds[0], beta, settings) + 1 if bounds else 1
    return pot, settings, lams, range(first, first + lams.size)


@app.command()
def eigen(
    ctx: typer.Context,
    q: str = Q_OPTION,
    l: Optional[float] = L_OPTION,
    b: Optional[float] = B_OPTION,
    window: Optional[str] = typer.Option(None, "--window", help="Energy window lo,hi"),
    count: Optional[int] = typer.Option(None, "--count", min=1, help="Lowest eigenvalues to compute"),
    beta: float = typer.Option(0.0, "--beta", help="Boundary angle at b"),
):
    """Eigenvalues by Prufer shooting."""
    cfg = _config(ctx, q, l, b)
    _, _, lams, indices = _eigenvalues(cfg, window, count, beta)
    _emit(cfg, [{"n": n, "lambda": lam} for n, lam in zip(indices, lams)])


@app.command()
def norming(
    ctx: typer.Context,
    q: str = Q_OPTION,
    l: Optional[float] = L_OPTION,
    b: Optional[float] = B_OPTION,
    window: Optional[str] = typer.Option(None, "--window", help="Energy window lo,hi"),
    count: Optional[int] = typer.Option(None, "--count", min=1, help="Lowest eigenvalues to compute"),
):
    """Eigenvalues with their norming constants."""
    cfg = _config(ctx, q, l, b)
    pot, settings, lams, indices = _eigenvalues(cfg, window, count, 0.0)
    gammas = norming_constants(pot, lams, settings) if lams.size else []
    _emit(cfg, [{"n": n, "lambda": lam, "gamma": g} for n, lam, g in zip(indices, lams, gammas)])


# scattering


@app.command()
def phase(
    ctx: typer.Context,
    q: str = Q_OPTION,
    l: Optional[float] = L_OPTION,
    k: str = typer.Option(..., "--k", help="Increasing positive momenta"),
):
    """Continuous phase shift, delta -> 0 at the top of the grid."""
    cfg = _config(ctx, q, l, None, k=k)
    ks = _real(cfg, "k", positive=True)
    delta = phase_shift(cfg.load_potential(), ks, cfg.settings())
    _emit(cfg, [{"k": kk, "delta": d} for kk, d in zip(ks, delta)])


@app.command()
def smatrix(
    ctx: typer.Context,
    q: str = Q_OPTION,
    l: Optional[float] = L_OPTION,
    k: str = typer.Option(..., "--k", help="Positive momenta"),
):
    """Scattering matrix S(k) = conj(f) / f."""
    cfg = _config(ctx, q, l, None, k=k)
    ks = _real(cfg, "k", positive=True)
    S = s_matrix(cfg.load_potential(), ks, cfg.settings())
    _emit(cfg, [{"k": kk, **_split("S", s)} for kk, s in zip(ks, S)])


@app.command()
def reconstruct(
    ctx: typer.Context,
    q: str = Q_OPTION,
    l: Optional[float] = L_OPTION,
    k: str = typer.Option("0.5:20:12", "--k", help="Evaluation momenta"),
    table_top: float = typer.Option(400.0, "--table-top", min=1.0, help="Top of the phase table"),
    table_nodes: int = typer.Option(800, "--table-nodes", min=4, help="Phase table size"),
    bound_states: bool = typer.Option(True, "--bound-states/--no-bound-states", help="Include bound-state factors"),
):
    """Rebuild |f| from the phase shift and compare with the direct value."""
    cfg = _config(ctx, q, l, None, k=k)
    ks = _real(cfg, "k", positive=True)
    result = roundtrip_report(cfg.load_potential(), ks, table_top, table_nodes, bound_states, cfg.settings())
    rows = [
        {"k": kk, "reconstructed": a, "direct": d, "rel_err": abs(a - d) / d}
        for kk, a, d in zip(result.k, result.modulus, result.reference)
    ]
    _emit(cfg, rows)
    console.print(f"[bold]max rel. err:[/bold] {result.max_rel_error:.3e}")


# krein


@app.command()
def krein(
    ctx: typer.Context,
    q: str = Q_OPTION,
    l: Optional[float] = L_OPTION,
    b: Optional[float] = B_OPTION,
    beta: float = typer.Option(0.0, "--beta", help="Boundary angle at the right end"),
    every: int = typer.Option(10, "--every", min=1, help="Emit every n-th node"),
):
    """Liouville transform onto a Krein string."""
    cfg = _config(ctx, q, l, b)
    sm = liouville_transform(cfg.load_potential(), beta=beta, settings=cfg.settings())
    idx = np.unique(np.append(np.arange(0, sm.t.size, every), sm.t.size - 1))
    rows = [
        {"x": sm.t[j], "xi": sm.xi[j], "R": sm.R[j], "r": sm.r[j], "theta0": sm.theta0[j]}
        for j in idx
    ]
    _emit(cfg, rows)
    console.print(f"a = {sm.a:.10g}, beta~ = {sm.beta_tilde:.10g}, lambda0 = {sm.lambda0:.6g}")


@app.command("limit-order")
def limit_order_command(
    ctx: typer.Context,
    q: str = Q_OPTION,
    l: Optional[float] = L_OPTION,
    power: Optional[float] = typer.Option(None, "--power", help="Use the string R = xi^alpha instead"),
    window: Optional[str] = typer.Option(None, "--window", help="Window lo,hi of the ratio estimates"),
):
    """Limit order of the string mass function at zero."""
    cfg = _config(ctx, q, l, None)
    bounds = _window(window, "--window") or LIMIT_ORDER_WINDOW
    if power is not None:
        sm = power_string(power)
        expected = power
    else:
        pot = cfg.load_potential()
        sm = liouville_transform(pot, settings=cfg.settings())
        expected = free_limit_order(pot.l)
    lod = limit_order(sm.xi, sm.R, bounds)
    _emit(cfg, [{"alpha": lod.alpha, "spread": lod.spread, "nu": lod.nu, "expected": expected}])


# verification


@app.command()
def verify(
    ctx: typer.Context,
    suite: Suite = typer.Argument(..., help="Suite to run"),
    q: str = Q_OPTION,
    l: Optional[float] = L_OPTION,
    b: Optional[float] = B_OPTION,
):
    """Run a bundled verification suite; exit code 2 when it fails."""
    cfg = _config(ctx, q, l, b)
    report = run_suite(suite, cfg.load_potential(), cfg.settings())
    if cfg.format is OutputFormat.JSON:
        text = report.model_dump_json(indent=2) + "\n"
        if cfg.output is not None:
            cfg.output.write_text(text)
        else:
            typer.echo(text, nl=False)
    else:
        _emit(cfg, report.rows)

    table = Table(title="Verification", show_header=True)
    table.add_column("Suite", style="cyan", no_wrap=True)
    table.add_column("Criterion", style="magenta")
    table.add_column("Result")
    table.add_row(report.name.value, report.criterion, "[green]passed[/green]" if report.passed else "[red]failed[/red]")
    console.print(table)
    if not report.passed:
        raise typer.Exit(code=2)


@app.command()
def compare(
    ctx: typer.Context,
    q: str = Q_OPTION,
    q2: str = typer.Option(..., "--q2", help="Second potential"),
    l: Optional[float] = L_OPTION,
    c: float = typer.Option(1.0, "--c", help="Compare the potentials on (0, c)"),
    k: str = typer.Option("0.5:20:80", "--k", help="Momenta for the phase shifts"),
    lam: str = typer.Option("1,4,16,64", "--lam", help="Energies for the densities"),
):
    """Compare two potentials through their spectral and scattering data."""
    cfg = _config(ctx, q, l, None, k=k, lam=lam)
    other = cfg.model_copy(update={"potential": q2}).load_potential()
    report = uniqueness_compare(
        cfg.load_potential(),
        other,
        c,
        _real(cfg, "k", positive=True),
        _real(cfg, "lam", positive=True),
        settings=cfg.settings(),
    )
    row = report.model_dump()
    row.update(
        data_differ=report.data_differ,
        potentials_differ=report.potentials_differ,
        consistent=report.consistent,
    )
    _emit(cfg, [row])


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and map failures to exit codes.

    Returns:
        0 on success, 1 for usage and validation errors, 2 for numerical failures
    """
    try:
        result = app(args=list(argv) if argv is not None else None, standalone_mode=False)
    except (click.UsageError, _typer_click_exc.UsageError) as e:
        rprint(f"[red]Usage error: {e.format_message()}[/red]", file=sys.stderr)
        return 1
    except (click.Abort, _typer_click_exc.Abort):
        return 1
    except NumericalError as e:
        rprint(f"[red]Numerical error ({type(e).__name__}): {e}[/red]", file=sys.stderr)
        return 2
    except BesselSpecError as e:
        rprint(f"[red]Error ({type(e).__name__}): {e}[/red]", file=sys.stderr)
        return 1
    return result if isinstance(result, int) else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
