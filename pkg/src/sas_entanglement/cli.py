"""Command-line interface: ``sas-orbits``."""

import sys
from collections.abc import Callable
from pathlib import Path
from typing import NoReturn

import click
from dotenv import load_dotenv
from rich.console import Console
from rich.table import Table

from sas_entanglement import __version__
from sas_entanglement.config import get_logger, get_settings, setup_logging
from sas_entanglement.exceptions import SASError
from sas_entanglement.models.api import ClassificationReport, RadiiReport
from sas_entanglement.models.domain import GridResult
from sas_entanglement.services.report_service import ReportService
from sas_entanglement.services.verification_service import SUITES, VerificationService
from sas_entanglement.workers.grid_builder import GridBuilder
from sas_entanglement.workers.grid_writer import to_csv_text, to_json, write_csv, write_json

logger = get_logger(__name__)

console = Console(stderr=True)

SEED = click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=None, help="Master RNG seed (default from configuration).")
OUTPUT = click.option("--output", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Write to a file instead of stdout.")
RESOLUTION = click.option("--resolution", type=click.IntRange(min=2), default=None, help="Grid points per triangle edge.")


def _format_option(default: str) -> Callable[[Callable[..., None]], Callable[..., None]]:
    return click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=default, show_default=True)


def _fail(error: SASError) -> NoReturn:
    console.print(f"[bold red]Error:[/bold red] {error}")
    sys.exit(2)


def _emit_text(text: str, output: Path | None) -> None:
    if output is None:
        click.echo(text, nl=not text.endswith("\n"))
        return
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8", newline="\n")
    console.print(f"Wrote {output}")


def _emit_grid(grid: GridResult, fmt: str, output: Path | None) -> None:
    if output is None:
        click.echo(to_json(grid) if fmt == "json" else to_csv_text(grid), nl=fmt == "json")
        return
    paths = [write_json(grid, output)] if fmt == "json" else write_csv(grid, output)
    for path in paths:
        console.print(f"Wrote {path}")


def _classification_table(report: ClassificationReport) -> Table:
    table = Table(title=f"{report.n_qubits}-qubit symmetric spectrum", show_header=False)
    table.add_row("spectrum", ", ".join(f"{v:.12g}" for v in report.spectrum))
    label = "max negativity" if report.max_negativity_kind == "closed_form" else "max negativity (lower bound)"
    table.add_row(label, f"{report.max_negativity:.12g}")
    if report.max_concurrence is not None:
        table.add_row("max concurrence", f"{report.max_concurrence:.12g}")
    if report.obs1_margin is not None:
        table.add_row("Dicke-mixture margin", f"{report.obs1_margin:.12g}")
    if report.obs1_lambda_min is not None:
        table.add_row("Dicke-mixture PT eigenvalue (closed form)", f"{report.obs1_lambda_min:.12g}")
    if report.obs1_pt_min is not None:
        table.add_row("Dicke-mixture PT minimum", f"{report.obs1_pt_min:.12g}")
    table.add_row("radius r", f"{report.radius:.12g}")
    verdict = f"{report.verdict} (boundary)" if report.on_boundary else report.verdict
    table.add_row("verdict", verdict)
    table.add_row("reason", report.reason)
    return table


def _radii_table(report: RadiiReport) -> Table:
    table = Table(title=f"Ball radii around rho_0, {report.n_qubits} qubits", show_header=False)
    for name in ("r_sas", "R_sas", "r_lower_bound", "r_sas_upper", "R_sas_upper", "estimate"):
        value = getattr(report, name)
        if value is not None:
            table.add_row(name, f"{value:.12g}")
    if report.estimate_bracket is not None:
        low, high = report.estimate_bracket
        table.add_row("R_sas bracket", f"[{low:.6f}, {high:.6f}]")
    for name, value in report.numerical.items():
        table.add_row(f"numerical {name}", f"{value:.12g}")
    return table


@click.group()
@click.version_option(__version__, prog_name="sas-orbits")
def cli() -> None:
    """Maximal entanglement over symmetric unitary orbits and symmetric absolute separability."""
    load_dotenv()
    try:
        setup_logging(get_settings().logging)
    except SASError as e:
        _fail(e)


@cli.command()
@click.argument("spectrum", nargs=-1, type=float, required=True)
@click.option("-n", "--n-qubits", type=click.Choice(["2", "3"]), default="2", show_default=True)
@SEED
@OUTPUT
@_format_option("json")
def classify(spectrum: tuple[float, ...], n_qubits: str, seed: int | None, output: Path | None, fmt: str) -> None:
    """Classify a symmetric spectrum (values may be unsorted)."""
    if fmt == "csv":
        raise click.UsageError("classify reports are JSON only")
    try:
        report = ReportService(seed).classify(spectrum, int(n_qubits))
    except SASError as e:
        _fail(e)
    if output is None:
        console.print(_classification_table(report))
    _emit_text(report.model_dump_json(indent=2), output)


def _figure_command(name: str, help_text: str) -> None:
    @cli.command(name=name, help=help_text)
    @RESOLUTION
    @SEED
    @OUTPUT
    @_format_option("csv")
    def command(resolution: int | None, seed: int | None, output: Path | None, fmt: str) -> None:
        try:
            builder = GridBuilder(seed=get_settings().orbit_search.seed if seed is None else seed)
            grid = getattr(builder, name)(resolution)
        except SASError as e:
            _fail(e)
        _emit_grid(grid, fmt, output)


_figure_command("fig1", "Maximal negativity over the (tau3, tau2) simplex, with the SAS boundary series.")
_figure_command("fig2", "Maximal negativity over the (tau3, r) wedge, with the SAS boundary series.")
_figure_command("fig3", "Three-qubit non-SAS region over (tau3, tau4), with the boundary radius series.")


@cli.command()
@click.option("-n", "--n-qubits", type=click.Choice(["2", "3"]), default="2", show_default=True)
@click.option("--estimate", is_flag=True, help="Run the Monte-Carlo R_SAS estimator (three qubits).")
@SEED
@OUTPUT
def radii(n_qubits: str, estimate: bool, seed: int | None, output: Path | None) -> None:
    """Closed-form ball radii and their numerical reproduction."""
    try:
        report = ReportService(seed).radii(int(n_qubits), estimate=estimate)
    except SASError as e:
        _fail(e)
    if output is None:
        console.print(_radii_table(report))
    _emit_text(report.model_dump_json(indent=2), output)


@cli.command()
@click.argument("suite", type=click.Choice([*SUITES, "all"]), default="all")
@click.option("--scale", type=click.Choice(["quick", "full"]), default="quick", show_default=True)
@SEED
@OUTPUT
def verify(suite: str, scale: str, seed: int | None, output: Path | None) -> None:
    """Run a property suite; exits 0 only when every check passes."""
    try:
        report = VerificationService(scale=scale, seed=get_settings().orbit_search.seed if seed is None else seed).run(suite)
    except SASError as e:
        _fail(e)

    table = Table(title=f"verify {suite} ({scale}, seed {report.seed})")
    table.add_column("check")
    table.add_column("samples", justify="right")
    table.add_column("max deviation", justify="right")
    table.add_column("result")
    for check in report.checks:
        deviation = "" if check.max_deviation is None else f"{check.max_deviation:.3e}"
        result = "[green]pass[/green]" if check.passed else "[red]FAIL[/red]"
        table.add_row(check.name, str(check.samples), deviation, result)
    console.print(table)

    _emit_text(report.model_dump_json(indent=2), output)
    if not report.passed:
        sys.exit(1)


if __name__ == "__main__":
    cli()
