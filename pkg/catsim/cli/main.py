"""
Main CLI application for the catsim simulator.
"""

import logging
import sys
from pathlib import Path
from typing import Any, Dict, FrozenSet, Iterable, List, NoReturn, Optional, Sequence

import click
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from .. import __version__
from ..config import get_settings
from ..core.errors import CatsimError
from ..models.experiment import ExperimentConfig, ExperimentParameters, ExperimentResult
from .acceptance import ROWS, RowReport, run_row, select_rows
from .experiments import Mutation, run_experiment
from .output import format_cell, write_result

console = Console()
err_console = Console(stderr=True)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_ACCEPTANCE = 2
EXIT_NUMERICAL = 3

_TOP_LEVEL = ("experiment", "seed", "output", "out", "format")


class CatsimGroup(click.Group):
    """Click group that reports usage errors with the validation exit code."""

    def main(self, *args: Any, **kwargs: Any) -> NoReturn:  # type: ignore[override]
        kwargs["standalone_mode"] = False
        try:
            result = super().main(*args, **kwargs)
        except click.ClickException as exc:
            exc.show()
            sys.exit(EXIT_VALIDATION)
        except click.Abort:
            err_console.print("[red]Aborted[/red]")
            sys.exit(EXIT_VALIDATION)
        sys.exit(result if isinstance(result, int) else EXIT_OK)


def configure_logging(verbose: bool) -> None:
    """Route every catsim logger through one rich handler."""
    level = logging.DEBUG if verbose else get_settings().log_level
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


def read_config_file(path: Path) -> Dict[str, str]:
    """Parse flat ``key = value`` lines; ``#`` starts a comment."""
    values: Dict[str, str] = {}
    for number, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{number}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ValueError(f"{path}:{number}: missing key")
        values[key.replace("-", "_")] = value
    return values


def parse_assignments(assignments: Iterable[str]) -> Dict[str, str]:
    """``key=value`` strings from repeated ``--param`` options."""
    values: Dict[str, str] = {}
    for assignment in assignments:
        if "=" not in assignment:
            raise click.BadParameter(f"expected key=value, got {assignment!r}", param_hint="--param")
        key, value = (part.strip() for part in assignment.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def parse_extra_options(args: Sequence[str]) -> Dict[str, str]:
    """Free-form ``--key value`` or ``--key=value`` parameter flags."""
    values: Dict[str, str] = {}
    tokens = list(args)
    while tokens:
        token = tokens.pop(0)
        if not token.startswith("--") or len(token) == 2:
            raise click.BadParameter(f"unexpected argument {token!r}")
        key = token[2:]
        if "=" in key:
            key, value = key.split("=", 1)
        elif tokens and not tokens[0].startswith("--"):
            value = tokens.pop(0)
        else:
            raise click.BadParameter(f"option {token!r} needs a value")
        values[key.replace("-", "_")] = value
    return values


def build_config(
    experiment: Optional[str],
    file_values: Dict[str, str],
    overrides: Dict[str, str],
    output: Optional[str],
    fmt: Optional[str],
    seed: Optional[int],
) -> ExperimentConfig:
    """Merge the config file, parameter flags and dedicated options; later wins."""
    values = {**file_values, **overrides}
    top = {key: values.pop(key) for key in _TOP_LEVEL if key in values}
    if "out" in top:
        top["output"] = top.pop("out")
    if experiment is not None:
        top["experiment"] = experiment
    if output is not None:
        top["output"] = output
    if fmt is not None:
        top["format"] = fmt
    if seed is not None:
        top["seed"] = seed
    if "experiment" not in top:
        raise click.BadParameter("name an experiment or set 'experiment' in the config file")
    return ExperimentConfig(parameters=ExperimentParameters(**values), **top)


def parse_mutations(values: Iterable[str]) -> FrozenSet[Mutation]:
    try:
        return frozenset(Mutation(value) for value in values)
    except ValueError:
        known = ", ".join(m.value for m in Mutation)
        raise click.BadParameter(f"known mutations: {known}", param_hint="--mutate") from None


def display_result(result: ExperimentResult, limit: int = 25) -> None:
    """Display the first rows of a result table."""
    table = Table(title=f"Experiment: {result.experiment.value}")
    for index, column in enumerate(result.columns):
        table.add_column(column, style="cyan" if index == 0 else "green")
    for row in result.rows[:limit]:
        table.add_row(*(format_cell(row.get(column)) for column in result.columns))
    console.print(table)
    if len(result.rows) > limit:
        console.print(f"[yellow]{len(result.rows) - limit} more rows in the result file[/yellow]")
    if result.paper_target:
        console.print(f"Target: {result.paper_target}")


def display_reports(reports: List[RowReport]) -> None:
    table = Table(title="Acceptance")
    table.add_column("Row", style="cyan")
    table.add_column("Check", style="cyan")
    table.add_column("Target")
    table.add_column("Achieved", style="green")
    table.add_column("Tolerance")
    table.add_column("Status")
    for report in reports:
        status = "[green]pass[/green]" if report.passed else "[red]FAIL[/red]"
        table.add_row(
            report.id, report.description, report.target,
            report.achieved, report.tolerance, status,
        )
    console.print(table)


@click.group(cls=CatsimGroup)
@click.version_option(version=__version__)
@click.option("--verbose", "-v", is_flag=True, help="Debug logging")
def app(verbose: bool) -> None:
    """
    Catsim CLI

    Reproduce the numerical experiments for coherent-state qubits: cat and
    Bell-cat measurements, teleported rotations, heralded cat sources and
    photon-loss codes.
    """
    configure_logging(verbose)


@app.command(context_settings={"ignore_unknown_options": True, "allow_extra_args": True})
@click.argument("experiment", required=False)
@click.option("--config", "config_file", type=click.Path(dir_okay=False), help="Flat key = value file")
@click.option("--param", "-p", "params", multiple=True, help="Parameter override key=value")
@click.option("--out", "-o", "output", type=click.Path(dir_okay=False), help="Result file")
@click.option("--format", "fmt", help="csv or json")
@click.option("--seed", type=int, help="Root seed")
@click.option("--mutate", multiple=True, help="Inject a known fault (zz-sign)")
@click.pass_context
def run(
    ctx: click.Context,
    experiment: Optional[str],
    config_file: Optional[str],
    params: Sequence[str],
    output: Optional[str],
    fmt: Optional[str],
    seed: Optional[int],
    mutate: Sequence[str],
) -> None:
    """Run one experiment and write its result rows."""
    try:
        file_values = read_config_file(Path(config_file)) if config_file else {}
        overrides = {**parse_extra_options(ctx.args), **parse_assignments(params)}
        config = build_config(experiment, file_values, overrides, output, fmt, seed)
        mutations = parse_mutations(mutate)
    except (ValidationError, click.BadParameter, ValueError, OSError) as e:
        err_console.print(f"[red]Invalid configuration: {e}[/red]")
        sys.exit(EXIT_VALIDATION)

    try:
        if config.output is None:
            result = run_experiment(config, mutations)
            click.echo(write_result(config, result), nl=False)
            return
        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            console=err_console,
        ) as progress:
            task = progress.add_task(f"Running {config.experiment.value}...", total=None)
            result = run_experiment(config, mutations)
            write_result(config, result)
            progress.update(task, description="Experiment finished")
        display_result(result)
        console.print(f"[green]Results saved to: {config.output}[/green]")
    except (ValidationError, ValueError) as e:
        err_console.print(f"[red]Invalid parameters: {e}[/red]")
        sys.exit(EXIT_VALIDATION)
    except CatsimError as e:
        err_console.print(f"[red]Numerical failure: {e}[/red]")
        sys.exit(EXIT_NUMERICAL)


@app.command()
@click.option("--list", "list_rows", is_flag=True, help="List row identifiers without running")
@click.option("--only", multiple=True, help="Run only these rows")
@click.option("--mutate", multiple=True, help="Inject a known fault (zz-sign)")
def verify(list_rows: bool, only: Sequence[str], mutate: Sequence[str]) -> None:
    """Run the acceptance table and report target against achieved."""
    if list_rows:
        for row in ROWS:
            click.echo(f"{row.id}\t{row.description}")
        return

    only = [item.strip() for value in only for item in value.split(",") if item.strip()]
    try:
        rows = select_rows(only)
        mutations = parse_mutations(mutate)
    except (click.BadParameter, ValueError) as e:
        err_console.print(f"[red]Invalid selection: {e}[/red]")
        sys.exit(EXIT_VALIDATION)

    reports = []
    try:
        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            console=err_console,
        ) as progress:
            task = progress.add_task("Verifying...", total=None)
            for row in rows:
                progress.update(task, description=f"Row {row.id}: {row.description}")
                reports.append(run_row(row, mutations))
    except CatsimError as e:
        display_reports(reports)
        err_console.print(f"[red]Numerical failure: {e}[/red]")
        sys.exit(EXIT_NUMERICAL)

    display_reports(reports)
    failed = [report.id for report in reports if not report.passed]
    if failed:
        err_console.print(f"[red]Failed rows: {', '.join(failed)}[/red]")
        sys.exit(EXIT_ACCEPTANCE)
    console.print(f"[green]All {len(reports)} rows passed[/green]")


if __name__ == "__main__":
    app()
