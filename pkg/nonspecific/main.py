import logging
from collections.abc import Callable
from typing import Any

import click
from rich.console import Console
from rich.logging import RichHandler
from rich.traceback import install

from nonspecific.config import config
from nonspecific.errors import NonspecificError
from nonspecific.harness import FORMATS, Stage, load_scenario, render_report, run_pipeline
from nonspecific.harness.render import UnknownFormatError
from nonspecific.harness.scenario import ScenarioError
from nonspecific.search import InvalidOptionError
from nonspecific.utilities.helpers import DataValidationError

install(show_locals=False)

logger = logging.getLogger(__name__)

EXIT_VALIDATION = 1
EXIT_COMPUTATION = 2
U64_MAX = 2**64 - 1

VALIDATION_ERRORS = (ScenarioError, UnknownFormatError, InvalidOptionError, DataValidationError)

# CLI flag name -> SearchConfig field
OVERRIDES = {"seed": "rng_seed", "max_exhaustive": "max_exhaustive_n", "restarts": "restarts"}


def scenario_options(func: Callable[..., Any]) -> Callable[..., Any]:
    """Options shared by every subcommand."""
    decorators = [
        click.option(
            "--scenario",
            default="burglary",
            show_default=True,
            help="Scenario file, or the name of a bundled scenario.",
        ),
        click.option(
            "--format",
            "fmt",
            default="human",
            show_default=True,
            help=f"Report format: {' or '.join(FORMATS)}.",
        ),
        click.option("--seed", type=click.IntRange(0, U64_MAX), help="Seed of the random restarts."),
        click.option(
            "--max-exhaustive",
            type=click.IntRange(min=1),
            help="Largest evidence count searched exhaustively.",
        ),
        click.option("--restarts", type=click.IntRange(min=1), help="Number of hill-climbing starts."),
    ]
    for decorator in reversed(decorators):
        func = decorator(func)
    return func


def run_stage(until: Stage, scenario: str, fmt: str, overrides: dict[str, int | None]) -> None:
    """
    Load the scenario, apply the command line overrides, run the pipeline up to `until` and print the report.

    Exits with 1 on invalid input and 2 when a computation fails.
    """
    ctx = click.get_current_context()
    try:
        loaded = load_scenario(scenario)
        search = loaded.config
        for flag, value in overrides.items():
            if value is not None:
                search = search.updated(key=OVERRIDES[flag], value=value)
        loaded = loaded.model_copy(update={"config": search})
        if fmt not in FORMATS:
            raise UnknownFormatError(fmt)  # noqa: TRY301
        report = run_pipeline(loaded, until=until)
        click.echo(render_report(report, fmt), nl=False)
    except VALIDATION_ERRORS as exc:
        click.echo(f"Error: {exc}", err=True)
        ctx.exit(EXIT_VALIDATION)
    except NonspecificError as exc:
        click.echo(f"Error: {exc}", err=True)
        ctx.exit(EXIT_COMPUTATION)


@click.group()
@click.version_option(package_name="nonspecific")
@click.option("--log-level", default=None, help="Logging level, defaults to the configured LOG_LEVEL.")
def cli(log_level: str | None) -> None:
    """Cluster nonspecific evidence and estimate the number of events it refers to."""
    logging.basicConfig(
        level=(log_level or config.LOG_LEVEL).upper(),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True))],
    )


@cli.command()
@scenario_options
def partition(scenario: str, fmt: str, **overrides: int | None) -> None:
    """Find the partition of the evidence with the smallest metaconflict."""
    run_stage("partition", scenario, fmt, overrides)


@cli.command()
@scenario_options
def specify(scenario: str, fmt: str, **overrides: int | None) -> None:
    """Partition, then derive the membership and credibility of every piece of evidence."""
    run_stage("specify", scenario, fmt, overrides)


@cli.command()
@scenario_options
def posterior(scenario: str, fmt: str, **overrides: int | None) -> None:
    """Partition, specify and derive the posterior over the number of events."""
    run_stage("posterior", scenario, fmt, overrides)


@cli.command()
@scenario_options
def run(scenario: str, fmt: str, **overrides: int | None) -> None:
    """Run the full pipeline."""
    run_stage("posterior", scenario, fmt, overrides)
