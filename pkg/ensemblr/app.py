"""Command-line interface.

    ensemblr run --config experiment.yaml --seed 3 --out out/seed-3
    ensemblr boundary --checkpoint out/checkpoints/training-2.json --out boundary.csv
    ensemblr oracle-check --suite all
    ensemblr bench --sizes 10,20,40
"""

import functools
import logging
import os
import sys

import click

from ensemblr import __version__
from ensemblr.estimates import load_checkpoint
from ensemblr.factory import will_arrive_estimate
from ensemblr.harness import (
    SUITES,
    dump_boundary,
    load_config,
    run_experiment,
    run_suites,
    write_boundary_csv,
    write_cutoffs_csv,
)
from ensemblr.heuristics import benchmark_selection
from ensemblr.sensors import PrometheusMonitor, init_metrics_server
from ensemblr.types.settings import Settings
from ensemblr.utils.errors import ConfigError, EnsemblrError, SchemaMismatchError
from ensemblr.utils.helpers import parse_list
from ensemblr.utils.logging import LOG_FORMATS, configure_logging

logger = logging.getLogger(__name__)

EXIT_FAILURE = 1
EXIT_USAGE = 2


def handle_errors(command):
    """End the command with a one-line diagnostic instead of a traceback."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except ConfigError as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_USAGE)
        except EnsemblrError as e:
            logger.debug("Command failed", exc_info=True)
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_FAILURE)

    return wrapper


def logging_options(command):
    command = click.option("--verbose", "-v", is_flag=True, help="Debug logs, instance dumps and tick traces.")(command)
    command = click.option(
        "--log-format",
        type=click.Choice(LOG_FORMATS),
        default=lambda: Settings.log_format,
        show_default="LOG_FORMAT setting",
    )(command)
    return command


@click.group()
@click.version_option(__version__, prog_name="ensemblr")
def cli():
    """Ensemble-based adaptation with learned estimates."""


@cli.command()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), help="YAML, JSON or TOML file.")
@click.option("--seed", type=int)
@click.option("--weeks", type=int)
@click.option("--late-fraction", type=float)
@click.option("--policy-schedule", help="Comma separated policy per week, e.g. rigid,ml,ml.")
@click.option("--out", type=click.Path(file_okay=False))
@click.option("--metrics-port", type=int, help="Expose Prometheus metrics while running.")
@logging_options
@handle_errors
def run(config_path, seed, weeks, late_fraction, policy_schedule, out, metrics_port, verbose, log_format):
    """Run an experiment and write its artifacts."""
    configure_logging(verbose, log_format)
    config = load_config(
        config_path,
        {
            "seed": seed,
            "weeks": weeks,
            "lateFraction": late_fraction,
            "policySchedule": policy_schedule,
            "out": out,
        },
    )
    sensor = None
    if metrics_port is not None or Settings.metrics_enabled:
        init_metrics_server(metrics_port)
        sensor = PrometheusMonitor()
    result = run_experiment(config, sensor=sensor)
    click.echo(f"{result.run_id} {result.out_dir}")


@cli.command()
@click.option("--checkpoint", required=True, type=click.Path(dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Grid CSV; cutoffs go next to it.")
@logging_options
@handle_errors
def boundary(checkpoint, out, verbose, log_format):
    """Dump the decision boundary of a will_arrive checkpoint."""
    configure_logging(verbose, log_format)
    estimate = will_arrive_estimate()
    name, model = load_checkpoint(checkpoint)
    if name != estimate.name:
        raise SchemaMismatchError(f"Checkpoint holds '{name}', not '{estimate.name}'")
    dump = dump_boundary(estimate, model)
    root, ext = os.path.splitext(out)
    write_boundary_csv(dump, out)
    write_cutoffs_csv(dump, f"{root}-cutoffs{ext or '.csv'}")
    click.echo(" ".join(f"{kind}={value}" for kind, value in dump.kind_cutoffs.items()))


@cli.command("oracle-check")
@click.option(
    "--suite",
    "suites",
    multiple=True,
    type=click.Choice(list(SUITES) + ["all"]),
    default=("all",),
    show_default=True,
)
@click.option("--seed", type=int, default=0, show_default=True)
@logging_options
@handle_errors
def oracle_check(suites, seed, verbose, log_format):
    """Compare fast implementations with brute-force oracles."""
    configure_logging(verbose, log_format)
    results = run_suites(suites, seed=seed)
    for result in results:
        click.echo(f"{result.name}: {result.cases} cases, {result.mismatches} mismatches")
    if not all(result.ok for result in results):
        sys.exit(EXIT_FAILURE)


@cli.command()
@click.option("--sizes", default="10,20,40,80,160", show_default=True)
@click.option("--trials", type=int, default=50, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--restarts", type=int, default=lambda: Settings.selection_restarts)
@logging_options
@handle_errors
def bench(sizes, trials, seed, restarts, verbose, log_format):
    """Time greedy against exact exclusive selection."""
    configure_logging(verbose, log_format)
    try:
        sizes = [int(size) for size in parse_list(sizes)]
    except ValueError as e:
        raise ConfigError(f"Invalid --sizes: {e}") from e
    click.echo("candidates,instances,trials,greedy_ms,exact_ms,feasible,greedy_solved,violations")
    for row in benchmark_selection(sizes, trials=trials, seed=seed, restarts=restarts):
        click.echo(
            f"{row.candidates},{row.instances},{row.trials},{row.greedy_ms:.4f},"
            f"{row.exact_ms:.4f},{row.feasible},{row.greedy_solved},{row.violations}"
        )


def main():
    cli(prog_name="ensemblr")
