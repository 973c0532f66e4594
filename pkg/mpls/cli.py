"""
Command-line front end.

Every subcommand writes plot-ready CSV files plus a `run.json` manifest to
--out. Flags override MPLS_* settings, which override built-in defaults.
"""

import logging
from pathlib import Path
from typing import Optional

import click
from pydantic import ValidationError

from mpls.core.config import get_settings
from mpls.core.errors import MplsError
from mpls.core.logging import configure_logging
from mpls.handlers.experiments import (
    run_gen,
    run_lsq_benchmark,
    run_phase_ensemble,
    run_puiseux_convergence,
    run_scores,
)
from mpls.handlers.generation import generate
from mpls.handlers.ingestion import read_numeric_mm, read_puiseux, write_record
from mpls.models.experiment import ExperimentConfig, ExperimentRecord, Regime

logger = logging.getLogger(__name__)

REGIMES = [regime.value for regime in Regime]


def _parse_r_grid(_ctx, _param, value: Optional[str]) -> Optional[list[int]]:
    if value is None:
        return None
    try:
        grid = [int(r) for r in value.split(",") if r.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}")
    if not grid:
        raise click.BadParameter("empty sample-size grid")
    return grid


def _build_config(
    n: Optional[int],
    d: Optional[int],
    regime: str,
    seed: Optional[int],
    full_scale: bool,
    **extra,
) -> ExperimentConfig:
    settings = get_settings()
    default_n, default_d = (
        (settings.full_scale_n, settings.full_scale_d) if full_scale else (settings.default_n, settings.default_d)
    )
    try:
        return ExperimentConfig(
            regime=Regime(regime),
            n=n if n is not None else default_n,
            d=d if d is not None else default_d,
            seed=seed if seed is not None else settings.default_seed,
            **{key: value for key, value in extra.items() if value is not None},
        )
    except ValidationError as exc:
        raise click.UsageError(str(exc))


def _emit(record: ExperimentRecord, out: Optional[Path], subcommand: str) -> None:
    out_dir = out if out is not None else get_settings().output_dir / subcommand
    try:
        paths = write_record(record, out_dir)
    except OSError as exc:
        raise click.ClickException(f"cannot write to {out_dir}: {exc}")
    for path in paths:
        click.echo(str(path))


def _run(fn, *args, **kwargs) -> ExperimentRecord:
    try:
        return fn(*args, **kwargs)
    except MplsError as exc:
        raise click.ClickException(str(exc))


def generation_options(command):
    for option in reversed(
        [
            click.option("--n", type=int, default=None, help="Rows (default MPLS_DEFAULT_N)."),
            click.option("--d", type=int, default=None, help="Columns including y (default MPLS_DEFAULT_D)."),
            click.option("--regime", type=click.Choice(REGIMES), default=Regime.INCOHERENT.value, show_default=True),
            click.option("--seed", type=int, default=None, help="Run seed (default MPLS_DEFAULT_SEED)."),
            click.option("--full-scale", is_flag=True, help="Use MPLS_FULL_SCALE_N x MPLS_FULL_SCALE_D."),
        ]
    ):
        command = option(command)
    return command


out_option = click.option(
    "--out", type=click.Path(file_okay=False, path_type=Path), default=None, help="Output directory."
)
workers_option = click.option("--workers", type=click.IntRange(min=1), default=None, help="Worker threads.")


@click.group()
@click.option("--log-level", default=None, help="Override MPLS_LOG_LEVEL.")
@click.version_option(package_name="mpls")
def cli(log_level: Optional[str]) -> None:
    """Max-plus approximations of statistical leverage scores."""
    configure_logging(log_level or get_settings().effective_log_level)


@cli.command()
@generation_options
@out_option
def gen(n, d, regime, seed, full_scale, out):
    """Generate a test matrix and write it as Matrix Market."""
    config = _build_config(n, d, regime, seed, full_scale)
    _emit(_run(run_gen, config), out, "gen")


@cli.command()
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
              help="Matrix Market file; a matrix is generated when omitted.")
@generation_options
@out_option
def scores(input_path, n, d, regime, seed, full_scale, out):
    """Compare exact, max-plus, CNRN and uniform row distributions."""
    if input_path is not None:
        a = _run(read_numeric_mm, input_path)
        seed = seed if seed is not None else get_settings().default_seed
        record = _run(run_scores, a, seed=seed, config={"input": str(input_path)})
    else:
        config = _build_config(n, d, regime, seed, full_scale)
        a = _run(generate, config)
        record = _run(run_scores, a, seed=config.seed, config=config.model_dump(mode="json"))
    _emit(record, out, "scores")


@cli.command("lsq-bench")
@generation_options
@click.option("--r-grid", callback=_parse_r_grid, default=None, help="Comma-separated sample sizes.")
@click.option("--trials", type=click.IntRange(min=1), default=None)
@click.option("--score-source", type=click.Choice(["augmented", "design"]), default="augmented", show_default=True,
              help="Score [B, y] or B alone.")
@workers_option
@out_option
def lsq_bench(n, d, regime, seed, full_scale, r_grid, trials, score_source, workers, out):
    """Sampled least-squares error curves for every sampling method."""
    settings = get_settings()
    config = _build_config(
        n,
        d,
        regime,
        seed,
        full_scale,
        r_grid=r_grid or settings.r_grid(),
        trials=trials or settings.default_trials,
        workers=workers or settings.workers,
        score_source=score_source,
    )
    _emit(_run(run_lsq_benchmark, config), out, "lsq-bench")


@cli.command("puiseux-converge")
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True,
              help="Puiseux matrix text file.")
@click.option("--z-min", type=float, default=1e-6, show_default=True)
@click.option("--points", type=int, default=9, show_default=True)
@click.option("--coefficients", type=click.Choice(["as-given", "random"]), default="as-given", show_default=True)
@click.option("--seed", type=int, default=None)
@workers_option
@out_option
def puiseux_converge(input_path, z_min, points, coefficients, seed, workers, out):
    """Growth rates of the exact scores of A(z) as z -> 0."""
    if points < 3:
        raise click.UsageError("--points must be at least 3 to fit a slope")
    settings = get_settings()
    m = _run(read_puiseux, input_path)
    record = _run(
        run_puiseux_convergence,
        m,
        z_min=z_min,
        points=points,
        coefficients=coefficients,
        seed=seed if seed is not None else settings.default_seed,
        workers=workers or settings.workers,
    )
    _emit(record, out, "puiseux-converge")


@cli.command("phase-ensemble")
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True,
              help="Matrix Market file of magnitudes.")
@click.option("--row", type=click.IntRange(min=1), required=True, help="1-based row to track.")
@click.option("--trials", type=click.IntRange(min=1), default=None)
@click.option("--seed", type=int, default=None)
@workers_option
@out_option
def phase_ensemble(input_path, row, trials, seed, workers, out):
    """log10 p_row/k under uniformly random phases."""
    settings = get_settings()
    magnitudes = _run(read_numeric_mm, input_path)
    if row > magnitudes.shape[0]:
        raise click.UsageError(f"--row {row} exceeds the {magnitudes.shape[0]} rows of {input_path}")
    record = _run(
        run_phase_ensemble,
        magnitudes,
        row=row - 1,
        trials=trials or settings.default_trials,
        seed=seed if seed is not None else settings.default_seed,
        workers=workers or settings.workers,
    )
    _emit(record, out, "phase-ensemble")


@cli.command()
@click.option("--host", default="0.0.0.0", show_default=True)
@click.option("--port", type=int, default=None, help="Default MPLS_PORT.")
def serve(host, port):
    """Run the HTTP scoring service."""
    import uvicorn

    uvicorn.run("main:app", host=host, port=port or get_settings().port)


if __name__ == "__main__":
    cli()
