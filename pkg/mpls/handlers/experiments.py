"""
Experiment runners behind the CLI subcommands.

Every runner returns an ExperimentRecord; nothing here touches the
filesystem. Randomness comes from the run seed through labelled streams,
and each record lists the stream seeds it used.
"""

import logging
from typing import Literal

import numpy as np
import pandas as pd

from mpls.core.constants import DEFAULT_Z_MIN, DEFAULT_Z_POINTS, LSQ_METHODS
from mpls.handlers.generation import generate, split_problem
from mpls.handlers.leverage import (
    cnrn_scores,
    coherence,
    exact_scores,
    heuristic_approximation,
    maxplus_scores,
    log_abs,
    phase_band_fractions,
    random_phase_ensemble,
    softmax,
)
from mpls.handlers.puiseux import asymptotic_score_slopes, default_z_grid, randomize_coefficients
from mpls.handlers.reports import accuracy_summary, score_comparison
from mpls.handlers.sampling_lsq import error_curve
from mpls.models.experiment import ExperimentConfig, ExperimentRecord
from mpls.models.puiseux import PuiseuxMatrix
from mpls.models.scores import ScoreVector
from mpls.utils.hashing import derive_seed, stream_rng

logger = logging.getLogger(__name__)

CoefficientMode = Literal["as-given", "random"]


def run_gen(config: ExperimentConfig) -> ExperimentRecord:
    """Generate the configured matrix and report its coherence."""
    a = generate(config)
    scores = exact_scores(a)
    logger.info("generated %s %dx%d, coherence %.4g", config.regime.value, config.n, config.d, coherence(scores))
    return ExperimentRecord(
        kind="gen",
        seed=config.seed,
        config=config.model_dump(mode="json"),
        summary={"n": config.n, "d": config.d, "rank": scores.rank_k, "coherence": coherence(scores)},
        streams={f"gen/{config.regime.value}": derive_seed(config.seed, f"gen/{config.regime.value}")},
        matrices={"matrix": a},
    )


def score_distributions(a: np.ndarray, log_scores: ScoreVector | None = None) -> dict[str, np.ndarray]:
    """Row-sampling distributions named as in LSQ_METHODS."""
    n = a.shape[0]
    if log_scores is None:
        log_scores = maxplus_scores(log_abs(a))
    return {
        "exact": exact_scores(a).distribution(),
        "maxplus": softmax(log_scores).values,
        "cnrn": cnrn_scores(a).distribution(),
        "uniform": np.full(n, 1.0 / n),
    }


def run_scores(a: np.ndarray, seed: int = 0, config: dict | None = None) -> ExperimentRecord:
    """
    Exact, max-plus, CNRN and uniform distributions of every row of a.

    Tables:
        scores: per row, each distribution and log10(approx / exact)
        scores_summary: fraction of rows within one decade, worst factors
    """
    exact = exact_scores(a)
    log_scores = maxplus_scores(log_abs(a))
    distributions = score_distributions(a, log_scores)
    approximations = {name: distributions[name] for name in ("maxplus", "cnrn", "uniform")}
    comparison = score_comparison(exact.distribution(), approximations)
    comparison.insert(2, "maxplus_log", log_scores.values)
    summary_table = accuracy_summary(comparison, list(approximations))

    within = dict(zip(summary_table["method"], summary_table["within_decade"]))
    logger.info("scored %dx%d: max-plus within one decade on %.1f%% of rows", *a.shape, 100 * within["maxplus"])
    return ExperimentRecord(
        kind="scores",
        seed=seed,
        config=config or {"n": int(a.shape[0]), "d": int(a.shape[1])},
        tables={"scores": comparison, "scores_summary": summary_table},
        summary={
            "n": int(a.shape[0]),
            "d": int(a.shape[1]),
            "rank": exact.rank_k,
            "coherence": coherence(exact),
            "within_decade": within,
        },
    )


def run_lsq_benchmark(config: ExperimentConfig) -> ExperimentRecord:
    """
    Sampled least-squares error curves for every method in LSQ_METHODS.

    The generated matrix is split into B (first d-1 columns) and y (last
    column). Distributions come from [B, y] or from B per config.score_source.
    """
    a = generate(config)
    b, y = split_problem(a)
    scored = a if config.score_source == "augmented" else b
    distributions = score_distributions(scored)
    curve = error_curve(
        b,
        y,
        {method: distributions[method] for method in LSQ_METHODS},
        r_grid=config.r_grid,
        trials=config.trials,
        seed=config.seed,
        workers=config.workers,
    )
    streams = {f"gen/{config.regime.value}": derive_seed(config.seed, f"gen/{config.regime.value}")}
    streams.update(
        {
            f"lsq/{method}/{r}": derive_seed(config.seed, f"lsq/{method}/{r}")
            for method in LSQ_METHODS
            for r in config.r_grid
        }
    )
    table = curve.tables["curve"]
    logger.info("lsq benchmark %s: %d solves", config.regime.value, len(curve.tables["trials"]))
    return ExperimentRecord(
        kind="lsq-bench",
        seed=config.seed,
        config=config.model_dump(mode="json"),
        tables={"lsq_trials": curve.tables["trials"], "lsq_curve": table},
        summary={
            "score_source": config.score_source,
            "residual_opt": curve.summary["residual_opt"],
            "deficient": curve.summary["deficient"],
            "coherence": coherence(exact_scores(scored)),
        },
        streams=streams,
    )


def run_puiseux_convergence(
    m: PuiseuxMatrix,
    z_min: float = DEFAULT_Z_MIN,
    points: int = DEFAULT_Z_POINTS,
    coefficients: CoefficientMode = "as-given",
    seed: int = 0,
    workers: int = 1,
) -> ExperimentRecord:
    """
    Growth rates of the exact scores of m(z) as z -> 0 against the max-plus scores.

    Tables:
        puiseux_slopes: row, z_min, slope, target, abs_err
        puiseux_trace: z, row, ratio with ratio = -log10 p_i / log10 z
    """
    streams = {}
    if coefficients == "random":
        streams["puiseux/coefficients"] = derive_seed(seed, "puiseux/coefficients")
        m = randomize_coefficients(m, stream_rng(seed, "puiseux/coefficients"))
    fit = asymptotic_score_slopes(m, default_z_grid(z_min, points), workers=workers)

    rows = np.arange(1, m.n + 1)
    slopes = pd.DataFrame(
        {"row": rows, "z_min": z_min, "slope": fit.estimates, "target": fit.target, "abs_err": fit.abs_err}
    )
    trace = fit.trace()
    trace_frame = pd.DataFrame(
        {
            "z": np.repeat(fit.z_grid, m.n),
            "row": np.tile(rows, fit.z_grid.size),
            "ratio": trace.reshape(-1),
        }
    )
    logger.info("puiseux convergence %s (%s): max abs error %.4g", m.shape, coefficients, fit.abs_err.max())
    return ExperimentRecord(
        kind="puiseux-converge",
        seed=seed,
        config={"z_min": z_min, "points": points, "coefficients": coefficients, "shape": list(m.shape)},
        tables={"puiseux_slopes": slopes, "puiseux_trace": trace_frame},
        summary={"max_abs_err": float(fit.abs_err.max()), "estimates": fit.estimates.tolist()},
        streams=streams,
    )


def run_phase_ensemble(
    magnitudes: np.ndarray, row: int, trials: int, seed: int = 0, workers: int = 1
) -> ExperimentRecord:
    """
    log10(p_row / k) under random phases, against the max-plus prediction.

    `row` is 0-based. The prediction is log10 of the softmax of the max-plus
    scores of log10|magnitudes|.
    """
    moduli = np.abs(magnitudes)
    samples = random_phase_ensemble(moduli, trials, seed=seed, row=row, workers=workers)
    prediction = float(np.log10(heuristic_approximation(moduli).values[row]))
    in_band, lower_tail = phase_band_fractions(samples, prediction)
    given = float(np.log10(exact_scores(magnitudes).distribution()[row]))
    logger.info("phase ensemble row %d: %.1f%% in band, %.2f%% lower tail", row + 1, 100 * in_band, 100 * lower_tail)
    return ExperimentRecord(
        kind="phase-ensemble",
        seed=seed,
        config={"row": row + 1, "trials": trials, "shape": list(moduli.shape)},
        tables={"phase_ensemble": pd.DataFrame({"trial": np.arange(trials), "log10_score": samples})},
        summary={
            "row": row + 1,
            "prediction": prediction,
            "given_matrix_log10_score": given,
            "in_band": in_band,
            "lower_tail": lower_tail,
        },
        streams={"phase": derive_seed(seed, "phase")},
    )
