"""
Row-sampling least-squares solver and sample-size bound.

Rows are drawn with replacement from a probability vector using Vose's alias
method and scaled by 1/sqrt(p_j). The sampled problem is solved with a
column-pivoted QR; rank-deficient samples fall back to the minimum-norm
solution and are flagged.
"""

import logging
import math
from typing import Mapping, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import linalg

from mpls.core.errors import DomainError, ShapeError
from mpls.handlers.reports import aggregate_ratios
from mpls.models.experiment import ExperimentRecord
from mpls.models.sampling import SampleDraws, SampledSolution, SamplingPlan
from mpls.utils.hashing import stream_rng
from mpls.utils.parallel import map_ordered

logger = logging.getLogger(__name__)


class AliasTable:
    """Vose alias table over the support of a distribution (zero rows excluded)."""

    def __init__(self, p: np.ndarray):
        p = np.asarray(p, dtype=float)
        self.support = np.flatnonzero(p > 0)
        if self.support.size == 0:
            raise DomainError("distribution has empty support")
        size = self.support.size
        scaled = p[self.support] / p[self.support].sum() * size
        self.prob = np.ones(size)
        self.alias = np.arange(size)
        small = [k for k in range(size) if scaled[k] < 1.0]
        large = [k for k in range(size) if scaled[k] >= 1.0]
        while small and large:
            s, g = small.pop(), large.pop()
            self.prob[s] = scaled[s]
            self.alias[s] = g
            scaled[g] = scaled[g] + scaled[s] - 1.0
            (small if scaled[g] < 1.0 else large).append(g)
        # leftovers are 1 up to rounding
        for k in small + large:
            self.prob[k] = 1.0

    def draw(self, rng: np.random.Generator, count: int) -> np.ndarray:
        columns = rng.integers(0, self.support.size, size=count)
        accept = rng.random(count) < self.prob[columns]
        return self.support[np.where(accept, columns, self.alias[columns])]


def sample_rows(plan: SamplingPlan, table: AliasTable | None = None) -> SampleDraws:
    """r independent draws of row j with probability p_j, each weighted 1/sqrt(p_j).

    `table` may be a prebuilt alias table for plan.p.
    """
    rng = stream_rng(plan.seed, plan.label, plan.trial)
    indices = (table or AliasTable(plan.p)).draw(rng, plan.r)
    return SampleDraws(indices=indices, weights=1.0 / np.sqrt(plan.p[indices]))


def _as_system(a, y) -> Tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a)
    if a.dtype.kind not in "fc":
        a = a.astype(float)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    y = np.asarray(y).reshape(-1)
    if a.ndim != 2 or a.size == 0:
        raise ShapeError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if y.shape[0] != a.shape[0]:
        raise ShapeError(f"right-hand side has {y.shape[0]} entries, matrix has {a.shape[0]} rows")
    return a, y


def least_squares(m: np.ndarray, rhs: np.ndarray) -> Tuple[np.ndarray, bool]:
    """argmin ‖m x - rhs‖ by pivoted QR; minimum-norm lstsq when m is rank deficient."""
    rows, cols = m.shape
    q, r, piv = linalg.qr(m, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    tol = max(rows, cols) * np.finfo(float).eps * (diag[0] if diag.size else 0.0)
    rank = int((diag > tol).sum()) if diag.size and diag[0] > 0 else 0
    if rank < cols:
        x, *_ = linalg.lstsq(m, rhs)
        return x, True
    z = linalg.solve_triangular(r, q.conj().T @ rhs)
    x = np.empty(cols, dtype=z.dtype)
    x[piv] = z
    return x, False


def residual_ratio(residual_full: float, residual_opt: float) -> float:
    if residual_opt > 0:
        return residual_full / residual_opt
    return 1.0 if residual_full <= 1e-12 else math.inf


def sampled_solve(
    a,
    y,
    plan: SamplingPlan,
    residual_opt: float | None = None,
    table: AliasTable | None = None,
) -> SampledSolution:
    """Solve the sampled problem min ‖M(a x - y)‖ and rate x_hat on the full problem.

    `residual_opt`, ‖a x* - y‖, is computed when not supplied.
    """
    a, y = _as_system(a, y)
    if plan.p.size != a.shape[0]:
        raise ShapeError(f"distribution has {plan.p.size} entries, matrix has {a.shape[0]} rows")
    draws = sample_rows(plan, table)
    weights = draws.weights
    x_hat, deficient = least_squares(weights[:, None] * a[draws.indices], weights * y[draws.indices])
    if deficient:
        logger.warning("sampled system of %d rows is rank deficient; using minimum-norm solution", plan.r)
    if residual_opt is None:
        x_opt, _ = least_squares(a, y)
        residual_opt = float(np.linalg.norm(a @ x_opt - y))
    residual_full = float(np.linalg.norm(a @ x_hat - y))
    return SampledSolution(
        x_hat=x_hat,
        sampled_rows=draws.indices,
        residual_full=residual_full,
        residual_opt=residual_opt,
        ratio=max(residual_ratio(residual_full, residual_opt), 1.0),
        deficient=deficient,
    )


def theorem_sample_bound(d: int, eps: float, delta: float) -> int:
    """Smallest r with r >= 8 (d+1)/eps**2 * ln((d+1)/delta)."""
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    if not 0 < eps <= 1:
        raise DomainError(f"eps must lie in (0, 1], got {eps}")
    if not 0 < delta < 1:
        raise DomainError(f"delta must lie in (0, 1), got {delta}")
    value = 8.0 * (d + 1) / eps**2 * math.log((d + 1) / delta)
    # exact integers must not round up through floating error
    return max(1, math.ceil(value * (1.0 - 1e-12)))


def error_curve(
    a,
    y,
    distributions: Mapping[str, Sequence[float] | np.ndarray],
    r_grid: Sequence[int],
    trials: int,
    seed: int = 0,
    workers: int = 1,
) -> ExperimentRecord:
    """Residual ratios of `trials` sampled solves per (distribution, r).

    Tables: `trials` (method, r, trial, ratio) and `curve`
    (method, r, geomean, q05, q95).
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    a, y = _as_system(a, y)
    x_opt, _ = least_squares(a, y)
    residual_opt = float(np.linalg.norm(a @ x_opt - y))

    jobs = [
        SamplingPlan(p=p, r=int(r), seed=seed, label=f"lsq/{method}/{int(r)}", trial=t)
        for method, p in distributions.items()
        for r in r_grid
        for t in range(trials)
    ]
    methods = [method for method in distributions for _ in r_grid for _ in range(trials)]
    tables = {method: AliasTable(np.asarray(p, dtype=float)) for method, p in distributions.items()}
    solutions = map_ordered(
        lambda job: sampled_solve(a, y, job[1], residual_opt, tables[job[0]]),
        list(zip(methods, jobs)),
        workers=workers,
    )

    frame = pd.DataFrame(
        {
            "method": methods,
            "r": [plan.r for plan in jobs],
            "trial": [plan.trial for plan in jobs],
            "ratio": [solution.ratio for solution in solutions],
        }
    )
    deficient = sum(solution.deficient for solution in solutions)
    if deficient:
        logger.warning("%d of %d sampled systems were rank deficient", deficient, len(solutions))
    return ExperimentRecord(
        kind="error-curve",
        seed=seed,
        config={"r_grid": [int(r) for r in r_grid], "trials": trials, "methods": list(distributions)},
        tables={"trials": frame, "curve": aggregate_ratios(frame)},
        summary={"residual_opt": residual_opt, "deficient": int(deficient)},
    )
