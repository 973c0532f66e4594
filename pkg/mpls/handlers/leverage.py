"""
Leverage-score handlers: exact scores, max-plus scores and their baselines.

Logs are base 10 everywhere, so a max-plus score of -2 predicts an exact
score roughly one hundredth of the largest.
"""

import logging
from typing import Sequence, Tuple

import numpy as np
from scipy import linalg

from mpls.core.constants import LOG_BASE
from mpls.core.errors import DomainError, ShapeError
from mpls.handlers.assignment import mp_inverse, optimal_assignment, scale_assigned_rows
from mpls.handlers.maxplus_core import mp_matvec
from mpls.models.assignment import AssignmentResult
from mpls.models.maxplus import BOTTOM, MaxPlusMatrix
from mpls.models.scores import ScoreKind, ScoreVector
from mpls.utils.hashing import stream_rng
from mpls.utils.parallel import map_ordered

logger = logging.getLogger(__name__)


def _numeric(a) -> np.ndarray:
    array = np.asarray(a)
    if array.dtype.kind not in "fc":
        array = array.astype(float)
    if array.ndim == 1:
        array = array.reshape(-1, 1)
    if array.ndim != 2 or array.size == 0:
        raise ShapeError(f"expected a non-empty 2-D matrix, got shape {array.shape}")
    if not np.isfinite(array).all():
        raise DomainError("matrix entries must be finite")
    return array


def orthonormal_basis(a) -> Tuple[np.ndarray, int]:
    """Orthonormal basis of col(a) from a column-pivoted QR, and the numerical rank.

    A pivot counts towards the rank when it exceeds max(n, d) * eps times the
    largest column norm of a.
    """
    a = _numeric(a)
    n, d = a.shape
    largest = float(np.linalg.norm(a, axis=0).max())
    if largest == 0:
        return np.zeros((n, 0), dtype=a.dtype), 0
    q, r, _ = linalg.qr(a, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    tol = max(n, d) * np.finfo(float).eps * largest
    k = int((diag > tol).sum())
    return q[:, :k], k


def exact_scores(a) -> ScoreVector:
    """p_i = squared norm of row i of an orthonormal basis for col(a); sums to the rank."""
    q, k = orthonormal_basis(a)
    values = np.sum(np.abs(q) ** 2, axis=1)
    return ScoreVector(kind=ScoreKind.EXACT, values=values, rank_k=k)


def coherence(scores: ScoreVector) -> float:
    """Largest exact leverage score."""
    if scores.kind != ScoreKind.EXACT:
        raise DomainError(f"coherence needs exact scores, got {scores.kind.value}")
    return float(scores.values.max())


def log_abs(a) -> MaxPlusMatrix:
    """Entrywise log10|a|; zero entries become bottom and the result is sparse."""
    magnitudes = np.abs(_numeric(a))
    zero = magnitudes == 0
    if not zero.any():
        return MaxPlusMatrix.from_dense(np.log10(magnitudes))
    rows, cols = np.nonzero(~zero)
    return MaxPlusMatrix.from_entries(magnitudes.shape, rows, cols, np.log10(magnitudes[rows, cols]))


def assign_and_score(a: MaxPlusMatrix, truncate: bool = True) -> Tuple[ScoreVector, AssignmentResult]:
    """Max-plus scores together with the assignment they were built from.

    With phi optimal and M the square submatrix of its rows,
    p_i = 2 (a ⊗ M^{-1} ⊗ 0)_i, which equals 2 (perm(a, i) - perm(a)).
    Rows assigned by phi score 0.
    """
    res = optimal_assignment(a, truncate=truncate)
    m, scaled, repaired = scale_assigned_rows(a, res)
    inverse = mp_inverse(m, scaled=scaled)
    x = inverse.to_dense().max(axis=1)
    values = 2.0 * mp_matvec(a, x)
    values[list(res.phi.phi)] = 0.0
    values = np.minimum(values, 0.0)
    logger.debug(
        "max-plus scores %s: weight=%g repaired=%s storage=%s", a.shape, res.weight, repaired, a.storage
    )
    return ScoreVector(kind=ScoreKind.MAXPLUS, values=values), res


def maxplus_scores(a: MaxPlusMatrix, truncate: bool = True) -> ScoreVector:
    """Max-plus leverage scores 2 (perm(a, i) - perm(a)) for every row."""
    scores, _ = assign_and_score(a, truncate=truncate)
    return scores


def naive_maxplus_scores(a: MaxPlusMatrix) -> ScoreVector:
    """q_i = max_j (a[i][j] - max_k a[k][j]).

    This is the supremum over x of (a ⊗ x)_i - ‖a ⊗ x‖max, attained at the
    indicator of the maximizing column. No factor 2 is applied.
    """
    col_max = np.empty(a.d)
    for j, (_, values) in enumerate(a.columns()):
        if values.size == 0:
            raise DomainError(f"column {j} has no finite entry")
        col_max[j] = values.max()
    values = np.minimum(mp_matvec(a, -col_max), 0.0)
    return ScoreVector(kind=ScoreKind.NAIVE, values=values)


def cnrn_scores(a) -> ScoreVector:
    """Squared row norms after scaling every column of a to unit 2-norm."""
    a = _numeric(a)
    norms = np.linalg.norm(a, axis=0)
    if (norms == 0).any():
        raise DomainError(f"zero column(s) {np.flatnonzero(norms == 0).tolist()}")
    values = np.sum(np.abs(a / norms) ** 2, axis=1)
    return ScoreVector(kind=ScoreKind.CNRN, values=values)


def softmax(p: ScoreVector | Sequence[float] | np.ndarray) -> ScoreVector:
    """sigma(p)_i = 10**p_i / sum_j 10**p_j, with bottom mapping to 0."""
    if isinstance(p, ScoreVector):
        if p.kind not in (ScoreKind.MAXPLUS, ScoreKind.NAIVE):
            raise DomainError(f"softmax expects log-scale scores, got {p.kind.value}")
        values = p.values
    else:
        values = np.asarray(p, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise ShapeError("softmax needs a non-empty vector")
    top = values.max()
    if top == BOTTOM:
        raise DomainError("softmax of an all-bottom vector")
    weights = np.power(LOG_BASE, values - top)
    return ScoreVector(kind=ScoreKind.SOFTMAX, values=weights / weights.sum())


def heuristic_approximation(a, truncate: bool = True) -> ScoreVector:
    """Approximate p(a)/k by softmax of the max-plus scores of log10|a|."""
    return softmax(maxplus_scores(log_abs(a), truncate=truncate))


def random_phase_ensemble(
    magnitudes,
    trials: int,
    seed: int = 0,
    row: int | None = None,
    workers: int = 1,
) -> np.ndarray:
    """log10(p_i/k) of |magnitudes| with independent uniform phases per entry.

    Returns shape (trials,) for a selected row, else (trials, n). Trial t
    draws from its own stream, so samples do not depend on `workers`.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    moduli = np.abs(_numeric(magnitudes))
    if row is not None and not 0 <= row < moduli.shape[0]:
        raise DomainError(f"row {row} outside 0..{moduli.shape[0] - 1}")

    def one_trial(t: int) -> np.ndarray:
        rng = stream_rng(seed, "phase", t)
        phases = np.exp(2j * np.pi * rng.random(moduli.shape))
        with np.errstate(divide="ignore"):
            return np.log10(exact_scores(moduli * phases).distribution())

    samples = np.array(map_ordered(one_trial, range(trials), workers=workers))
    logger.debug("phase ensemble %s: %d trials", moduli.shape, trials)
    return samples[:, row] if row is not None else samples


def phase_band_fractions(samples: np.ndarray, prediction: float) -> Tuple[float, float]:
    """Fractions of samples within one decade of `prediction` and more than one decade below."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise DomainError("no samples")
    in_band = float(np.mean(np.abs(samples - prediction) <= 1.0))
    lower_tail = float(np.mean(samples < prediction - 1.0))
    return in_band, lower_tail
