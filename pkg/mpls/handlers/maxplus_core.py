"""
Max-plus semiring operations and brute-force reference oracles.

The oracles enumerate every injection from columns to rows and exist as
ground truth for the scalable assignment and scoring code.
"""

import itertools
from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np

from mpls.core.constants import ORACLE_MAX_ROWS
from mpls.core.errors import CapacityError, DomainError, ShapeError
from mpls.models.maxplus import BOTTOM, Injection, MaxPlusMatrix


def oplus(a: float, b: float) -> float:
    """a ⊕ b = max(a, b)."""
    return max(a, b)


def otimes(a: float, b: float) -> float:
    """a ⊗ b = a + b, with bottom absorbing."""
    if a == BOTTOM or b == BOTTOM:
        return BOTTOM
    return a + b


def mp_matmul(a: MaxPlusMatrix, b: MaxPlusMatrix) -> MaxPlusMatrix:
    """(a ⊗ b)[i][j] = max_k a[i][k] + b[k][j]."""
    if a.d != b.n:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    left, right = a.to_dense(), b.to_dense()
    out = np.full((a.n, b.d), BOTTOM)
    # -inf + -inf stays -inf and +inf never occurs, so no NaN can appear
    for k in range(a.d):
        np.maximum(out, left[:, k, None] + right[None, k, :], out=out)
    return MaxPlusMatrix.from_dense(out)


def mp_matvec(a: MaxPlusMatrix, x: Sequence[float] | np.ndarray) -> np.ndarray:
    """(a ⊗ x)[i] = max_j a[i][j] + x[j], touching only finite entries of sparse a."""
    x = np.asarray(x, dtype=float)
    if x.shape != (a.d,):
        raise ShapeError(f"vector of length {x.size} does not fit {a.shape}")
    if a.storage == "dense":
        return (a.to_dense() + x[None, :]).max(axis=1)
    out = np.full(a.n, BOTTOM)
    for j, (rows, values) in enumerate(a.columns()):
        if rows.size:
            np.maximum.at(out, rows, values + x[j])
    return out


def max_norm(y: Sequence[float] | np.ndarray) -> float:
    """‖y‖max: the largest entry, bottom if every entry is bottom."""
    y = np.asarray(y, dtype=float)
    if y.size == 0:
        raise DomainError("max-norm of an empty vector")
    return float(y.max())


def _check_oracle_input(a: MaxPlusMatrix) -> None:
    if a.n < a.d:
        raise ShapeError(f"need rows >= cols, got {a.shape}")
    if a.n > ORACLE_MAX_ROWS:
        raise CapacityError(f"brute-force oracles are capped at {ORACLE_MAX_ROWS} rows, got {a.n}")


@lru_cache(maxsize=64)
def _injections(n: int, d: int) -> np.ndarray:
    """All injections {0..d-1} -> {0..n-1} as rows of a (count, d) array, lexicographic."""
    return np.array(list(itertools.permutations(range(n), d)), dtype=np.int64).reshape(-1, d)


def _injection_weights(a: MaxPlusMatrix) -> Tuple[np.ndarray, np.ndarray]:
    _check_oracle_input(a)
    phis = _injections(a.n, a.d)
    weights = a.to_dense()[phis, np.arange(a.d)].sum(axis=1)
    return phis, weights


def permanent_bruteforce(a: MaxPlusMatrix) -> float:
    """Max-plus permanent: max over injections phi of sum_j a[phi(j)][j]."""
    _, weights = _injection_weights(a)
    return float(weights.max())


def obligated_permanent_bruteforce(a: MaxPlusMatrix, i: int) -> float:
    """Largest weight of an injection that assigns row i (0-based)."""
    if not 0 <= i < a.n:
        raise DomainError(f"row index {i} outside 0..{a.n - 1}")
    phis, weights = _injection_weights(a)
    return float(weights[(phis == i).any(axis=1)].max())


def obligated_permanents_bruteforce(a: MaxPlusMatrix) -> np.ndarray:
    """perm(a, i) for every row i."""
    phis, weights = _injection_weights(a)
    return np.array([weights[(phis == i).any(axis=1)].max() for i in range(a.n)])


def _tie_tol(value: float) -> float:
    return 1e-12 * (1.0 + abs(value))


def optimal_assignments_bruteforce(a: MaxPlusMatrix) -> Tuple[Injection, ...]:
    """Every injection attaining the permanent, in lexicographic order of phi.

    Empty when the permanent is bottom.
    """
    phis, weights = _injection_weights(a)
    best = weights.max()
    if best == BOTTOM:
        return ()
    hits = np.flatnonzero(weights >= best - _tie_tol(best))
    return tuple(Injection(phi=tuple(int(r) for r in phis[k]), weight=float(weights[k])) for k in hits)


def maxplus_scores_bruteforce(a: MaxPlusMatrix) -> np.ndarray:
    """2 (perm(a, i) - perm(a)) for every row i."""
    perm = permanent_bruteforce(a)
    if perm == BOTTOM:
        raise DomainError("permanent is bottom; scores are undefined")
    return 2.0 * (obligated_permanents_bruteforce(a) - perm)


def mp_inverse_bruteforce(m: MaxPlusMatrix) -> MaxPlusMatrix:
    """Cramer-style inverse: inv[i][j] = perm(m without row j and col i) - perm(m)."""
    if m.n != m.d:
        raise ShapeError(f"inverse needs a square matrix, got {m.shape}")
    perm = permanent_bruteforce(m)
    if perm == BOTTOM:
        raise DomainError("permanent is bottom; the inverse is undefined")
    size = m.d
    if size == 1:
        return MaxPlusMatrix.from_dense([[-perm]])
    out = np.empty((size, size))
    for i in range(size):
        for j in range(size):
            rows = [r for r in range(size) if r != j]
            cols = [c for c in range(size) if c != i]
            out[i, j] = permanent_bruteforce(m.submatrix(rows, cols)) - perm
    return MaxPlusMatrix.from_dense(out)


def naive_objective(a: MaxPlusMatrix, x: Sequence[float] | np.ndarray) -> np.ndarray:
    """(a ⊗ x)_i - ‖a ⊗ x‖max for every row; the naive scores are its supremum over x."""
    y = mp_matvec(a, x)
    top = max_norm(y)
    if top == BOTTOM:
        raise DomainError("a ⊗ x is bottom everywhere")
    return y - top
