"""
Valuation maps, genericity checks and numerical checks of the asymptotic
correspondence between Puiseux-series matrices and their valuations.

Valuations are V(f) = minus the lowest exponent, so |f(z)| ~ |L(f)| z**(-V(f))
as z -> 0. Growth rates are fitted in log10 z against log10 of the quantity.
"""

import itertools
import logging
from fractions import Fraction
from typing import Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

from mpls.core.constants import (
    CANCELLATION_TOL,
    CRAMER_FIT_MAX_DIM,
    DEFAULT_Z_MIN,
    DEFAULT_Z_POINTS,
    GOOD_COEFFICIENT_MAX_COLS,
    GOOD_COEFFICIENT_MAX_ROWS,
    SYMBOLIC_DET_MAX_DIM,
)
from mpls.core.errors import CapacityError, DomainError, ShapeError
from mpls.handlers.assignment import hungarian_scale, mp_inverse, optimal_assignment
from mpls.handlers.leverage import exact_scores, maxplus_scores
from mpls.models.maxplus import MaxPlusMatrix
from mpls.models.puiseux import InverseValuationFit, PuiseuxMatrix, PuiseuxSeries, SlopeFit
from mpls.utils.parallel import map_ordered

logger = logging.getLogger(__name__)


def valuation(m: PuiseuxMatrix) -> MaxPlusMatrix:
    """Entrywise V: minus the lowest exponent."""
    return MaxPlusMatrix.from_dense([[float(entry.valuation()) for entry in row] for row in m.rows()])


def exact_valuations(m: PuiseuxMatrix) -> Tuple[Tuple[Fraction, ...], ...]:
    return tuple(tuple(entry.valuation() for entry in row) for row in m.rows())


def leading_coefficients(m: PuiseuxMatrix) -> np.ndarray:
    """Entrywise L: the coefficient of the lowest-order term."""
    return np.array([[entry.leading_coefficient() for entry in row] for row in m.rows()], dtype=complex)


def evaluate(m: PuiseuxMatrix, z: complex) -> np.ndarray:
    """Complex matrix Ã(z)."""
    return np.array([[entry.evaluate(z) for entry in row] for row in m.rows()], dtype=complex)


def _signed_permutations(d: int) -> list[Tuple[Tuple[int, ...], int]]:
    out = []
    for perm in itertools.permutations(range(d)):
        inversions = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        out.append((perm, -1 if inversions % 2 else 1))
    return out


def _subset_sums(values: np.ndarray) -> np.ndarray:
    sums = np.zeros(1, dtype=complex)
    for value in values:
        sums = np.concatenate([sums, sums + value])
    return sums


def _has_vanishing_subset_sum(terms: np.ndarray, tol: float) -> bool:
    """Whether some nonempty subset of terms sums to 0 within tol (meet in the middle)."""
    half = terms.size // 2
    left = _subset_sums(terms[:half])
    right = _subset_sums(terms[half:])
    left_tree = cKDTree(np.column_stack([-left.real, -left.imag]))
    right_tree = cKDTree(np.column_stack([right.real, right.imag]))
    # the empty-empty pair always matches
    return left_tree.count_neighbors(right_tree, tol) > 1


def good_coefficient_check(c, tol: float = CANCELLATION_TOL) -> bool:
    """
    True iff c is a good coefficient matrix.

    For every injection phi of columns into rows and every nonempty set of
    permutations Psi, sum over pi in Psi of sign(pi) prod_k c[phi(k)][pi(k)]
    must be nonzero. A sum counts as zero when its modulus is at most `tol`
    times the total modulus of the terms involved.
    """
    c = np.asarray(c, dtype=complex)
    if c.ndim != 2:
        raise ShapeError(f"expected a matrix, got shape {c.shape}")
    n, d = c.shape
    if n < d:
        raise ShapeError(f"need rows >= cols, got {c.shape}")
    if d > GOOD_COEFFICIENT_MAX_COLS or n > GOOD_COEFFICIENT_MAX_ROWS:
        raise CapacityError(
            f"genericity check enumerates subsets of permutations; limit is "
            f"{GOOD_COEFFICIENT_MAX_ROWS}x{GOOD_COEFFICIENT_MAX_COLS}, got {c.shape}"
        )
    perms = _signed_permutations(d)
    columns = np.arange(d)
    for phi in itertools.permutations(range(n), d):
        block = c[list(phi), :]
        terms = np.array([sign * np.prod(block[columns, list(perm)]) for perm, sign in perms])
        if (terms == 0).any():
            return False
        if _has_vanishing_subset_sum(terms, tol * float(np.abs(terms).sum())):
            return False
    return True


def det_series(m: PuiseuxMatrix) -> PuiseuxSeries:
    """Determinant by the permutation expansion, with exact rational exponents."""
    if m.n != m.d:
        raise ShapeError(f"determinant needs a square matrix, got {m.shape}")
    if m.d > SYMBOLIC_DET_MAX_DIM:
        raise CapacityError(f"symbolic determinant is limited to d <= {SYMBOLIC_DET_MAX_DIM}")
    total = PuiseuxSeries()
    for perm, sign in _signed_permutations(m.d):
        term = PuiseuxSeries.constant(sign)
        for i, j in enumerate(perm):
            term = term * m[i, j]
        total = total + term
    return total


def _permanent_exact(values: Sequence[Sequence[Fraction]]) -> Fraction:
    d = len(values)
    return max(sum((values[i][j] for i, j in enumerate(perm)), Fraction(0)) for perm in itertools.permutations(range(d)))


def det_perm_correspondence(m: PuiseuxMatrix) -> Tuple[Fraction | float, Fraction]:
    """(V(det m), perm(V(m))), both exact; they agree for generic leading coefficients."""
    det = det_series(m)
    return det.valuation(), _permanent_exact(exact_valuations(m))


def random_generic_coefficients(shape: Tuple[int, int], rng: np.random.Generator) -> np.ndarray:
    """Standard complex Gaussian coefficients; generic with probability 1."""
    n, d = shape
    for _ in range(10):
        c = (rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))) / np.sqrt(2.0)
        if d > GOOD_COEFFICIENT_MAX_COLS or n > GOOD_COEFFICIENT_MAX_ROWS or good_coefficient_check(c):
            return c
        logger.warning("random coefficients failed the genericity check; redrawing")
    raise DomainError("could not draw generic coefficients")


def randomize_coefficients(m: PuiseuxMatrix, rng: np.random.Generator) -> PuiseuxMatrix:
    """Same valuations as m, with random generic leading coefficients."""
    return m.with_leading_coefficients(random_generic_coefficients(m.shape, rng))


def default_z_grid(z_min: float = DEFAULT_Z_MIN, points: int = DEFAULT_Z_POINTS) -> np.ndarray:
    """Geometric grid from 1e-2 down to z_min."""
    if not 0 < z_min < 1e-2:
        raise DomainError(f"z_min must lie in (0, 0.01), got {z_min}")
    return np.geomspace(1e-2, z_min, points)


def _check_grid(z_grid: Sequence[float]) -> np.ndarray:
    z = np.asarray(z_grid, dtype=float)
    if z.ndim != 1 or z.size < 3:
        raise DomainError("slope fitting needs at least 3 grid points")
    if (z <= 0).any() or (z >= 1).any():
        raise DomainError("grid points must lie in (0, 1)")
    if (np.diff(z) >= 0).any():
        raise DomainError("grid must be strictly decreasing")
    return z


def _fit_slopes(log_z: np.ndarray, log_values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Least-squares slopes of each column of log_values against log_z, and residual sums."""
    design = np.column_stack([log_z, np.ones_like(log_z)])
    flat = log_values.reshape(log_z.size, -1)
    finite = np.isfinite(flat).all(axis=0)
    # a quantity that is exactly zero decays faster than any power
    slopes = np.full(flat.shape[1], np.inf)
    residuals = np.full(flat.shape[1], np.nan)
    if finite.any():
        coef, *_ = np.linalg.lstsq(design, flat[:, finite], rcond=None)
        slopes[finite] = coef[0]
        residuals[finite] = np.sum((design @ coef - flat[:, finite]) ** 2, axis=0)
    shape = log_values.shape[1:]
    return slopes.reshape(shape), residuals.reshape(shape)


def cramer_inverse_valuations(
    m: PuiseuxMatrix, z_grid: Sequence[float] | None = None
) -> InverseValuationFit:
    """
    Estimate V(m^{-1}) by slope fitting and compare with V(m)^{⊗-1}.

    m(z) is first rescaled by powers of z taken from the Hungarian duals of
    V(m), so the matrix actually inverted stays well conditioned as z -> 0.
    """
    if m.n != m.d:
        raise ShapeError(f"inverse needs a square matrix, got {m.shape}")
    if m.d > CRAMER_FIT_MAX_DIM:
        raise CapacityError(f"inverse fit is limited to d <= {CRAMER_FIT_MAX_DIM}")
    z = _check_grid(default_z_grid() if z_grid is None else z_grid)

    v = valuation(m)
    predicted = mp_inverse(v).to_dense()
    if m.d == 1:
        u_rows, v_cols = np.zeros(1), np.array([v.to_dense()[0, 0]])
    else:
        res = optimal_assignment(v, truncate=False)
        scaled = hungarian_scale(v, res)
        u_rows, v_cols = -scaled.d1, -scaled.d2

    log_z = np.log10(z)
    log_inv = np.empty((z.size, m.d, m.d))
    for k, point in enumerate(z):
        # m = diag(z^-u) s diag(z^-v), so m^-1 = diag(z^v) s^-1 diag(z^u)
        s = evaluate(m, point) * np.power(point, u_rows)[:, None] * np.power(point, v_cols)[None, :]
        with np.errstate(divide="ignore"):
            log_inv[k] = np.log10(np.abs(np.linalg.inv(s)))
        log_inv[k] += log_z[k] * (v_cols[:, None] + u_rows[None, :])
    slopes, _ = _fit_slopes(log_z, log_inv)
    estimated = -slopes

    generic = True
    if m.d <= GOOD_COEFFICIENT_MAX_COLS:
        generic = good_coefficient_check(leading_coefficients(m))
    if not generic:
        logger.warning("leading coefficients are not generic; skipping the inverse comparison")
        return InverseValuationFit(estimated=estimated, predicted=predicted, generic=False)

    both_finite = np.isfinite(estimated) & np.isfinite(predicted)
    mismatch = np.isfinite(estimated) != np.isfinite(predicted)
    error = float(np.abs(estimated - predicted)[both_finite].max()) if both_finite.any() else 0.0
    if mismatch.any():
        error = float("inf")
    return InverseValuationFit(estimated=estimated, predicted=predicted, generic=True, max_abs_error=error)


def asymptotic_score_slopes(
    m: PuiseuxMatrix, z_grid: Sequence[float] | None = None, workers: int = 1
) -> SlopeFit:
    """
    Fit the growth rate of each exact leverage score of m(z) as z -> 0.

    The estimate for row i is minus the slope of log10 p_i(m(z)) against
    log10 z; it tends to the max-plus score of row i of V(m) when the leading
    coefficients are generic.
    """
    z = _check_grid(default_z_grid() if z_grid is None else z_grid)
    target = maxplus_scores(valuation(m), truncate=False).values

    def log_scores(point: float) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log10(exact_scores(evaluate(m, point)).values)

    log_p = np.array(map_ordered(log_scores, list(z), workers=workers))
    slopes, residuals = _fit_slopes(np.log10(z), log_p)
    estimates = -slopes
    logger.debug("score slopes %s over %d points: %s", m.shape, z.size, np.round(estimates, 4).tolist())
    return SlopeFit(z_grid=z, estimates=estimates, residuals=residuals, target=np.array(target), log_scores=log_p)
