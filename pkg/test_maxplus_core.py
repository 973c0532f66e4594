"""
Tests for max-plus semiring operations and the brute-force oracles.
"""

import numpy as np
import pytest

from conftest import random_maxplus
from mpls.core.errors import CapacityError, DomainError, ShapeError
from mpls.handlers.maxplus_core import (
    max_norm,
    maxplus_scores_bruteforce,
    mp_inverse_bruteforce,
    mp_matmul,
    mp_matvec,
    naive_objective,
    obligated_permanent_bruteforce,
    oplus,
    optimal_assignments_bruteforce,
    otimes,
    permanent_bruteforce,
)
from mpls.models.maxplus import BOTTOM, MaxPlusMatrix


def test_semiring_scalars():
    assert oplus(2.0, 5.0) == 5.0
    assert oplus(BOTTOM, 1.0) == 1.0
    assert otimes(2.0, 5.0) == 7.0
    assert otimes(BOTTOM, 5.0) == BOTTOM
    assert otimes(0.0, 4.0) == 4.0


def test_rejects_nan_and_plus_inf():
    with pytest.raises(DomainError):
        MaxPlusMatrix.from_dense([[np.nan]])
    with pytest.raises(DomainError):
        MaxPlusMatrix.from_dense([[np.inf]])


def test_sparse_keeps_explicit_zero():
    m = MaxPlusMatrix.from_entries((2, 2), [0, 1], [0, 1], [0.0, 0.0])
    assert m.finite_count == 2
    assert m == MaxPlusMatrix.identity(2)


def test_identity_is_neutral(example_log):
    assert mp_matmul(MaxPlusMatrix.identity(3), example_log) == example_log
    assert mp_matmul(example_log, MaxPlusMatrix.identity(2)) == example_log


def test_matmul_shape_mismatch(example_log):
    with pytest.raises(ShapeError):
        mp_matmul(example_log, example_log)


def test_matvec_dense_and_sparse_agree():
    rng = np.random.default_rng(0)
    a = random_maxplus(rng, (9, 4), bottom_fraction=0.3)
    x = rng.normal(size=4)
    np.testing.assert_array_equal(mp_matvec(a, x), mp_matvec(a.as_sparse(), x))


def test_max_norm():
    assert max_norm([1.0, -3.0, 2.5]) == 2.5
    assert max_norm([BOTTOM, BOTTOM]) == BOTTOM
    with pytest.raises(DomainError):
        max_norm([])


def test_worked_example_permanents(example_log):
    assert permanent_bruteforce(example_log) == 5.0
    assert obligated_permanent_bruteforce(example_log, 2) == 4.0
    optima = optimal_assignments_bruteforce(example_log)
    assert (0, 1) in [opt.phi for opt in optima]
    assert optima[0].weight == 5.0


def test_bruteforce_scores_worked_examples(example_log):
    np.testing.assert_array_equal(maxplus_scores_bruteforce(example_log), [0.0, 0.0, -2.0])
    parallel = MaxPlusMatrix.from_dense([[3, 3], [0, 2], [1, 1]])
    np.testing.assert_array_equal(maxplus_scores_bruteforce(parallel), [0.0, 0.0, -2.0])


def test_bruteforce_inverse():
    m = MaxPlusMatrix.from_dense([[3, 3], [0, 2]])
    np.testing.assert_array_equal(mp_inverse_bruteforce(m).to_dense(), [[-3, -2], [-5, -2]])
    np.testing.assert_array_equal(mp_inverse_bruteforce(MaxPlusMatrix.from_dense([[4.0]])).to_dense(), [[-4.0]])


def test_bottom_permanent():
    a = MaxPlusMatrix.from_dense([[BOTTOM, 1.0], [BOTTOM, 2.0]])
    assert permanent_bruteforce(a) == BOTTOM
    assert optimal_assignments_bruteforce(a) == ()
    with pytest.raises(DomainError):
        maxplus_scores_bruteforce(a)


def test_oracle_limits():
    with pytest.raises(CapacityError):
        permanent_bruteforce(MaxPlusMatrix.from_dense(np.zeros((11, 2))))
    with pytest.raises(ShapeError):
        permanent_bruteforce(MaxPlusMatrix.from_dense(np.zeros((2, 3))))
    with pytest.raises(DomainError):
        obligated_permanent_bruteforce(MaxPlusMatrix.from_dense(np.zeros((3, 2))), 3)


def test_naive_objective_is_nonpositive(example_log):
    rng = np.random.default_rng(1)
    for _ in range(20):
        values = naive_objective(example_log, rng.normal(size=2))
        assert values.max() == 0.0
        assert (values <= 0).all()


def test_semiring_laws_on_random_scalars():
    rng = np.random.default_rng(3)
    pool = np.append(np.arange(-5.0, 6.0), BOTTOM)
    for a, b, c in rng.choice(pool, size=(200, 3)):
        assert oplus(a, b) == oplus(b, a)
        assert otimes(a, b) == otimes(b, a)
        assert oplus(oplus(a, b), c) == oplus(a, oplus(b, c))
        assert otimes(otimes(a, b), c) == otimes(a, otimes(b, c))
        assert otimes(a, oplus(b, c)) == oplus(otimes(a, b), otimes(a, c))
        assert oplus(a, BOTTOM) == a
        assert otimes(a, 0.0) == a
        assert otimes(a, BOTTOM) == BOTTOM


def test_matmul_matches_triple_loop():
    rng = np.random.default_rng(4)
    for _ in range(10):
        a = random_maxplus(rng, (5, 4), bottom_fraction=0.3)
        b = random_maxplus(rng, (4, 3), bottom_fraction=0.3)
        left, right = a.to_dense(), b.to_dense()
        expected = np.full((5, 3), BOTTOM)
        for i in range(5):
            for j in range(3):
                for k in range(4):
                    expected[i, j] = oplus(expected[i, j], otimes(left[i, k], right[k, j]))
        np.testing.assert_allclose(mp_matmul(a, b).to_dense(), expected, atol=1e-12)


def test_sparse_and_dense_storage_agree():
    rng = np.random.default_rng(5)
    for _ in range(10):
        dense = random_maxplus(rng, (7, 3), bottom_fraction=0.5)
        sparse = dense.as_sparse()
        assert sparse.storage == "sparse"
        assert sparse.as_dense() == dense
        assert permanent_bruteforce(sparse) == permanent_bruteforce(dense)
        for i in range(7):
            assert obligated_permanent_bruteforce(sparse, i) == obligated_permanent_bruteforce(dense, i)
        other = random_maxplus(rng, (3, 4), bottom_fraction=0.5)
        assert mp_matmul(sparse, other.as_sparse()) == mp_matmul(dense, other)


def test_permanents_follow_row_permutation():
    rng = np.random.default_rng(6)
    for _ in range(10):
        a = random_maxplus(rng, (6, 3))
        order = rng.permutation(6)
        permuted = a.permute_rows(order)
        assert permanent_bruteforce(permuted) == permanent_bruteforce(a)
        for i in range(6):
            assert obligated_permanent_bruteforce(permuted, i) == obligated_permanent_bruteforce(a, int(order[i]))
    assert a.as_sparse().permute_rows(order).storage == "sparse"


def test_all_zero_matrix_has_every_injection_optimal():
    optima = optimal_assignments_bruteforce(MaxPlusMatrix.from_dense(np.zeros((3, 2))))
    assert len(optima) == 6
    assert all(opt.weight == 0.0 for opt in optima)


def test_obligated_permanent_attains_permanent_exactly_on_used_rows():
    rng = np.random.default_rng(7)
    for _ in range(30):
        a = random_maxplus(rng, (6, 3), integers=True)
        perm = permanent_bruteforce(a)
        optima = optimal_assignments_bruteforce(a)
        for i in range(6):
            used = any(opt.assigns(i) for opt in optima)
            assert (obligated_permanent_bruteforce(a, i) == perm) == used
