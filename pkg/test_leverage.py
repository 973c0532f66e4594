"""
Tests for exact, max-plus, naive and CNRN scores and the phase ensemble.
"""

import numpy as np
import pytest

from conftest import random_maxplus
from mpls.core.errors import DomainError, StructuralRankError
from mpls.handlers.leverage import (
    assign_and_score,
    cnrn_scores,
    coherence,
    exact_scores,
    heuristic_approximation,
    log_abs,
    maxplus_scores,
    naive_maxplus_scores,
    phase_band_fractions,
    random_phase_ensemble,
    softmax,
)
from mpls.handlers.maxplus_core import maxplus_scores_bruteforce, naive_objective
from mpls.models.maxplus import BOTTOM, MaxPlusMatrix
from mpls.models.scores import ScoreKind, ScoreVector


def test_exact_scores_worked_examples(example_a, example_a_parallel):
    scores = exact_scores(example_a)
    assert scores.rank_k == 2
    assert scores.values.sum() == pytest.approx(2.0)
    np.testing.assert_allclose(scores.distribution(), [0.4999, 0.4959, 0.0041], atol=5e-4)

    parallel = exact_scores(example_a_parallel).distribution()
    np.testing.assert_allclose(parallel[:2], [0.5, 0.5], atol=5e-4)
    assert parallel[2] == pytest.approx(5e-5, rel=0.2)


def test_exact_scores_rank_deficient():
    scores = exact_scores(np.array([[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]]))
    assert scores.rank_k == 1
    assert scores.values.sum() == pytest.approx(1.0)
    np.testing.assert_allclose(scores.values, np.array([1, 4, 9]) / 14)


def test_exact_scores_ignore_negligible_column():
    scores = exact_scores(np.array([[1.0, 1e-20], [1.0, -1e-20], [1.0, 0.0]]))
    assert scores.rank_k == 1
    np.testing.assert_allclose(scores.values, [1 / 3, 1 / 3, 1 / 3], atol=1e-12)


def test_exact_scores_are_scale_invariant(example_a):
    expected = exact_scores(example_a)
    for c in (1e-8, -3.7, 1e5, 2 - 1j):
        scores = exact_scores(c * example_a)
        assert scores.rank_k == expected.rank_k
        np.testing.assert_allclose(scores.values, expected.values, atol=1e-10)


def test_exact_scores_complex_and_identity():
    rng = np.random.default_rng(2)
    a = rng.normal(size=(6, 3)) + 1j * rng.normal(size=(6, 3))
    scores = exact_scores(a)
    assert scores.rank_k == 3
    assert ((scores.values >= 0) & (scores.values <= 1 + 1e-12)).all()
    padded = np.vstack([np.eye(3), np.zeros((2, 3))])
    np.testing.assert_allclose(exact_scores(padded).values, [1, 1, 1, 0, 0], atol=1e-12)
    assert coherence(exact_scores(padded)) == pytest.approx(1.0)


def test_exact_scores_reject_non_finite():
    with pytest.raises(DomainError):
        exact_scores(np.array([[1.0], [np.inf]]))


def test_log_abs():
    np.testing.assert_allclose(log_abs(np.array([[1000.0, 1000.0], [1.0, 100.0], [10.0, 1.0]])).to_dense(),
                               [[3, 3], [0, 2], [1, 0]])
    sparse = log_abs(np.array([[0.0, -10.0]]))
    assert sparse.storage == "sparse"
    np.testing.assert_array_equal(sparse.to_dense(), [[BOTTOM, 1.0]])


def test_maxplus_scores_worked_examples(example_log):
    np.testing.assert_array_equal(maxplus_scores(example_log).values, [0.0, 0.0, -2.0])
    parallel = MaxPlusMatrix.from_dense([[3, 3], [0, 2], [1, 1]])
    np.testing.assert_array_equal(maxplus_scores(parallel).values, [0.0, 0.0, -2.0])


def test_maxplus_scores_square_is_zero():
    rng = np.random.default_rng(4)
    a = random_maxplus(rng, (5, 5))
    np.testing.assert_array_equal(maxplus_scores(a).values, np.zeros(5))


def test_maxplus_scores_match_bruteforce():
    rng = np.random.default_rng(17)
    for _ in range(100):
        a = random_maxplus(rng, (8, 3))
        np.testing.assert_allclose(maxplus_scores(a).values, maxplus_scores_bruteforce(a), atol=1e-9)


def test_maxplus_scores_sparse_path():
    rng = np.random.default_rng(19)
    checked = 0
    for _ in range(50):
        a = random_maxplus(rng, (8, 3), bottom_fraction=0.3)
        try:
            expected = maxplus_scores_bruteforce(a)
        except DomainError:
            with pytest.raises(StructuralRankError):
                maxplus_scores(a.as_sparse())
            continue
        np.testing.assert_allclose(maxplus_scores(a.as_sparse()).values, expected, atol=1e-9)
        checked += 1
    assert checked > 0


def test_assign_and_score_reports_assignment(example_log):
    scores, res = assign_and_score(example_log)
    assert res.phi.phi == (0, 1)
    assert scores.kind == ScoreKind.MAXPLUS


def test_naive_scores(example_log):
    np.testing.assert_array_equal(naive_maxplus_scores(example_log).values, [0.0, -1.0, -2.0])
    with pytest.raises(DomainError):
        naive_maxplus_scores(MaxPlusMatrix.from_dense([[1.0, BOTTOM], [2.0, BOTTOM]]))


def test_naive_scores_are_supremum_of_objective():
    rng = np.random.default_rng(23)
    a = random_maxplus(rng, (6, 3))
    q = naive_maxplus_scores(a).values
    for _ in range(1000):
        assert (naive_objective(a, rng.normal(scale=3.0, size=3)) <= q + 1e-12).all()
    dense = a.to_dense()
    best_col = np.argmax(dense - dense.max(axis=0), axis=1)
    for i, j in enumerate(best_col):
        indicator = np.full(3, BOTTOM)
        indicator[j] = 0.0
        assert naive_objective(a, indicator)[i] == pytest.approx(q[i])


def test_cnrn_scores(example_a):
    np.testing.assert_allclose(cnrn_scores(np.array([[3.0], [4.0]])).values, [9 / 25, 16 / 25])
    np.testing.assert_allclose(cnrn_scores(np.eye(4)).values, np.ones(4))
    q = cnrn_scores(example_a).values
    norms = np.linalg.norm(example_a, axis=0)
    np.testing.assert_allclose(q, ((example_a / norms) ** 2).sum(axis=1))
    np.testing.assert_allclose(q[1:], [0.00990, 0.00010], rtol=2e-2)
    assert q.sum() == pytest.approx(2.0)
    with pytest.raises(DomainError):
        cnrn_scores(np.array([[1.0, 0.0], [2.0, 0.0]]))


def test_softmax_worked_examples():
    np.testing.assert_allclose(softmax([0.0, 0.0, -2.0]).values, [0.4975, 0.4975, 0.0050], atol=5e-4)
    np.testing.assert_allclose(softmax([0.0, -1.0, -2.0]).values, [0.9009, 0.0901, 0.0090], atol=5e-4)
    np.testing.assert_allclose(softmax([0.0, BOTTOM]).values, [1.0, 0.0])
    with pytest.raises(DomainError):
        softmax([BOTTOM, BOTTOM])


def test_softmax_rejects_probability_scores(example_a):
    with pytest.raises(DomainError):
        softmax(exact_scores(example_a))


def test_score_vector_invariants():
    with pytest.raises(ValueError):
        ScoreVector(kind=ScoreKind.MAXPLUS, values=np.array([0.0, 0.5]))
    with pytest.raises(ValueError):
        ScoreVector(kind=ScoreKind.EXACT, values=np.array([1.0]))


def test_heuristic_approximation(example_a, example_a_parallel):
    approx = heuristic_approximation(example_a).values
    np.testing.assert_allclose(approx, [0.4975, 0.4975, 0.0050], atol=5e-4)
    # within one order of magnitude of p/k
    exact = exact_scores(example_a).distribution()
    assert (np.abs(np.log10(approx / exact)) <= 1).all()
    # the parallel third row is overestimated by more than a factor 10
    exact_parallel = exact_scores(example_a_parallel).distribution()
    assert heuristic_approximation(example_a_parallel).values[2] / exact_parallel[2] > 10


def test_phase_ensemble_is_independent_of_workers(example_a):
    serial = random_phase_ensemble(example_a, 40, seed=5, row=2, workers=1)
    threaded = random_phase_ensemble(example_a, 40, seed=5, row=2, workers=4)
    np.testing.assert_array_equal(serial, threaded)
    assert random_phase_ensemble(example_a, 3, seed=5).shape == (3, 3)
    with pytest.raises(DomainError):
        random_phase_ensemble(example_a, 3, row=3)


def test_phase_band_fractions():
    in_band, lower_tail = phase_band_fractions(np.array([-2.0, -2.5, -3.5, 0.0]), -2.0)
    assert in_band == 0.5
    assert lower_tail == 0.25


def _ensemble_fractions(a, trials):
    samples = random_phase_ensemble(a, trials, seed=0, row=2)
    prediction = np.log10(heuristic_approximation(np.abs(a)).values[2])
    return phase_band_fractions(samples, prediction)


def test_phase_ensemble_band_and_tail(example_a, example_a_parallel):
    in_band, _ = _ensemble_fractions(example_a, 2000)
    assert in_band >= 0.99
    _, lower_tail = _ensemble_fractions(example_a_parallel, 2000)
    assert lower_tail >= 0.01


@pytest.mark.slow
def test_phase_ensemble_full_trials(example_a, example_a_parallel):
    in_band, _ = _ensemble_fractions(example_a, 10_000)
    assert in_band >= 0.99
    _, lower_tail = _ensemble_fractions(example_a_parallel, 10_000)
    assert lower_tail >= 0.01


def test_maxplus_scores_with_tied_entries_match_bruteforce():
    rng = np.random.default_rng(23)
    for _ in range(100):
        a = random_maxplus(rng, (7, 3), integers=True)
        expected = maxplus_scores_bruteforce(a)
        np.testing.assert_allclose(maxplus_scores(a).values, expected, atol=1e-9)
        np.testing.assert_allclose(maxplus_scores(a, truncate=False).values, expected, atol=1e-9)


def test_maxplus_scores_ignore_constant_shift():
    rng = np.random.default_rng(24)
    for _ in range(20):
        a = random_maxplus(rng, (9, 3), bottom_fraction=0.2)
        try:
            expected = maxplus_scores(a).values
        except StructuralRankError:
            continue
        for c in (-7.5, 0.25, 12.0):
            np.testing.assert_allclose(maxplus_scores(a.shifted(c)).values, expected, atol=1e-9)
            np.testing.assert_allclose(maxplus_scores(a.as_sparse().shifted(c)).values, expected, atol=1e-9)


def test_softmax_ignores_constant_shift():
    rng = np.random.default_rng(25)
    scores = np.append(-rng.exponential(size=6), BOTTOM)
    expected = softmax(scores).values
    for c in (-3.0, 0.5, 40.0):
        np.testing.assert_allclose(softmax(scores + c).values, expected, atol=1e-12)
