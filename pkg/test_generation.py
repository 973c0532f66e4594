"""
Tests for seeded test-matrix generation.
"""

import numpy as np
import pytest
from pydantic import ValidationError

from mpls.core.errors import DomainError
from mpls.handlers.generation import covariance, generate, split_problem
from mpls.handlers.leverage import coherence, exact_scores
from mpls.models.experiment import ExperimentConfig, Regime


def test_covariance_entries():
    sigma = covariance(4, 2.0, 0.5)
    assert sigma[0, 0] == 2.0
    assert sigma[0, 1] == 1.0
    assert sigma[0, 2] == 0.5
    np.testing.assert_array_equal(sigma, sigma.T)


def test_generation_is_deterministic():
    config = ExperimentConfig(n=200, d=5, seed=3, regime=Regime.COHERENT)
    np.testing.assert_array_equal(generate(config), generate(config))
    other = generate(config.model_copy(update={"seed": 4}))
    assert not np.array_equal(generate(config), other)


def test_gaussian_rows_match_covariance():
    config = ExperimentConfig(n=5000, d=11, seed=0)
    a = generate(config)
    assert a.shape == (5000, 11)
    np.testing.assert_allclose(a.mean(axis=0), 1.0, atol=0.1)
    sample = np.cov(a, rowvar=False)
    expected = covariance(11, config.sigma_base, config.sigma_decay)
    assert np.linalg.norm(sample - expected) / np.linalg.norm(expected) < 0.1


def test_heavy_tails_raise_coherence():
    by_regime = {
        regime: coherence(exact_scores(generate(ExperimentConfig(n=2000, d=6, seed=1, regime=regime))))
        for regime in Regime
    }
    assert by_regime[Regime.COHERENT] > by_regime[Regime.INCOHERENT]
    assert by_regime[Regime.COHERENT] > 0.5


def test_split_problem():
    a = np.arange(12.0).reshape(4, 3)
    b, y = split_problem(a)
    np.testing.assert_array_equal(b, a[:, :2])
    np.testing.assert_array_equal(y, a[:, 2])
    with pytest.raises(DomainError):
        split_problem(np.ones((4, 1)))


def test_config_validation():
    with pytest.raises(ValidationError):
        ExperimentConfig(n=3, d=5)
    with pytest.raises(ValidationError):
        ExperimentConfig(n=10, d=2, r_grid=[0, 5])
    with pytest.raises(ValidationError):
        ExperimentConfig(n=10, d=2, regime="weird")
