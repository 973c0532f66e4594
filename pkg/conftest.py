"""
Shared fixtures: the worked-example matrices and the data directory.
"""

from pathlib import Path

import numpy as np
import pytest

from mpls.models.maxplus import MaxPlusMatrix

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def example_a() -> np.ndarray:
    """3x2 matrix whose third row is small but not parallel to the first."""
    return np.array([[1000.0, 1000.0], [1.0, 100.0], [10.0, 1.0]])


@pytest.fixture
def example_a_parallel() -> np.ndarray:
    """Same as example_a with the third row parallel to the first."""
    return np.array([[1000.0, 1000.0], [1.0, 100.0], [10.0, 10.0]])


@pytest.fixture
def example_log() -> MaxPlusMatrix:
    """log10|example_a|, written exactly."""
    return MaxPlusMatrix.from_dense([[3.0, 3.0], [0.0, 2.0], [1.0, 0.0]])


def random_maxplus(rng: np.random.Generator, shape, bottom_fraction: float = 0.0, integers: bool = False) -> MaxPlusMatrix:
    """Random dense max-plus matrix with roughly `bottom_fraction` of -inf entries."""
    values = rng.integers(0, 3, size=shape).astype(float) if integers else rng.normal(size=shape)
    if bottom_fraction:
        values[rng.random(shape) < bottom_fraction] = -np.inf
    return MaxPlusMatrix.from_dense(values)
