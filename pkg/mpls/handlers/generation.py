"""
Random test matrices with controllable coherence.

Rows are i.i.d. with mean 1 and scale matrix Sigma[i][j] = base * decay**|i-j|.
Gaussian rows give incoherent matrices; multivariate t rows with 3 and 1
degrees of freedom give semi-coherent and coherent ones.
"""

import logging

import numpy as np
from scipy import linalg

from mpls.core.constants import REGIME_DOF
from mpls.core.errors import DomainError
from mpls.models.experiment import ExperimentConfig
from mpls.utils.hashing import stream_rng

logger = logging.getLogger(__name__)


def covariance(d: int, base: float, decay: float) -> np.ndarray:
    """Sigma[i][j] = base * decay**|i-j|."""
    index = np.arange(d)
    return base * np.power(decay, np.abs(index[:, None] - index[None, :]))


def generate(config: ExperimentConfig) -> np.ndarray:
    """n×d matrix for the configured regime, reproducible from config.seed.

    A t row is 1 + g * sqrt(nu / chi2_nu) with g ~ N(0, Sigma).
    """
    sigma = covariance(config.d, config.sigma_base, config.sigma_decay)
    try:
        factor = linalg.cholesky(sigma, lower=True)
    except linalg.LinAlgError as exc:
        raise DomainError(f"covariance is not positive definite: {exc}") from exc

    rng = stream_rng(config.seed, f"gen/{config.regime.value}")
    gaussian = rng.standard_normal((config.n, config.d)) @ factor.T
    dof = REGIME_DOF[config.regime.value]
    if dof is not None:
        gaussian *= np.sqrt(dof / rng.chisquare(dof, size=config.n))[:, None]
    logger.debug("generated %s matrix %dx%d", config.regime.value, config.n, config.d)
    return 1.0 + gaussian


def split_problem(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(B, y): the first d-1 columns and the last column."""
    if a.ndim != 2 or a.shape[1] < 2:
        raise DomainError("need at least two columns to split off a right-hand side")
    return a[:, :-1], a[:, -1]
