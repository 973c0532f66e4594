"""
Row-sampling plans and sampled least-squares solutions.
"""

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from mpls.core.constants import DISTRIBUTION_TOL


class SamplingPlan(BaseModel):
    """Draw r rows with replacement from distribution p."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    p: np.ndarray = Field(..., description="row probabilities")
    r: int = Field(..., ge=1, description="number of draws")
    seed: int = Field(default=0, ge=0)
    label: str = Field(default="sample", description="stream label for seed splitting")
    trial: int = Field(default=0, ge=0, description="stream index for seed splitting")

    @field_validator("p", mode="before")
    @classmethod
    def _as_array(cls, value):
        return np.asarray(value, dtype=float)

    @model_validator(mode="after")
    def _check_distribution(self) -> "SamplingPlan":
        p = self.p
        if p.ndim != 1 or p.size == 0:
            raise ValueError("distribution must be a non-empty vector")
        if not np.isfinite(p).all() or (p < 0).any():
            raise ValueError("distribution entries must be finite and >= 0")
        # summation error grows with n
        if abs(p.sum() - 1.0) > DISTRIBUTION_TOL * max(1.0, math.sqrt(p.size)):
            raise ValueError(f"distribution sums to {p.sum()!r}, not 1")
        return self


class SampleDraws(BaseModel):
    """Compact sampling matrix: row i of M is weights[i] * e_{indices[i]}^T."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    indices: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        return int(self.indices.size)


class SampledSolution(BaseModel):
    """Solution of the sampled problem and its quality on the full problem."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    x_hat: np.ndarray
    sampled_rows: np.ndarray = Field(..., description="drawn row indices, repeats kept")
    residual_full: float = Field(..., ge=0)
    residual_opt: float = Field(..., ge=0)
    ratio: float
    deficient: bool = Field(default=False, description="sampled system was rank deficient")

    @model_validator(mode="after")
    def _check_ratio(self) -> "SampledSolution":
        if self.ratio < 1.0 - 1e-10:
            raise ValueError(f"ratio {self.ratio} below 1: x_hat beats the least-squares optimum")
        return self
