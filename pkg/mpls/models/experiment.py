"""
Experiment configuration, emitted records and HTTP schemas.
"""

from enum import Enum
from typing import Any, Dict, List, Literal, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from mpls.core.constants import SIGMA_BASE, SIGMA_DECAY


class Regime(str, Enum):
    """Coherence regimes of generated matrices."""
    INCOHERENT = "incoherent"
    SEMI_COHERENT = "semi-coherent"
    COHERENT = "coherent"


ScoreSource = Literal["augmented", "design"]


class ExperimentConfig(BaseModel):
    """Seeded generation and run parameters."""

    regime: Regime = Regime.INCOHERENT
    n: int = Field(default=10_000, ge=2)
    d: int = Field(default=21, ge=2, description="columns of the generated matrix, including y")
    seed: int = Field(default=0, ge=0)
    sigma_base: float = Field(default=SIGMA_BASE, gt=0)
    sigma_decay: float = Field(default=SIGMA_DECAY)
    r_grid: List[int] = Field(default_factory=lambda: [250, 500, 1000, 2000])
    trials: int = Field(default=100, ge=1)
    workers: int = Field(default=1, ge=1)
    score_source: ScoreSource = Field(
        default="augmented",
        description="sampling scores from [B, y] (augmented) or from B alone (design)",
    )

    @model_validator(mode="after")
    def _check_extents(self) -> "ExperimentConfig":
        if self.n < self.d:
            raise ValueError(f"need n >= d, got n={self.n}, d={self.d}")
        if any(r < 1 for r in self.r_grid):
            raise ValueError("sample sizes must be positive")
        return self


class ExperimentRecord(BaseModel):
    """Result of one run: named tables plus a JSON-able summary."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    kind: str = Field(..., description="scores, lsq-bench, puiseux-converge, phase-ensemble, gen")
    seed: int
    config: Dict[str, Any] = Field(default_factory=dict)
    tables: Dict[str, pd.DataFrame] = Field(default_factory=dict)
    summary: Dict[str, Any] = Field(default_factory=dict)
    streams: Dict[str, int] = Field(default_factory=dict, description="derived stream seeds")
    matrices: Dict[str, np.ndarray] = Field(default_factory=dict, description="written as Matrix Market")


# HTTP schemas

class ScoreRequest(BaseModel):
    """Real matrix to score, row-major."""
    matrix: List[List[float]] = Field(..., min_length=1)


class ScoreResponse(BaseModel):
    n: int
    d: int
    rank: int
    exact: List[float] = Field(..., description="p(A)/k")
    maxplus: List[Optional[float]] = Field(..., description="max-plus scores of log10|A|; null for -inf")
    heuristic: List[float] = Field(..., description="softmax of the max-plus scores")
    naive: List[Optional[float]]
    cnrn: List[float] = Field(..., description="q(A)/d")


class AssignmentRequest(BaseModel):
    """Max-plus matrix, row-major; null entries are -inf."""
    matrix: List[List[Optional[float]]] = Field(..., min_length=1)


class AssignmentResponse(BaseModel):
    phi: List[int] = Field(..., description="1-based row assigned to each column")
    weight: float
    row_duals: Dict[int, float] = Field(..., description="1-based candidate row -> u")
    col_duals: List[float]
    scores: List[Optional[float]]
    truncated: bool
    rows_kept: int
