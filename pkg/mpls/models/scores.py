"""
Score vectors produced by the leverage handlers.
"""

from enum import Enum

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from mpls.core.constants import DISTRIBUTION_TOL


class ScoreKind(str, Enum):
    """Families of per-row scores."""
    EXACT = "exact-probability"
    MAXPLUS = "maxplus-log"
    NAIVE = "naive-log"
    CNRN = "cnrn"
    SOFTMAX = "softmax-distribution"


class ScoreVector(BaseModel):
    """Per-row scores of one family.

    Exact scores sum to the numerical rank; CNRN scores sum to d. Log-scale
    kinds are base-10 values <= 0 that may be -inf.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: ScoreKind
    values: np.ndarray
    rank_k: int | None = Field(default=None, description="numerical rank, exact scores only")

    @model_validator(mode="after")
    def _check_invariants(self) -> "ScoreVector":
        values = self.values
        if values.ndim != 1 or values.size == 0:
            raise ValueError("score vector must be 1-D and non-empty")
        if np.isnan(values).any():
            raise ValueError("score vector contains NaN")
        if self.kind in (ScoreKind.MAXPLUS, ScoreKind.NAIVE):
            if (values > 0).any():
                raise ValueError(f"{self.kind.value} scores must be <= 0")
        elif self.kind == ScoreKind.SOFTMAX:
            if (values < 0).any() or abs(values.sum() - 1.0) > 1e3 * DISTRIBUTION_TOL:
                raise ValueError("softmax output must be a probability distribution")
        elif self.kind == ScoreKind.EXACT:
            if self.rank_k is None:
                raise ValueError("exact scores need rank_k")
        values.setflags(write=False)
        return self

    def __len__(self) -> int:
        return int(self.values.size)

    def distribution(self) -> np.ndarray:
        """Probability distribution on rows: p/k for exact scores, q/d for CNRN."""
        if self.kind == ScoreKind.SOFTMAX:
            return self.values
        if self.kind == ScoreKind.EXACT:
            return self.values / max(self.rank_k, 1)
        if self.kind == ScoreKind.CNRN:
            return self.values / self.values.sum()
        raise ValueError(f"{self.kind.value} scores are log-scale; apply softmax first")

    def to_frame(self) -> pd.DataFrame:
        """Two-column frame `row_index,score` with 1-based row indices."""
        return pd.DataFrame({"row_index": np.arange(1, self.values.size + 1), "score": self.values})
