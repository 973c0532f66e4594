"""
Optimal-assignment results, diagnostics and Hungarian-scaled matrices.
"""

from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from mpls.models.maxplus import Injection, MaxPlusMatrix


class AssignmentReport(BaseModel):
    """Diagnostics of one assignment solve."""

    rows_total: int = Field(..., description="rows of the input matrix")
    rows_kept: int = Field(..., description="distinct rows left after column truncation")
    entries_kept: int = Field(..., description="finite entries passed to the solver")
    augmentations: int = 0
    heap_pops: int = 0
    repaired: bool = Field(default=False, description="duals re-solved on the square submatrix")


class AssignmentResult(BaseModel):
    """Optimal assignment with LP duals u (rows) and v (columns).

    Duals satisfy u[i] + v[j] >= a[i][j] on every retained finite entry and
    hold with equality on the assigned pairs.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    phi: Injection
    rows: np.ndarray = Field(..., description="candidate rows of the solved problem, ascending")
    row_duals: np.ndarray = Field(..., description="u, aligned with rows")
    col_duals: np.ndarray = Field(..., description="v, one per column")
    truncated: bool = False
    report: AssignmentReport

    @property
    def weight(self) -> float:
        return self.phi.weight

    def row_dual(self, row: int) -> float:
        pos = int(np.searchsorted(self.rows, row))
        if pos >= len(self.rows) or self.rows[pos] != row:
            raise KeyError(f"row {row} was not a candidate of the solved problem")
        return float(self.row_duals[pos])

    def dual_bound(self, phi: Tuple[int, ...]) -> float:
        """Upper bound sum_j (u[phi[j]] + v[j]) on the weight of any injection phi."""
        return float(sum(self.row_dual(i) for i in phi) + self.col_duals.sum())


class HungarianScaledMatrix(BaseModel):
    """H = P_pi ⊗ D1 ⊗ M ⊗ D2 with h[i][j] <= 0 and h[i][i] = 0.

    (P_pi)[i][j] = 0 iff j = pi[i], where pi[i] is the row of M assigned to
    column i; d1 is indexed by the rows of M and d2 by its columns.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    h: MaxPlusMatrix
    pi: Tuple[int, ...]
    d1: np.ndarray
    d2: np.ndarray
