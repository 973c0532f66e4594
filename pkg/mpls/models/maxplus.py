"""
Max-plus matrices over R ∪ {-inf} and injections between their columns and rows.

Bottom is IEEE -inf, stored explicitly in dense storage and implied by
absence in sparse storage. NaN and +inf entries are rejected.
"""

from typing import Iterator, Literal, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import sparse

from mpls.core.errors import DomainError, ShapeError

BOTTOM = -np.inf

StorageKind = Literal["dense", "sparse"]


def _readonly(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


class MaxPlusMatrix:
    """Immutable n×d max-plus matrix, dense or sparse (finite entries only)."""

    __slots__ = ("_dense", "_csc", "_shape")

    def __init__(self, dense: np.ndarray | None = None, csc: sparse.csc_array | None = None):
        if (dense is None) == (csc is None):
            raise ValueError("exactly one of dense or csc storage is required")
        self._dense = dense
        self._csc = csc
        self._shape: Tuple[int, int] = tuple(dense.shape if dense is not None else csc.shape)

    # construction

    @classmethod
    def from_dense(cls, values: Sequence[Sequence[float]] | np.ndarray) -> "MaxPlusMatrix":
        """Dense matrix; -inf entries are bottom."""
        array = np.array(values, dtype=float, copy=True)
        if array.ndim == 1:
            array = array.reshape(-1, 1)
        if array.ndim != 2 or array.shape[0] < 1 or array.shape[1] < 1:
            raise ShapeError(f"max-plus matrix must be 2-D and non-empty, got shape {array.shape}")
        if np.isnan(array).any():
            raise DomainError("NaN entries are not allowed in a max-plus matrix")
        if np.isposinf(array).any():
            raise DomainError("+inf entries are not allowed in a max-plus matrix")
        return cls(dense=_readonly(array))

    @classmethod
    def from_entries(
        cls,
        shape: Tuple[int, int],
        rows: Sequence[int] | np.ndarray,
        cols: Sequence[int] | np.ndarray,
        values: Sequence[float] | np.ndarray,
    ) -> "MaxPlusMatrix":
        """Sparse matrix from finite coordinate entries; every other entry is bottom."""
        n, d = int(shape[0]), int(shape[1])
        if n < 1 or d < 1:
            raise ShapeError(f"max-plus matrix must be non-empty, got shape {(n, d)}")
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        values = np.asarray(values, dtype=float)
        if not (rows.shape == cols.shape == values.shape) or rows.ndim != 1:
            raise ShapeError("rows, cols and values must be 1-D arrays of equal length")
        if rows.size and (rows.min() < 0 or rows.max() >= n or cols.min() < 0 or cols.max() >= d):
            raise ShapeError(f"entry index outside shape {(n, d)}")
        if not np.isfinite(values).all():
            raise DomainError("sparse max-plus entries must be finite; omit bottom entries")
        order = np.lexsort((rows, cols))
        rows, cols, values = rows[order], cols[order], values[order]
        if rows.size > 1:
            dup = (rows[1:] == rows[:-1]) & (cols[1:] == cols[:-1])
            if dup.any():
                raise DomainError("duplicate coordinate entries")
        indptr = np.zeros(d + 1, dtype=np.int64)
        np.cumsum(np.bincount(cols, minlength=d), out=indptr[1:])
        # built from (data, indices, indptr) so explicit zeros survive
        return cls(csc=sparse.csc_array((values, rows, indptr), shape=(n, d)))

    @classmethod
    def from_columns(
        cls, shape: Tuple[int, int], columns: Sequence[Tuple[np.ndarray, np.ndarray]]
    ) -> "MaxPlusMatrix":
        """Sparse matrix from per-column (row indices, values) pairs."""
        rows = np.concatenate([np.asarray(r, dtype=np.int64) for r, _ in columns]) if columns else np.empty(0, np.int64)
        vals = np.concatenate([np.asarray(v, dtype=float) for _, v in columns]) if columns else np.empty(0)
        cols = np.concatenate([np.full(len(r), j, dtype=np.int64) for j, (r, _) in enumerate(columns)]) if columns else np.empty(0, np.int64)
        return cls.from_entries(shape, rows, cols, vals)

    @classmethod
    def identity(cls, size: int) -> "MaxPlusMatrix":
        """Max-plus identity: 0 on the diagonal, bottom elsewhere."""
        eye = np.full((size, size), BOTTOM)
        np.fill_diagonal(eye, 0.0)
        return cls.from_dense(eye)

    # shape and storage

    @property
    def shape(self) -> Tuple[int, int]:
        return self._shape

    @property
    def n(self) -> int:
        return self._shape[0]

    @property
    def d(self) -> int:
        return self._shape[1]

    @property
    def storage(self) -> StorageKind:
        return "dense" if self._dense is not None else "sparse"

    @property
    def finite_count(self) -> int:
        if self._dense is not None:
            return int(np.isfinite(self._dense).sum())
        return int(self._csc.nnz)

    def to_dense(self) -> np.ndarray:
        """Dense array view with -inf for bottom (read-only)."""
        if self._dense is not None:
            return self._dense
        out = np.full(self._shape, BOTTOM)
        col_of = np.repeat(np.arange(self.d), np.diff(self._csc.indptr))
        out[self._csc.indices, col_of] = self._csc.data
        return _readonly(out)

    def as_dense(self) -> "MaxPlusMatrix":
        return self if self._dense is not None else MaxPlusMatrix(dense=self.to_dense())

    def as_sparse(self) -> "MaxPlusMatrix":
        if self._csc is not None:
            return self
        rows, cols = np.nonzero(np.isfinite(self._dense))
        return MaxPlusMatrix.from_entries(self._shape, rows, cols, self._dense[rows, cols])

    def column(self, j: int) -> Tuple[np.ndarray, np.ndarray]:
        """Finite entries of column j as (row indices ascending, values)."""
        if self._dense is not None:
            col = self._dense[:, j]
            rows = np.flatnonzero(np.isfinite(col))
            return rows, col[rows]
        start, stop = self._csc.indptr[j], self._csc.indptr[j + 1]
        return self._csc.indices[start:stop], self._csc.data[start:stop]

    def columns(self) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
        for j in range(self.d):
            yield self.column(j)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int] | None = None) -> "MaxPlusMatrix":
        """Dense submatrix on the given rows (in that order) and columns."""
        dense = self.to_dense()
        cols = range(self.d) if cols is None else cols
        return MaxPlusMatrix.from_dense(dense[np.ix_(list(rows), list(cols))])

    def shifted(self, constant: float) -> "MaxPlusMatrix":
        """Add a finite constant to every finite entry (max-plus scalar product)."""
        if self._dense is not None:
            return MaxPlusMatrix.from_dense(self._dense + constant)
        csc = self._csc
        col_of = np.repeat(np.arange(self.d), np.diff(csc.indptr))
        return MaxPlusMatrix.from_entries(self._shape, csc.indices, col_of, csc.data + constant)

    def permute_rows(self, order: Sequence[int]) -> "MaxPlusMatrix":
        """Row i of the result is row order[i] of this matrix; storage kind is kept."""
        permuted = MaxPlusMatrix.from_dense(self.to_dense()[list(order), :])
        return permuted if self.storage == "dense" else permuted.as_sparse()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MaxPlusMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.to_dense(), other.to_dense())

    def __hash__(self) -> int:
        return hash((self.shape, self.to_dense().tobytes()))

    def __repr__(self) -> str:
        return f"MaxPlusMatrix(shape={self.shape}, storage={self.storage}, finite={self.finite_count})"


class Injection(BaseModel):
    """Injection phi from columns to rows (0-based), with its weight in its matrix."""

    model_config = ConfigDict(frozen=True)

    phi: Tuple[int, ...] = Field(..., description="phi[j] = row assigned to column j")
    weight: float = Field(..., description="sum of a[phi[j], j]; -inf if any entry is bottom")

    def assigns(self, row: int) -> bool:
        return row in self.phi

    def one_based(self) -> Tuple[int, ...]:
        return tuple(i + 1 for i in self.phi)
