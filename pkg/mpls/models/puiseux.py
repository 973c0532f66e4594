"""
Finite Puiseux series with rational exponents and complex coefficients, and
matrices of them.

A series is stored as its nonzero terms sorted by exponent. Products keep only
the SERIES_MAX_TERMS lowest-order terms: valuations and leading coefficients
only ever depend on the lowest-order part.
"""

from fractions import Fraction
from numbers import Number
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from mpls.core.constants import CANCELLATION_TOL, SERIES_MAX_TERMS
from mpls.core.errors import DomainError, ShapeError

Term = Tuple[Fraction, complex]


def _exponent(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**6)
    return Fraction(value)


class PuiseuxSeries:
    """Finite sum of c * z**e with rational e and complex c."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[Tuple[object, Number]] = ()):
        merged: dict[Fraction, complex] = {}
        scale: dict[Fraction, float] = {}
        for exp, coef in terms:
            exp = _exponent(exp)
            coef = complex(coef)
            merged[exp] = merged.get(exp, 0j) + coef
            scale[exp] = max(scale.get(exp, 0.0), abs(coef))
        self._terms: Tuple[Term, ...] = tuple(
            (e, merged[e])
            for e in sorted(merged)
            if abs(merged[e]) > CANCELLATION_TOL * scale[e]
        )

    @classmethod
    def monomial(cls, coefficient: Number, exponent) -> "PuiseuxSeries":
        return cls([(exponent, coefficient)])

    @classmethod
    def constant(cls, value: Number) -> "PuiseuxSeries":
        return cls([(0, value)])

    @property
    def terms(self) -> Tuple[Term, ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def lowest_exponent(self) -> Fraction:
        if not self._terms:
            raise DomainError("the zero series has no lowest-order term")
        return self._terms[0][0]

    def valuation(self) -> Fraction | float:
        """Minus the lowest exponent; -inf for the zero series."""
        return -self._terms[0][0] if self._terms else float("-inf")

    def leading_coefficient(self) -> complex:
        return self._terms[0][1] if self._terms else 0j

    def evaluate(self, z: complex) -> complex:
        """Sum of the terms at z (principal branch for fractional powers)."""
        if z == 0:
            if any(e < 0 for e, _ in self._terms):
                raise DomainError("cannot evaluate negative powers at z = 0")
            return complex(sum(c for e, c in self._terms if e == 0))
        z = complex(z)
        total = 0j
        for exp, coef in self._terms:
            if exp.denominator == 1:
                total += coef * z ** int(exp)
            else:
                total += coef * np.power(z, float(exp))
        return total

    # arithmetic

    def __add__(self, other: "PuiseuxSeries | Number") -> "PuiseuxSeries":
        if not isinstance(other, PuiseuxSeries):
            other = PuiseuxSeries.constant(other)
        return PuiseuxSeries(self._terms + other._terms)

    __radd__ = __add__

    def __neg__(self) -> "PuiseuxSeries":
        return PuiseuxSeries((e, -c) for e, c in self._terms)

    def __sub__(self, other: "PuiseuxSeries | Number") -> "PuiseuxSeries":
        if not isinstance(other, PuiseuxSeries):
            other = PuiseuxSeries.constant(other)
        return self + (-other)

    def __rsub__(self, other: Number) -> "PuiseuxSeries":
        return PuiseuxSeries.constant(other) - self

    def __mul__(self, other: "PuiseuxSeries | Number") -> "PuiseuxSeries":
        if not isinstance(other, PuiseuxSeries):
            return PuiseuxSeries((e, c * other) for e, c in self._terms)
        products = [
            (ea + eb, ca * cb)
            for ea, ca in self._terms[:SERIES_MAX_TERMS]
            for eb, cb in other._terms[:SERIES_MAX_TERMS]
        ]
        product = PuiseuxSeries(products)
        if len(product._terms) > SERIES_MAX_TERMS:
            truncated = PuiseuxSeries.__new__(PuiseuxSeries)
            truncated._terms = product._terms[:SERIES_MAX_TERMS]
            return truncated
        return product

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Number):
            other = PuiseuxSeries.constant(other)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"({c:g})*z^({e})" for e, c in self._terms)


class PuiseuxMatrix:
    """n×d matrix of Puiseux series with no entry identically zero."""

    __slots__ = ("_entries", "_shape")

    def __init__(self, entries: Sequence[Sequence[PuiseuxSeries]]):
        rows = tuple(tuple(row) for row in entries)
        if not rows or not rows[0]:
            raise ShapeError("Puiseux matrix must be non-empty")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise ShapeError("ragged Puiseux matrix")
        for i, row in enumerate(rows):
            for j, entry in enumerate(row):
                if not isinstance(entry, PuiseuxSeries):
                    raise TypeError(f"entry ({i}, {j}) is not a PuiseuxSeries")
                if entry.is_zero():
                    raise DomainError(f"entry ({i}, {j}) is identically zero")
        self._entries = rows
        self._shape = (len(rows), width)

    @classmethod
    def from_monomials(cls, coefficients, valuations) -> "PuiseuxMatrix":
        """Entry (i, j) is coefficients[i][j] * z**(-valuations[i][j])."""
        coefficients = np.asarray(coefficients, dtype=complex)
        return cls(
            [
                [PuiseuxSeries.monomial(coefficients[i, j], -_exponent(v)) for j, v in enumerate(row)]
                for i, row in enumerate(valuations)
            ]
        )

    @property
    def shape(self) -> Tuple[int, int]:
        return self._shape

    @property
    def n(self) -> int:
        return self._shape[0]

    @property
    def d(self) -> int:
        return self._shape[1]

    def __getitem__(self, index: Tuple[int, int]) -> PuiseuxSeries:
        i, j = index
        return self._entries[i][j]

    def rows(self) -> Tuple[Tuple[PuiseuxSeries, ...], ...]:
        return self._entries

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PuiseuxMatrix":
        return PuiseuxMatrix([[self._entries[i][j] for j in cols] for i in rows])

    def with_leading_coefficients(self, coefficients) -> "PuiseuxMatrix":
        """Rescale each entry so its leading coefficient becomes coefficients[i][j]."""
        coefficients = np.asarray(coefficients, dtype=complex)
        if coefficients.shape != self._shape:
            raise ShapeError(f"coefficients shape {coefficients.shape} != {self._shape}")
        return PuiseuxMatrix(
            [
                [entry * (coefficients[i, j] / entry.leading_coefficient()) for j, entry in enumerate(row)]
                for i, row in enumerate(self._entries)
            ]
        )

    def __repr__(self) -> str:
        return f"PuiseuxMatrix(shape={self._shape})"


class SlopeFit(BaseModel):
    """Asymptotic growth rates of leverage scores fitted over a z-grid.

    `estimates[i]` is minus the least-squares slope of log10 p_i(Ã(z))
    against log10 z; `target` holds the max-plus scores of V(Ã).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    z_grid: np.ndarray
    estimates: np.ndarray
    residuals: np.ndarray = Field(..., description="sum of squared fit residuals per row")
    target: np.ndarray
    log_scores: np.ndarray = Field(..., description="log10 p_i(Ã(z)), shape (len(z_grid), n)")

    @property
    def abs_err(self) -> np.ndarray:
        return np.abs(self.estimates - self.target)

    def trace(self) -> np.ndarray:
        """-log10 p_i / log10 z at every grid point, shape (len(z_grid), n)."""
        return -self.log_scores / np.log10(self.z_grid)[:, None]


class InverseValuationFit(BaseModel):
    """Valuations of M̃^{-1} estimated numerically next to V(M̃)^{⊗-1}."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    estimated: np.ndarray
    predicted: np.ndarray
    generic: bool = Field(..., description="leading coefficients passed the genericity check")
    max_abs_error: Optional[float] = Field(default=None, description="None when the comparison was skipped")
