"""
Exception hierarchy. Every error raised on purpose by the toolkit is an MplsError.
"""


class MplsError(Exception):
    """Base class for toolkit errors."""


class ShapeError(MplsError, ValueError):
    """Matrix or vector extents do not fit the operation."""


class DomainError(MplsError, ValueError):
    """Argument outside the domain of the operation."""


class CapacityError(MplsError, ValueError):
    """Input too large for a brute-force enumeration."""


class StructuralRankError(MplsError, ValueError):
    """Every assignment of the matrix hits a bottom (-inf) entry."""


class ConsistencyError(MplsError, RuntimeError):
    """An internal certificate (duals, reconstruction) failed verification."""


class FormatError(MplsError, ValueError):
    """Malformed input file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
