"""Exception hierarchy shared by all torsol modules.

Two broad classes matter for callers (and for CLI exit codes): invalid
input data (malformed or mathematically unusable objects) versus failed
preconditions of an otherwise well-formed request (e.g. an unsuitable
prime).
"""

from __future__ import annotations

__all__ = [
    "TorsolError",
    "InvalidInputError",
    "RankDeficientError",
    "UnboundedPolytopeError",
    "GridAlignmentError",
    "PreconditionError",
    "BadModulusError",
    "DegenerateColumnsError",
    "PositiveMeasureError",
    "InternalInvariantError",
]


class TorsolError(Exception):
    """Base class for all errors raised by torsol."""


class InvalidInputError(TorsolError):
    """Input data is malformed or mathematically unusable."""


class RankDeficientError(InvalidInputError):
    """Coefficient matrix does not have full row rank over the rationals."""


class UnboundedPolytopeError(InvalidInputError):
    """An H-polytope expected to be bounded has a recession direction."""

    def __init__(self, message: str, direction=None):
        super().__init__(message)
        self.direction = direction


class GridAlignmentError(InvalidInputError):
    """A set endpoint does not lie on the required 1/p grid."""

    def __init__(self, message: str, endpoint=None):
        super().__init__(message)
        self.endpoint = endpoint


class PreconditionError(TorsolError):
    """A documented precondition of an operation is not met."""


class BadModulusError(PreconditionError):
    """The modulus p fails a requirement (primality, rank, size bound)."""


class DegenerateColumnsError(PreconditionError):
    """The matrix has degenerate columns, which the operation rejects.

    A column j is degenerate when deleting it drops the rank; an integer
    witness v with v^T L = (0, ..., l, ..., 0), l != 0 in position j, is
    attached.  Such systems pin some solution coordinate to finitely many
    points; remove those points (or delete the column and the pinned
    variable) before calling operations that need surjective coordinate
    projections.
    """

    def __init__(self, message: str, columns=()):
        super().__init__(message)
        self.columns = tuple(columns)


class PositiveMeasureError(PreconditionError):
    """Sets expected to carry zero solution measure do not; a witness
    solution point is attached."""

    def __init__(self, message: str, witness=None, value=None):
        super().__init__(message)
        self.witness = witness
        self.value = value


class InternalInvariantError(TorsolError):
    """An exact internal cross-check failed; indicates a bug, not bad input."""
