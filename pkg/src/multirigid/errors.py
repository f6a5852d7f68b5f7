"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class MultirigidError(Exception):
    """Base class for every error raised by this package."""


class InvalidParams(MultirigidError, ValueError):
    pass


class InternalInvariantViolation(MultirigidError, AssertionError):
    """A structural identity failed; this signals a bug, not bad input."""


class NotRelevant(MultirigidError, ValueError):
    pass


class NotInTriangulation(MultirigidError, ValueError):
    pass


class NotAFace(MultirigidError, ValueError):
    pass


class PreconditionFailed(MultirigidError, ValueError):
    pass


class DuplicatePoint(MultirigidError, ValueError):
    pass


class ZeroVector(MultirigidError, ValueError):
    pass


class NotIncreasing(MultirigidError, ValueError):
    pass


class CorankNotOne(MultirigidError, ValueError):
    def __init__(self, corank: int):
        super().__init__(f"expected corank 1, got {corank}")
        self.corank = corank


class NotInSpan(MultirigidError, ValueError):
    pass


class NotIndependent(MultirigidError, ValueError):
    pass


class RankDeficientMatrix(MultirigidError, ValueError):
    def __init__(self, rank: int, expected: int):
        super().__init__(f"matrix rank {rank} is below the required {expected}")
        self.rank = rank
        self.expected = expected


class IcopViolated(MultirigidError, ValueError):
    pass


class MissingEdgeValue(MultirigidError, KeyError):
    pass


class NotConvex(MultirigidError, ValueError):
    pass


class RankUnexpected(MultirigidError, ValueError):
    pass


class NondegeneratePerturbationExhausted(MultirigidError, RuntimeError):
    pass
