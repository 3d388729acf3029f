"""Exception hierarchy.

Every error carries a short machine-readable ``code`` (the class name) and an
optional ``detail`` payload, so the CLI can serialize failures uniformly.
"""
from __future__ import annotations

from typing import Any


class PointedHopfError(Exception):
    """Base class for all library errors."""

    exit_code = 2

    def __init__(self, message: str = "", detail: Any = None):
        super().__init__(message or type(self).__name__)
        self.detail = detail

    @property
    def code(self) -> str:
        return type(self).__name__

    def as_dict(self) -> dict:
        out = {"error": self.code, "message": str(self)}
        if self.detail is not None:
            out["detail"] = self.detail
        return out


# scalars
class DivisionByZero(PointedHopfError, ZeroDivisionError):
    pass


class ZeroInput(PointedHopfError, ValueError):
    pass


class SpecializationPole(PointedHopfError, ValueError):
    pass


class ParseError(PointedHopfError, ValueError):
    """Malformed literal or file; ``detail`` holds the location."""


# abgroup
class GroupMismatch(PointedHopfError, ValueError):
    pass


# cartan
class NotGeneralizedCartan(PointedHopfError, ValueError):
    pass


class NotFiniteType(PointedHopfError, ValueError):
    pass


# datum
class CartanConditionViolated(PointedHopfError, ValueError):
    pass


class QiiIsOne(PointedHopfError, ValueError):
    pass


class NoQJ(PointedHopfError, ValueError):
    pass


class NonLinkablePair(PointedHopfError, ValueError):
    pass


class InconsistentSymmetry(PointedHopfError, ValueError):
    pass


class MultipleLinksFromVertex(PointedHopfError, ValueError):
    pass


class OddCycle(PointedHopfError, ValueError):
    """Linking graph is not bipartite; ``detail`` is the cycle of components."""


class ReducedInvariantViolated(PointedHopfError, ValueError):
    pass


# braided / twist
class PositionOutOfRange(PointedHopfError, IndexError):
    pass


class DegreeBudgetExceeded(PointedHopfError):
    exit_code = 5


class CheckFailed(PointedHopfError):
    pass


# rep
class UnboundedSearch(PointedHopfError):
    exit_code = 4


class NoCharacterExists(PointedHopfError):
    pass


class NotQLS(PointedHopfError, ValueError):
    pass


class NotDominant(PointedHopfError):
    exit_code = 3


class BudgetExceeded(PointedHopfError):
    exit_code = 5


class InconsistentEAction(PointedHopfError):
    pass


class DimensionTooLarge(PointedHopfError):
    exit_code = 5


class OrderHypothesisViolated(PointedHopfError, ValueError):
    pass
