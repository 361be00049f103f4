"""Exception hierarchy shared by every module.

The CLI maps :class:`PreconditionError` to exit status 2 and
:class:`BudgetExceeded` to exit status 3.
"""

from __future__ import annotations


class CopnumError(Exception):
    pass


class PreconditionError(CopnumError, ValueError):
    """An operation was called outside its domain."""


class GroupTooLarge(PreconditionError):
    pass


class NonGenerating(PreconditionError):
    pass


class TNotSubset(PreconditionError):
    pass


class EmptyS(PreconditionError):
    pass


class UnknownFormat(PreconditionError):
    pass


class ZeroK(PreconditionError):
    pass


class BoundaryInstance(PreconditionError):
    pass


class NoValidPair(PreconditionError):
    pass


class OutOfRegime(PreconditionError):
    pass


class NotPrime(PreconditionError):
    pass


class PTooSmall(PreconditionError):
    pass


class ZeroDifference(PreconditionError):
    pass


class SizeMismatch(PreconditionError):
    pass


class IllegalAdversaryMove(CopnumError):
    pass


class IllegalMove(CopnumError):
    """A recorded or proposed move is not in the mover's moveset."""


class StrategyInvariantError(CopnumError, AssertionError):
    """The cop strategy broke one of its own bookkeeping invariants."""


class BudgetExceeded(CopnumError):
    def __init__(self, estimate: int, budget: int) -> None:
        super().__init__(
            f"estimated {estimate:,} expanded arcs exceeds budget {budget:,}"
        )
        self.estimate = estimate
        self.budget = budget
