"""Exception taxonomy shared by all margincount modules.

Every error raised by the library derives from :class:`MarginCountError`,
so callers can catch the whole family with one clause.  Individual classes
carry no machinery beyond their meaning; a few hold a payload (for example
:class:`BudgetExhausted` keeps the sampling report that was accumulated
before the budget ran out, and :class:`NoInterior` keeps the best dual
iterate seen before divergence was declared).
"""

from __future__ import annotations


class MarginCountError(Exception):
    """Base class for all errors raised by this package."""


class Unbalanced(MarginCountError):
    """Row sums and column sums have different totals."""


class NegativeEntry(MarginCountError):
    """A margin vector contains a negative entry."""


class LengthMismatch(MarginCountError):
    """Vectors or grids whose lengths/shapes must agree do not."""


class BadMargins(MarginCountError):
    """Margins violate a structural precondition of the requested operation."""


class TooLarge(MarginCountError):
    """Instance exceeds an explicit size guard of an exponential algorithm."""


class NotSquare(MarginCountError):
    """Permanent requested for a non-square matrix."""


class DomainViolation(MarginCountError):
    """Dual point lies outside the domain of the objective."""


class NoInterior(MarginCountError):
    """Dual iterates diverged: the transportation polytope has empty interior.

    The exception carries the last (near-optimal) state of the solver in
    ``partial`` so diagnostic callers can still inspect the objective value
    reached before divergence was declared.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class NotConverged(MarginCountError):
    """Iteration limit reached before the gradient tolerance was met."""


class OutOfRange(MarginCountError):
    """Numeric argument outside the range required by the formula."""


class KernelDimensionError(MarginCountError):
    """Quadratic form does not have the expected one-dimensional kernel."""


class NonIntegerAverage(MarginCountError):
    """Weighted average of margins is not an integer vector."""


class DominationViolated(MarginCountError):
    """Claimed domination (majorization) relation does not hold."""


class BudgetExhausted(MarginCountError):
    """Rejection sampler used its whole trial budget without one acceptance.

    ``report`` holds the :class:`~margincount.sampler.SampleReport` with the
    trial statistics, so the observed zero-acceptance run is not lost.
    """

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report
