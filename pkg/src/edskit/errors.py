"""Exception hierarchy shared by every module."""
from __future__ import annotations


class EdskitError(Exception):
    """Base class for all errors raised by edskit."""


class ChartError(EdskitError):
    """Bad chart declaration or a name that does not belong to the chart."""


class Refusal(EdskitError):
    """A documented precondition of an operation does not hold.

    The runner reports checks that raise this as ``refused`` rather than
    failed: the question could not be asked, so there is no verdict.
    """


class RankError(Refusal):
    """A family expected to be independent at the generic point is not."""


class NotClosedError(Refusal):
    pass


class QuadratureUnsupported(Refusal):
    pass
