"""Exception hierarchy shared by all ballasy modules."""

from __future__ import annotations


class BallAsyError(Exception):
    """Base class for every error raised by this package."""


class DomainError(BallAsyError, ValueError):
    """A point or parameter lies outside the admissible domain."""


class DimensionError(BallAsyError, ValueError):
    """Two points of different complex dimension were combined."""


class UncoveredRegimeError(BallAsyError):
    """Parameters fall in no case of the cited estimate."""

    def __init__(self, family: str, detail: str):
        super().__init__(f"uncovered regime for {family}: {detail}")
        self.family = family
        self.detail = detail


class QuadratureError(BallAsyError, RuntimeError):
    """Numerical integration did not reach the requested tolerance.

    The best available estimate is kept on the exception so callers can
    still report it.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class CaseDriftError(BallAsyError):
    """A sweep plan crosses a case boundary of the estimate table."""
