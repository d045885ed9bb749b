"""Exception types shared across the package."""


class RiverMetricError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionError(RiverMetricError, ValueError):
    """An input violates the documented preconditions of an operation."""


class ToleranceError(RiverMetricError, ArithmeticError):
    """Two computations that must agree disagreed beyond their tolerance."""
