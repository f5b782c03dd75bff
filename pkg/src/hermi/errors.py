"""Exception types shared across the package."""


class HermiError(Exception):
    """Base class for all library errors."""


class PreconditionError(HermiError, ValueError):
    """An argument violates the documented precondition of an operation."""


class SearchExhausted(HermiError):
    """A bounded enumeration finished without finding a solution."""


class PrecisionExhausted(HermiError, ArithmeticError):
    """Numerical evaluation could not be certified at the maximum precision."""
