"""Exception types shared across the package."""


class SfdLabError(Exception):
    """Base class for all package errors."""


class ParameterError(SfdLabError, ValueError):
    """A parameter is outside the supported domain."""


class UnsupportedBranchError(ParameterError):
    """The requested closed form does not exist for these parameters."""


class AccuracyError(SfdLabError, ArithmeticError):
    """The requested accuracy could not be reached.

    Carries the best available estimate and an error bound so the caller
    can decide whether the result is still usable.
    """

    def __init__(self, message, value=None, bound=None):
        super().__init__(message)
        self.value = value
        self.bound = bound


class DivergenceError(AccuracyError):
    """A truncated series stopped contracting before the tolerance was met."""


class SynthesisError(SfdLabError, RuntimeError):
    """Gaussian noise synthesis failed (embedding not nonnegative definite)."""


class DomainSizeError(SfdLabError, ValueError):
    """A truncated spatial domain is too small for the requested solve."""

    def __init__(self, message, suggested_half_width=None):
        super().__init__(message)
        self.suggested_half_width = suggested_half_width
