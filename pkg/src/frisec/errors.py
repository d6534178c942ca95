"""Exception types shared across the library."""


class FrisecError(Exception):
    """Base class for all library errors."""


class DomainError(FrisecError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(FrisecError, RuntimeError):
    """A numerical routine failed to reach the requested accuracy.

    Carries the best available estimate and the achieved error bound so
    callers can decide whether the partial result is still usable.
    """

    def __init__(self, message, estimate=None, error_bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class ConfigError(FrisecError, ValueError):
    """Invalid experiment configuration (bad file, bad value, bad combination)."""
