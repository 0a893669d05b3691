"""Exception types shared across the library."""


class InvalidInputError(ValueError):
    """An argument violates a documented precondition (bad grid, range, ...)."""


class UnsupportedParameterError(ValueError):
    """A parameter lies outside the supported regime (e.g. Hurst <= 1/2)."""


class NumericalError(RuntimeError):
    """A numerical step failed (e.g. covariance not positive definite)."""


class DivergenceError(RuntimeError):
    """A fixed-point iteration failed to contract.

    Carries the history of successive-difference ratios so callers can
    inspect how the iteration blew up.
    """

    def __init__(self, message, ratio_history=None):
        super().__init__(message)
        self.ratio_history = list(ratio_history) if ratio_history else []


class ConfigError(ValueError):
    """An experiment or CLI configuration is invalid."""
