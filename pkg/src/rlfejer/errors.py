"""Exception types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class ConvergenceError(RuntimeError):
    """Adaptive refinement ran out of budget before meeting the tolerance.

    The best available estimate is kept on the exception so callers can
    still inspect it.
    """

    def __init__(self, message: str, value: float = float("nan"),
                 error_estimate: float = float("inf"), evaluations: int = 0):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate
        self.evaluations = evaluations


class MissingParameterError(ValueError):
    """A bound formula needs a parameter (s, or a Hoelder pair) that was not given."""


class HypothesisWarning(UserWarning):
    """A theorem's hypothesis could not be certified numerically."""


class ConfigError(ValueError):
    """A sweep configuration could not be parsed or validated."""
