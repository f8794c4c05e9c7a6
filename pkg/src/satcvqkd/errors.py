"""Exception hierarchy shared across the package.

The CLI maps ValidationError (and plain ValueError) to exit code 2 and
NumericalError to exit code 3.
"""

from __future__ import annotations


class ValidationError(ValueError):
    """A config or argument failed validation; carries the offending keys."""

    def __init__(self, message: str, keys: list[str] | None = None):
        super().__init__(message)
        self.keys = keys or []


class NumericalError(RuntimeError):
    """A numerical routine failed to reach its accuracy target."""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not converge.

    Carries the best available estimate and its error bound so callers can
    decide whether to proceed anyway.
    """

    def __init__(self, message: str, estimate: complex, error_bound: float):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class UnsupportedProtocolError(ValidationError):
    """Raised when an operation does not support the requested protocol."""
