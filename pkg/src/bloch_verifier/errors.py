"""Exception hierarchy shared by the library and the CLI."""

from typing import Any, Optional


class VerifierError(Exception):
    """Base class for every error raised by bloch_verifier."""


class DomainError(VerifierError, ValueError):
    """An argument lies outside the domain of an operation."""


class StateValidationError(VerifierError, ValueError):
    """A matrix failed density-matrix validation."""

    def __init__(self, message: str, verdict: Optional[Any] = None):
        super().__init__(message)
        self.verdict = verdict


class NumericError(VerifierError, ArithmeticError):
    """An integrand produced a non-finite value."""

    def __init__(self, message: str, location: Optional[Any] = None):
        super().__init__(message)
        self.location = location


class ResourceBudgetError(VerifierError, RuntimeError):
    """A computation would exceed the configured evaluation budget."""


class ConfigError(VerifierError, ValueError):
    """A scenario file or CLI configuration could not be parsed or validated."""

    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        super().__init__(message)
        self.line = line
        self.field = field
