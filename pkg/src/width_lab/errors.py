"""Exception hierarchy for width-lab.

Every library failure is a ``WidthLabError``; the CLI maps the families below to
exit codes (see ``width_lab.cli``).
"""
from __future__ import annotations

from typing import Any


class WidthLabError(Exception):
    """Base class of all library errors."""


class PreconditionViolation(WidthLabError, ValueError):
    pass


class ConfigError(WidthLabError, ValueError):
    pass


# --- arithmetic ---

class DivisionByZero(WidthLabError, ZeroDivisionError):
    pass


class MixedFieldHandles(WidthLabError, TypeError):
    pass


class ZeroRadicand(WidthLabError, ValueError):
    pass


class ZeroPolynomial(WidthLabError, ValueError):
    pass


class NotPrime(WidthLabError, ValueError):
    pass


class DegreeNotDividing(WidthLabError, ValueError):
    pass


class NoRootFound(WidthLabError, RuntimeError):
    """A root that must exist was not found: indicates a bug, not bad input."""


class EmbeddingCheckFailed(WidthLabError, RuntimeError):
    """A computed embedding does not respect addition or multiplication."""


# --- valuations and norms ---

class NonUniqueExtension(WidthLabError):
    """Sampling validation found the norm-based extension is not a valuation."""

    def __init__(self, message: str, *, level: int, witness: dict[str, str] | None = None) -> None:
        super().__init__(message)
        self.level = level
        self.witness = witness or {}


class TolTooTight(WidthLabError):
    pass


class EnclosureInconclusive(WidthLabError):
    pass


# --- matrices and words ---

class LambdaNotUniformizer(WidthLabError, ValueError):
    pass


class NotSL(WidthLabError, ValueError):
    pass


class Singular(WidthLabError, ValueError):
    pass


class DimensionMismatch(WidthLabError, ValueError):
    pass


# --- budgets and caps (CLI exit code 3) ---

class ExhaustionError(WidthLabError):
    """Base for errors raised when a search budget or enumeration cap runs out."""

    def __init__(self, message: str, *, history: list[dict[str, Any]] | None = None) -> None:
        super().__init__(message)
        self.history = history or []


class KMaxExceeded(ExhaustionError):
    pass


class BudgetExhausted(ExhaustionError):
    pass


class CapExceeded(ExhaustionError):
    pass
