"""Exception hierarchy for the hahnfield package.

Every concrete error also derives from the builtin it refines, so callers can
catch ``ValueError`` or ``ArithmeticError`` without importing this module.
"""

from typing import Any, Dict, Optional


class HahnFieldError(Exception):
    """Base class for all errors raised by hahnfield."""


class ChainMembershipError(HahnFieldError, ValueError):
    """A point does not belong to the chain it is used with."""


class ChainMismatchError(HahnFieldError, ValueError):
    """Operands live over different chains."""


class SegmentError(HahnFieldError, ValueError):
    """A final segment is malformed, not upward closed, or empty where it must not be."""


class WindowError(HahnFieldError, ValueError):
    """A Z-window is empty, or too small to certify a result."""


class PsiDomainError(HahnFieldError, ValueError):
    """An operator was applied outside its domain (for instance psi at 0)."""


class NotIntegrableError(HahnFieldError, ArithmeticError):
    """D_G(g) = target has no solution."""

    def __init__(self, target: Any, message: Optional[str] = None):
        self.target = target
        super().__init__(message or f"{target} is not in the image of D_G")


class TruncationUnreachableError(HahnFieldError, ArithmeticError):
    """Powers of the small part of a series never pass the requested bound."""


class RankCertificationError(HahnFieldError):
    """The closed-form compatibility test and the brute-force oracle disagree."""


class ParseError(HahnFieldError, ValueError):
    """Text did not match a grammar. ``position`` is a 0-based offset into ``text``."""

    def __init__(self, message: str, text: str, position: int):
        self.reason = message
        self.text = text
        self.position = position
        super().__init__(self._render())

    def _render(self) -> str:
        pointer = " " * self.position + "^"
        return f"{self.reason} at position {self.position}\n  {self.text}\n  {pointer}"


class CheckFailure(HahnFieldError):
    """A verification step failed. ``report`` holds the JSON-ready failing report."""

    def __init__(self, message: str, report: Optional[Dict[str, Any]] = None):
        self.report = report or {}
        super().__init__(message)


class RealizationError(CheckFailure):
    """A sub-check of the realization pipeline failed."""
