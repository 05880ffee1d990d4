"""Exception hierarchy for the toolkit."""

from __future__ import annotations


class ToolkitError(Exception):
    """Base class for all toolkit errors."""


class FieldError(ToolkitError):
    """Unsupported or inconsistent finite-field parameters."""


class ShapeError(ToolkitError):
    """Dimension mismatch between matrices, spaces or maps."""


class BudgetError(ToolkitError):
    """An exhaustive loop would exceed the enumeration budget.

    Raised instead of silently truncating; callers may retry with a larger
    budget.
    """


class VerificationError(ToolkitError):
    """An internal cross-check that must hold by theory failed.

    This signals a bug in the library (or a genuinely false expectation),
    never bad user input.
    """


class DecompositionError(ToolkitError):
    """A map could not be decomposed in the requested form."""
