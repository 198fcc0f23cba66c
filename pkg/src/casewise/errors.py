"""Exception hierarchy shared across the engine.

Validation problems are split in two: :class:`ModelValidationError` signals a
broken similarity model (typically a corrupted or hand-edited model file),
while :class:`SchemaViolationError` signals data that does not fit an
otherwise valid schema (unknown attribute, symbol outside the allowed set,
wrong value type). Both carry an optional list of structured violations so
callers (CLI, HTTP service) can render them without parsing messages.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Violation:
    """One broken invariant, named by attribute and rule."""

    rule: str
    attribute: str | None
    message: str

    def to_doc(self) -> dict:
        return {"rule": self.rule, "attribute": self.attribute, "message": self.message}


class EngineError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(EngineError):
    """Invalid input; carries structured violations when available."""

    def __init__(self, message: str, violations: list[Violation] | None = None):
        super().__init__(message)
        self.violations = violations or []


class ModelValidationError(ValidationError):
    """The similarity model itself breaks an invariant."""


class SchemaViolationError(ValidationError):
    """A value or reference does not conform to the schema."""


class IngestionError(EngineError):
    """A dataset could not be loaded; names the offending row/column."""

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        super().__init__(message)
        self.row = row
        self.column = column


class DocumentError(EngineError):
    """A serialized document is structurally malformed."""


class NoPredictionError(EngineError):
    """Classification was asked for but no case base entry can vote."""
