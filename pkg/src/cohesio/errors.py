"""Exception hierarchy shared by every module.

Each exception carries a short machine-readable ``code`` that the CLI
reports alongside the message.
"""

from __future__ import annotations


class CohesioError(Exception):
    code = "error"


class CategoryError(CohesioError):
    """A category table violates a law; ``ids`` names the offending morphisms."""

    code = "invalid_category"

    def __init__(self, message: str, ids: tuple[str, ...] = ()):
        super().__init__(message)
        self.ids = ids


class PresheafError(CohesioError):
    code = "invalid_presheaf"


class NaturalityError(CohesioError):
    code = "not_natural"


class BudgetExceeded(CohesioError):
    code = "budget_exceeded"


class SchemaError(CohesioError):
    """A JSON document does not match its schema; ``pointer`` locates the fault."""

    code = "schema_error"

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer or "/"
