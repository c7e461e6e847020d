"""Enumeration budget.

Every exhaustive search in the package charges one unit per candidate
extension it tries.  Exceeding the budget aborts with
:class:`~cohesio.errors.BudgetExceeded` instead of hanging.
"""

from __future__ import annotations

import os

from .errors import BudgetExceeded

DEFAULT_BUDGET = 10**7
ENV_VAR = "COHESIO_BUDGET"


def default_budget() -> int:
    raw = os.environ.get(ENV_VAR)
    if raw is None or raw == "":
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise BudgetExceeded(f"{ENV_VAR} must be an integer, got {raw!r}") from None
    if value <= 0:
        raise BudgetExceeded(f"{ENV_VAR} must be positive, got {value}")
    return value


class Budget:
    """A countdown shared by nested enumerations."""

    __slots__ = ("limit", "used", "label")

    def __init__(self, limit: int | None = None, label: str = "enumeration"):
        self.limit = default_budget() if limit is None else int(limit)
        self.used = 0
        self.label = label

    def charge(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.limit:
            raise BudgetExceeded(
                f"{self.label} exceeded the enumeration budget of {self.limit} candidates"
            )

    def require(self, size: int, what: str) -> None:
        """Fail fast when a table of ``size`` entries would not fit the budget."""
        if size > self.limit:
            raise BudgetExceeded(
                f"{what} needs {size} entries, more than the budget of {self.limit}"
            )


def as_budget(budget: Budget | int | None, label: str = "enumeration") -> Budget:
    if isinstance(budget, Budget):
        return budget
    return Budget(budget, label)
