"""Enumeration budgets: loud failure instead of silent truncation."""

from __future__ import annotations

DEFAULT_BUDGET_CELLS = 20_000_000


class BudgetExceededError(RuntimeError):
    """An enumeration would exceed the configured cell budget."""

    def __init__(self, what: str, needed: int, budget: int):
        super().__init__(f"{what} needs {needed} cells, budget is {budget}")
        self.what = what
        self.needed = needed
        self.budget = budget


def check_budget(what: str, needed: int, budget: int = DEFAULT_BUDGET_CELLS) -> None:
    if needed > budget:
        raise BudgetExceededError(what, needed, budget)
