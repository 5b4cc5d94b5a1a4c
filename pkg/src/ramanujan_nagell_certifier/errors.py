"""Exceptions raised by Ramanujan-Nagell Certifier."""


class InapplicableCriterionError(ValueError):
    """A criterion was asked to decide an input outside its hypothesis."""


class BudgetExceededError(RuntimeError):
    """A configured work budget ran out before the computation finished."""

    def __init__(self, budget: str, limit: int, detail: str = "") -> None:
        """Initialize BudgetExceededError.

        Args:
            budget: Name of the ``Limits`` field that was exhausted.
            limit: The configured value of that field.
            detail: Extra context for the diagnostic.
        """
        self.budget = budget
        self.limit = limit
        msg = f"Budget {budget}={limit} exceeded"
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)


class FactoringBudgetError(BudgetExceededError):
    """A composite survived trial division and every Pollard rho attempt."""
