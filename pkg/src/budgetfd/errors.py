"""Shared exception types."""


class BudgetFDError(Exception):
    """Base class for errors raised by this package."""


class CapExceededError(BudgetFDError):
    """An instance-size cap was exceeded (atom count, edge count, path count)."""
