"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested quantity."""


class BudgetExceededError(RuntimeError):
    """Exact enumeration would exceed the configured operation budget."""


class PrecisionError(ArithmeticError):
    """A series could not be truncated within the requested tolerance."""
