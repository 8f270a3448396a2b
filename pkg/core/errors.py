"""Exception types shared by every package."""


class MultisetError(ValueError):
    """Base class for library errors."""


class DomainError(MultisetError):
    """Invalid parameters, mismatched universes, malformed values."""


class PreconditionError(MultisetError):
    """An operation was called outside its stated preconditions."""


class PostconditionError(MultisetError):
    """A guaranteed result property failed to hold."""


class BudgetExceededError(RuntimeError):
    """An enumeration would exceed its configured budget."""
