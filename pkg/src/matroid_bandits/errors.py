"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the operation's domain (bad id, bad range)."""


class PreconditionError(ValueError):
    """A documented precondition was violated by the caller."""


class CapacityError(ValueError):
    """A brute-force enumeration guard was exceeded."""


class BudgetError(RuntimeError):
    """A sampling/recursion/round budget was exhausted."""


class ValidationError(ValueError):
    """An instance description failed validation."""


class ConfigError(ValueError):
    """A CLI or run configuration is invalid."""


class InvariantError(AssertionError):
    """An internal invariant that should never fail did fail."""
