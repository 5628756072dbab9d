"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input violates a documented precondition or invariant."""


class InsufficientNeighborhoodError(ValidationError):
    """A privacy guarantee was requested outside the neighborhood it covers."""


class UnsupportedDimensionError(ValueError):
    """The operation is only implemented for small dimensions."""


class ResourceLimitError(RuntimeError):
    """An exact enumeration would exceed the configured budget."""
