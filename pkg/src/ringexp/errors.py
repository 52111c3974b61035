"""Exception types shared across the package."""


class RingExpError(Exception):
    """Base class for all package errors."""


class ValidationError(RingExpError, ValueError):
    """An input failed a structural law (bad table, non-homomorphism, ...)."""


class DomainError(RingExpError, ValueError):
    """An operation was called outside its mathematical domain."""


class CapacityError(RingExpError, RuntimeError):
    """A configured size bound was exceeded."""


class InvariantViolation(RingExpError, AssertionError):
    """A property the implementation guarantees failed; indicates a bug."""
