"""Exception types shared across the package."""


class ChargeNegError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(ChargeNegError, ValueError):
    """A precondition on an argument was violated."""


class NumericalFailureError(ChargeNegError, ArithmeticError):
    """A numerical routine did not meet its accuracy contract."""


class ResourceLimitError(ChargeNegError, MemoryError):
    """The requested computation exceeds a fixed resource cap."""
