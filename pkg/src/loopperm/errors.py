"""Exception types shared across the package."""


class LoopPermError(Exception):
    """Base class for all errors raised by this package."""


class SizeCapError(LoopPermError):
    """An enumeration-based routine was asked to exceed its size cap."""


class StructureError(LoopPermError):
    """The matrix or graph lacks the structure an operation requires."""


class DomainError(LoopPermError):
    """A parameter or input is outside the operation's domain."""


class ConsistencyError(LoopPermError):
    """An identity that must hold internally failed; the input is inconsistent."""
