"""Exception types shared across the package."""


class SpecgapError(Exception):
    """Base class."""


class DomainError(SpecgapError, ValueError):
    """An argument lies outside the domain of the operation."""


class PreconditionError(SpecgapError, ValueError):
    """Inputs violate a documented precondition (e.g. a certified bound)."""


class SizeError(SpecgapError, ValueError):
    """Problem size exceeds the guard of an exhaustive routine."""
