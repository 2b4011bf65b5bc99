"""Exception types raised by the library."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class ShapeError(ValueError):
    """Paired inputs have incompatible lengths."""


class UnsupportedModeError(ValueError):
    """A critical-value mode was requested for a configuration it does not cover."""


class PreconditionError(ValueError):
    """Inputs violate a precondition of a bound or check."""
