"""Exception types shared across the package."""


class OscillentError(Exception):
    """Base class for all package errors."""


class DomainError(OscillentError, ValueError):
    """An input lies outside the operation's mathematical domain."""


class UnsupportedStateError(DomainError):
    """The requested operation does not apply to this kind of state."""


class ResourceCapError(OscillentError):
    """A configurable cost cap (quantum-number order, term count) was exceeded."""


class NumericalConsistencyError(OscillentError):
    """An internal cross-check failed (imaginary residue, determinant identity,
    singular linear system)."""
