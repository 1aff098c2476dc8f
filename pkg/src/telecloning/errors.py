"""Exception hierarchy."""


class TeleclonError(Exception):
    """Base class for all package errors."""


class DomainError(TeleclonError, ValueError):
    """A parameter lies outside its physical or mathematical domain."""


class ValidationError(TeleclonError, ValueError):
    """An object violates a structural invariant (Hermiticity, trace, ...)."""


class ShapeError(ValidationError):
    """Matrix dimensions are incompatible with the requested operation."""


class NotPSDError(ValidationError):
    """Matrix has an eigenvalue below the clamp threshold."""


class SlotNameError(TeleclonError, KeyError):
    """A subsystem name is not part of the layout."""

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown slot"


class ProtocolExhaustedError(TeleclonError, RuntimeError):
    """No receivers remain in the channel."""
