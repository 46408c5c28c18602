"""Exception types shared across the package."""


class EntspanError(Exception):
    """Base class for all package errors."""


class DimensionError(EntspanError, ValueError):
    """Shapes, index ranges or entry counts do not match."""


class DomainError(EntspanError, ValueError):
    """A parameter lies outside the mathematical domain of the operation."""


class NumericError(EntspanError, ValueError):
    """Non-finite values or other floating-point trouble in numeric input."""


class FieldMismatchError(EntspanError, TypeError):
    """Operands live over different scalar fields."""


class CertificateError(EntspanError, RuntimeError):
    """Internal consistency failure while building a rank certificate.

    Raised when a basis that promises a structural rank guarantee fails to
    deliver it; this indicates a construction bug, never expected in use.
    """
