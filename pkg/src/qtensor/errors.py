"""Exception types shared across the package."""


class QTensorError(Exception):
    """Base class for all package errors."""


class InvalidCayleyTable(QTensorError, ValueError):
    """A multiplication table violates a group axiom.

    Carries the name of the failing axiom and a witness tuple so the
    offending entries can be inspected directly.
    """

    def __init__(self, axiom, witness, message=None):
        self.axiom = axiom
        self.witness = witness
        super().__init__(message or f"{axiom} fails at {witness}")


class OversizeError(QTensorError, ValueError):
    """Requested object exceeds the configured size limits."""


class EnumerationLimitError(QTensorError, RuntimeError):
    """Coset enumeration exceeded max_cosets; the instance is too large.

    This is a resource signal, never a wrong answer.
    """

    def __init__(self, max_cosets, message=None):
        self.max_cosets = max_cosets
        super().__init__(message or f"enumeration exceeded {max_cosets} cosets")


class VerificationError(QTensorError, RuntimeError):
    """A completed coset table failed the relator verification sweep."""
