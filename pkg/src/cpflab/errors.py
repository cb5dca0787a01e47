"""Exception types shared across the package."""


class CpfLabError(Exception):
    """Base class for all errors raised by cpflab."""


class ValidationError(CpfLabError, ValueError):
    """Invalid parameter or inconsistent input."""


class DomainError(CpfLabError, ValueError):
    """Evaluation requested outside a declared window."""


class TruncationError(CpfLabError, IndexError):
    """Raising operator pushed a state past the Fock truncation."""
