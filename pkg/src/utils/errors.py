# src/utils/errors.py


class CoarseKitError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(CoarseKitError):
    """Rejected input: broken metric axioms, non-total maps, mismatched spaces."""


class CapExceededError(CoarseKitError):
    """A ball or closure enumeration ran past its size cap.

    Attributes:
        count (int): Number of elements enumerated before stopping.
        cap (int): The cap that was hit.
    """

    def __init__(self, message, count, cap):
        super().__init__(message)
        self.count = count
        self.cap = cap


class UnknownNameError(CoarseKitError, KeyError):
    """Lookup of a corpus entry, builtin map or builtin group that does not exist."""

    def __str__(self):
        return str(self.args[0]) if self.args else ''
