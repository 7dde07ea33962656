"""Exception types shared across the library."""


class LgsysError(Exception):
    """Base class for library errors."""


class HorizonExceeded(LgsysError):
    """A query needs words longer than the oracle's certified horizon."""


class InvalidPresentation(LgsysError):
    """A presentation violates its structural invariants."""


class InvalidExpansion(InvalidPresentation):
    """A digit expansion fails the lexicographic self-admissibility test."""


class NotPrimitive(InvalidPresentation):
    """A substitution has no positive incidence-matrix power within the bound."""


class NotIrreducible(LgsysError):
    """An operation requires an irreducible (strongly connected) presentation."""


class EmptySyncLevel(LgsysError):
    """No synchronizing words were found at a level within the given bounds."""

    def __init__(self, level, message=None):
        self.level = level
        super().__init__(message or f"no synchronizing words found at level {level}")


class CommutationFailure(LgsysError):
    """The extracted matrix system violates the commutation relation."""

    def __init__(self, level, row, col, message=None):
        self.level = level
        self.row = row
        self.col = col
        super().__init__(
            message
            or f"commutation fails at level {level}, entry ({row}, {col})"
        )


class InsufficientLevels(LgsysError):
    """A matrix-system computation needs more levels than were built."""
