"""Exception types shared across the library."""


class InputError(ValueError):
    """Malformed arguments: unknown points, mismatched spaces, out-of-range sizes."""


class PreconditionError(ValueError):
    """A checked precondition failed.  Carries the offending witness when one exists."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ConstructionError(RuntimeError):
    """A postcondition the construction is supposed to guarantee failed on this instance."""
