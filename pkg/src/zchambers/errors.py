"""Exception hierarchy shared by every module of the package."""


class ZChambersError(Exception):
    """Base class for all errors raised by zchambers."""


class ArithmeticOverflow(ZChambersError, OverflowError):
    """A checked fixed-width integer operation left the representable range.

    ``operation`` names the computation that failed so callers (the CLI in
    particular) can report it.
    """

    def __init__(self, operation: str, value: int | None = None, width: int = 64):
        self.operation = operation
        self.value = value
        self.width = width
        msg = f"{width}-bit overflow in {operation}"
        if value is not None:
            msg += f" (value needs {abs(value).bit_length() + 1} bits)"
        super().__init__(msg)


class InternalConsistencyError(ZChambersError, RuntimeError):
    """An invariant that must hold by construction was violated.

    Raised for inexact Bareiss divisions or zero pivots on the incremental
    path; either one means a bug or a violated precondition.
    """


class PreconditionError(ZChambersError, ValueError):
    """An operation was called outside its documented domain."""


class MatrixFormatError(ZChambersError, ValueError):
    """Malformed or asymmetric matrix input."""


class CheckpointError(ZChambersError, ValueError):
    """A checkpoint could not be used (corrupt, wrong version, wrong matrix)."""


class GuardExceeded(ZChambersError, ValueError):
    """A size guard refused an input that would blow up exponentially."""
