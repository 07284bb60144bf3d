"""Exception hierarchy shared by every module."""


class ConflictNetError(Exception):
    """Base class for all package errors."""


class NonFiniteError(ConflictNetError, ValueError):
    pass


class DimensionError(ConflictNetError, ValueError):
    pass


class StepTooLargeError(ConflictNetError, RuntimeError):
    pass


class NotConvergedError(ConflictNetError, RuntimeError):
    """Raised when integration reaches ``t_end`` without settling.

    The partially integrated report is attached as ``report`` so sweeps can
    keep going from the last state.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class DegenerateLeadingEigenvalueError(ConflictNetError, ValueError):
    pass


class AllZeroNetworkError(ConflictNetError, ValueError):
    pass


class DegenerateNullError(ConflictNetError, ValueError):
    pass


class NonPositiveLeadingEigenvalueError(ConflictNetError, ValueError):
    pass


class BeyondBifurcationError(ConflictNetError, ValueError):
    pass


class AlreadyUnstableError(ConflictNetError, ValueError):
    pass


class NotDestabilizingError(ConflictNetError, ValueError):
    pass


class DidNotRecoverError(ConflictNetError, RuntimeError):
    pass


class InsufficientPointsError(ConflictNetError, ValueError):
    pass


class ParseError(ConflictNetError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DuplicateEdgeError(ConflictNetError, ValueError):
    pass


class EmptyInputError(ConflictNetError, ValueError):
    pass
