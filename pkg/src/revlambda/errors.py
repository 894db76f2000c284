"""Exception hierarchy shared by all revlambda modules."""


class RevLambdaError(Exception):
    """Base class for every runtime error raised by the library."""


class DomainError(RevLambdaError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class CurveError(RevLambdaError, ValueError):
    """A profile curve is degenerate or violates an operation precondition."""


class GuardError(RevLambdaError):
    """An a priori bound on a critical trajectory was violated during integration."""


class LeftHalfPlaneError(GuardError):
    pass


class DegeneratePhaseError(GuardError):
    pass


class NoZeroBeforeBoundError(GuardError):
    pass


class BracketError(RevLambdaError):
    """A root could not be bracketed in the scanned range."""


class InversionFailed(RevLambdaError):
    """Newton inversion of the endpoint map did not converge.

    ``history`` holds one ``(x, y, residual_norm)`` tuple per iterate.
    """

    def __init__(self, message, history=()):
        super().__init__(message)
        self.history = list(history)
