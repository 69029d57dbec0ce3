"""Exception hierarchy shared by all modules."""


class BOError(Exception):
    """Base class for every error raised by the package."""


class InvalidTruncationError(BOError, ValueError):
    pass


class AliasingError(BOError, ValueError):
    pass


class InvalidGridError(BOError, ValueError):
    pass


class ConvergenceError(BOError, RuntimeError):
    """Eigenvalues did not settle under repeated doubling of the truncation.

    ``previous`` and ``last`` hold the two final iterates of the watched
    eigenvalues so callers can judge how far off they were.
    """

    def __init__(self, message, previous=None, last=None):
        super().__init__(message)
        self.previous = previous
        self.last = last


class PhaseDegeneracyError(BOError, RuntimeError):
    pass


class InvalidSpectrumError(BOError, ValueError):
    pass


class PoleProximityError(BOError, ValueError):
    pass


class InconsistentCoordinatesError(BOError, ValueError):
    pass


class ConditioningError(BOError, ValueError):
    pass


class InvalidPoleError(BOError, ValueError):
    pass


class InvalidParameterError(BOError, ValueError):
    pass


class UndefinedAngleError(BOError, ValueError):
    pass


class InvalidStepError(BOError, ValueError):
    pass


class AccuracyGuardError(BOError, RuntimeError):
    pass
