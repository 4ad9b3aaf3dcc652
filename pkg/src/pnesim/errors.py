"""Exception types shared across the package."""


class PnesimError(Exception):
    """Base class for all errors raised by pnesim."""


class StateSpecError(PnesimError):
    """A state specification string could not be parsed or validated."""


class TargetRangeError(PnesimError):
    """A matching target is outside the attainable range of the family."""


class CutoffError(PnesimError):
    """The Fock cutoff is too small for the requested computation."""


class ConvergenceError(PnesimError):
    """An iterative solver failed to converge within its iteration cap."""


class MonotonicityError(PnesimError):
    """Negativity decay was found to be non-monotone where monotone decay
    is required (diagnostic; carries the sampled profile)."""

    def __init__(self, message, profile=None):
        super().__init__(message)
        self.profile = profile
