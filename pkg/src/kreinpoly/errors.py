"""Exception hierarchy shared by every module."""


class KreinError(Exception):
    """Base class for all library errors."""


class PreconditionError(KreinError, ValueError):
    """Request parameters violate a validity condition (e.g. a divergent integral)."""


class PoleError(KreinError, ZeroDivisionError):
    """A Gamma/Pochhammer pole was hit (nonpositive integer argument)."""


class RouteInapplicable(KreinError):
    """The requested evaluation route cannot handle this request.

    This is not a failure of the request itself: another route may apply.
    """


class NotTerminatingError(KreinError, ValueError):
    """A hypergeometric series was requested without a terminating parameter."""


class MixedRadicalError(KreinError, TypeError):
    """Two exact values with different radical parts were added."""


class NotExactError(KreinError):
    """An exact result was demanded but the value involves a transcendental factor."""


class AccuracyError(KreinError):
    """A numerical procedure could not reach its requested accuracy.

    Attributes
    ----------
    best : object
        The best available estimate, usually an ``ApproxValue``.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
