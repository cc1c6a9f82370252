"""Exception types shared across the package."""


class StaliftError(Exception):
    """Base class for all package-specific errors."""


class FieldMismatch(StaliftError):
    pass


class DimensionMismatch(StaliftError):
    pass


class NonAdmissible(StaliftError):
    """Path basis failed to stabilize below the length cap."""


class NotIdempotent(StaliftError):
    pass


class ZeroModule(StaliftError):
    pass


class AlgebraMismatch(StaliftError):
    pass


class UnsupportedCharP(StaliftError):
    """No structural route to the radical over a prime field."""


class NotProjective(StaliftError):
    pass


class NotInjective(StaliftError):
    pass


class NotAdmissibleSubset(StaliftError):
    """Degree subset fails the exchange condition or misses 0."""


class SelfInjectivityCheckFailed(StaliftError):
    """Internal-consistency failure: a Frobenius part was not self-injective."""


class CapExceeded(StaliftError):
    def __init__(self, cap, message=None):
        self.cap = cap
        super().__init__(message or f"cap exceeded: {cap}")


class NotSelfInjective(StaliftError):
    pass


class ActionMismatch(StaliftError):
    pass


class NotNuStable(StaliftError):
    pass


class CornerNotTilting(StaliftError):
    pass


class HypothesisFailed(StaliftError):
    """A restriction hypothesis failed; the message names the violated inclusion."""


class SemisimpleSummand(StaliftError):
    pass


class NotCommuting(StaliftError):
    pass


class NotFound(StaliftError):
    pass


class Stuck(StaliftError):
    """The lifting machinery could not certify a step; never a silent claim."""

    def __init__(self, reason):
        self.reason = reason
        super().__init__(reason)


class InternalCheckError(StaliftError):
    """Two independent computations of the same quantity disagreed."""
