"""Exception types shared across the toolkit."""


class WulffkitError(Exception):
    """Base class for all toolkit errors."""


class ZeroVector(WulffkitError):
    """A direction argument was the zero vector."""


class InvalidBody(WulffkitError):
    """Body construction data violates strict convexity or positivity."""


class NotOrthogonal(WulffkitError):
    """Tangent-map argument is not orthogonal to the base direction."""


class DegenerateMetric(WulffkitError):
    """First fundamental form is singular at the requested parameter."""


class NotClosed(WulffkitError):
    """Surface expected to be closed has a boundary gap above tolerance."""


class NotOnBoundary(WulffkitError):
    """Requested endpoint does not lie on the domain boundary."""


class ImmersionLost(WulffkitError):
    """A deformed surface stopped being an immersion."""


class ModeUnsupported(WulffkitError):
    """The requested flow mode is not admissible for this operation."""


class NotStationary(WulffkitError):
    """Stationarity residuals exceed the threshold for the index form."""


class ZeroVolumeVelocity(WulffkitError):
    """First variation of volume vanishes; relative profile undefined."""


class EmptyIntersection(WulffkitError):
    """Clipped Wulff boundary is empty for the given cone."""


class InsufficientSamples(WulffkitError):
    """Too few profile samples for the requested report."""


class NoFeasibleCandidate(WulffkitError):
    """No candidate family reaches the requested volume."""


class OptimizerDiverged(WulffkitError):
    """Constrained curve optimizer failed to converge."""


class SchemaError(WulffkitError):
    """Scene JSON does not validate against the strict schema."""


class CheckFailure(WulffkitError):
    """A gated numeric check failed."""
