"""Exception hierarchy shared by all modules."""


class GeodesicsError(Exception):
    """Base class for every error raised by this package."""


class DomainError(GeodesicsError, ValueError):
    """A point lies outside the region where the metric is stationary (beta <= 0)."""


class SingularChartError(GeodesicsError, ValueError):
    """The Riemannian block of the metric is not positive definite."""


class HorizonError(DomainError):
    """Evaluation at a zero of Delta(r)."""


class AxisError(DomainError):
    """Boyer-Lindquist evaluation too close to the symmetry axis."""


class TangencyError(GeodesicsError, ValueError):
    """A vector is not tangent to the level set it was declared tangent to."""


class StepUnderflow(GeodesicsError, RuntimeError):
    """The adaptive step size dropped below the configured minimum."""


class MaxStepsExceeded(GeodesicsError, RuntimeError):
    """The integrator hit its step budget before reaching the end point."""


class DomainExit(GeodesicsError, RuntimeError):
    """A trajectory left the stationary region.

    Carries the last accepted state so callers can see where it happened.
    """

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class NonpositiveQ(GeodesicsError, ValueError):
    """Turning-point constants produced q <= 0."""


class SingularityError(GeodesicsError, ValueError):
    """The radial polynomial vanishes inside an integration span."""


class ConvergenceError(GeodesicsError, RuntimeError):
    """Adaptive quadrature failed to reach its tolerance."""


class NoBracket(GeodesicsError, RuntimeError):
    """No sign change could be bracketed for a root search."""


class ContinuationStall(GeodesicsError, RuntimeError):
    """Marching along the matched-time curve did not reach the target."""


class IntegrationFailure(GeodesicsError, RuntimeError):
    """Re-integration of a candidate connecting geodesic failed."""


class UsageError(GeodesicsError, ValueError):
    """Bad command-line or config input."""
