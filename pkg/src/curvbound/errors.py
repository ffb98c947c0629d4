"""Exception types shared across the toolkit."""


class GeometryError(Exception):
    """Base class for all toolkit errors."""


class DomainError(GeometryError):
    """A point or parameter lies outside the valid domain of an operation.

    Raised for antipodal-or-beyond points on the sphere, points outside the
    chronological future of the reference point in Lorentzian models, and
    comparison-function arguments past their positivity range.
    """


class UndefinedGradientError(DomainError):
    """Distance gradient requested at (or too close to) the reference point."""


class ImmersionDegeneracyError(GeometryError):
    """The chart fails to be an immersion at the requested parameter."""


class SignatureError(GeometryError):
    """The tangent plane has the wrong causal character (not spacelike)."""


class HypothesisViolationError(GeometryError):
    """A standing hypothesis of an estimate fails at the evaluation point."""


class ConsistencyError(GeometryError):
    """Two independent evaluation routes disagree beyond tolerance."""


class NumericalError(GeometryError):
    """A numerical subroutine (eigensolver, ODE solver, quadrature) failed."""


class EmptySampleError(GeometryError):
    """Every grid point of a sampling pass was rejected."""


class ConfigError(GeometryError):
    """Malformed scenario configuration or CLI usage."""
