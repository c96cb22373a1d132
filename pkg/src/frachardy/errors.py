"""Exception types shared across the library."""


class FracHardyError(Exception):
    """Base class for all library errors."""


class DomainValidationError(FracHardyError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class NearDegenerate(FracHardyError):
    """Hypergeometric linear transformation is numerically degenerate.

    Raised when c - a - b is within guard distance of an integer and the
    caller did not request the direct-integral fallback.
    """


class Nonconvergent(FracHardyError):
    """Quadrature failed to meet tolerance within the subdivision budget.

    The best available estimate is attached so callers can decide whether
    to accept it anyway.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class VarianceBlowup(FracHardyError):
    """Monte Carlo running variance exceeded its cap.

    Usually signals an unresolved singularity in the integrand or trial
    metadata inconsistent with the observed increments.
    """


class CriticalExponent(DomainValidationError):
    """The regime s*p = N (or s*p <= N where supercriticality is needed)."""


class BetaOutOfRange(DomainValidationError):
    """Supersolution exponent outside the open admissible interval."""


class DimensionUnsupported(DomainValidationError):
    """Operation is undefined in the requested dimension."""


class UnsupportedDomain(DomainValidationError):
    """Domain model not supported by the requested operation."""


class UnboundedInradius(DomainValidationError):
    """Bound requires a finite inradius."""


class SupportViolation(DomainValidationError):
    """Trial/test function support touches the boundary or a puncture."""


class InsufficientSamples(DomainValidationError):
    """Not enough samples for extrapolation."""


class TailDominates(FracHardyError):
    """Truncation tail bound exceeds the acceptable fraction of the result."""
