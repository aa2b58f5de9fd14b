"""Exception types shared across the package."""


class LipwalkError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(LipwalkError, ValueError):
    """An argument violates a precondition (wrong sign, NaN, bad range...)."""


class DegeneratePeriodError(LipwalkError):
    """Step period is zero, so step-to-step quantities are undefined (sinh(T/T_c) = 0)."""


class NoIsolatedFixedPointError(LipwalkError):
    """The requested periodic gait has no isolated fixed point (degenerate denominator)."""
