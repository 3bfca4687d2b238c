"""Exception types shared across the package."""


class NaqaeError(Exception):
    """Base class for naqae-specific failures."""


class InternalConsistencyError(NaqaeError):
    """A probability formula produced a value outside [0, 1] by more than round-off.

    Raised instead of silently clamping, since a large violation indicates a
    bug in the formula or its inputs rather than floating-point noise.
    """


class QuadratureError(NaqaeError):
    """Numerical integration did not converge within the node budget."""


class DegenerateDataError(NaqaeError, ValueError):
    """The data carries no usable variation (e.g. constant observations)."""
