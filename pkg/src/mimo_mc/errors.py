"""Exception types raised across the package."""


class InvalidParameterError(ValueError):
    """A numeric argument or configuration value is out of its allowed range."""


class InvalidSceneError(InvalidParameterError):
    """A target scene violates its invariants (e.g. a zero reflection coefficient)."""


class DegenerateInputError(ValueError):
    """Input carries no usable information, e.g. an all-zero matrix."""


class UnboundedSupremumError(ValueError):
    """A kernel supremum was requested over a set touching the kernel singularity."""
