"""Exception types shared across the toolkit."""


class CubliError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(CubliError, ValueError):
    """A parameter, configuration value, or matrix shape is invalid."""


class DegenerateInputError(CubliError, ValueError):
    """An input is too close to a degenerate case to be usable."""


class SingularityError(CubliError):
    """The orientation error is inside the guard band around a 90 degree rotation."""


class DivergenceError(CubliError):
    """A numerical trajectory produced non-finite values."""


class IdentificationError(CubliError):
    """A friction identification experiment cannot produce a usable estimate."""
