"""Exception types raised across the package."""


class CatBellError(Exception):
    """Base class for all package errors."""


class TruncationTooSmall(CatBellError):
    """Fock cutoff captures too little of a state's norm; raise n_max."""


class DegenerateState(CatBellError):
    """A superposition collapsed to (numerically) the zero vector."""


class GridTooSmall(CatBellError):
    """A quadrature grid leaks probability mass through its boundary."""


class ConfigInvalid(CatBellError):
    """A scenario configuration failed validation."""
