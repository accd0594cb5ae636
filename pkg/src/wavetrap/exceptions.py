"""Exception hierarchy shared by every module."""


class WavetrapError(ValueError):
    """Base class for invalid inputs detected by this package."""


class InvalidParameterError(WavetrapError):
    pass


class DimensionMismatchError(WavetrapError):
    pass


class DegenerateBasisError(WavetrapError):
    pass


class UnequalWavenumberError(WavetrapError):
    pass


class NotSymmetricError(WavetrapError):
    pass


class UnknownClassError(WavetrapError):
    pass


class ConvergenceError(RuntimeError):
    """Raised when an iterative kernel exhausts its iteration budget."""


class DivergenceError(RuntimeError):
    pass
