"""Exception types shared across the package."""


class GeodesicCountError(Exception):
    """Base class for all package errors."""


class DeterminantError(GeodesicCountError, ValueError):
    pass


class HeightTooSmall(GeodesicCountError):
    pass


class ConvergenceError(GeodesicCountError, ArithmeticError):
    pass


class PoleError(GeodesicCountError, ArithmeticError):
    pass


class ParameterError(GeodesicCountError, ValueError):
    pass


class DivergenceError(GeodesicCountError, ArithmeticError):
    pass


class QuadratureError(GeodesicCountError, ArithmeticError):
    pass


class TruncationError(GeodesicCountError, ArithmeticError):
    pass


class SieveRangeError(GeodesicCountError, IndexError):
    pass


class CacheFormatError(GeodesicCountError, ValueError):
    pass


class ResourceError(GeodesicCountError, MemoryError):
    pass


class CrossCheckError(GeodesicCountError, AssertionError):
    pass


class DegenerateFitError(GeodesicCountError, ValueError):
    pass
