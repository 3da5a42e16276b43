"""Exception types raised across the package."""


class ChowBetaError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(ChowBetaError, ValueError):
    pass


class InvalidInput(ChowBetaError, ValueError):
    pass


class InvalidWeightVector(ChowBetaError, ValueError):
    pass


class UnstableRange(ChowBetaError):
    """Sampled values are not yet polynomial in m; retry with a larger m range."""


class UnsupportedFixture(ChowBetaError):
    pass


class InvalidFixture(ChowBetaError, ValueError):
    pass


class GeometryError(ChowBetaError):
    pass


class InfiniteValuation(ChowBetaError, ArithmeticError):
    """Raised when a valuation is requested for the zero section."""
