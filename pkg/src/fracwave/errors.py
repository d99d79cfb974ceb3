"""Exception types raised across the package."""


class FracWaveError(Exception):
    """Base class for all package errors."""


class NoIntegerBalance(FracWaveError, ValueError):
    """The degree balance has no positive integer solution."""


class UnsupportedForm(FracWaveError, ValueError):
    """An algebraic system falls outside the structured solver's reach."""


class SingularPoint(FracWaveError, ArithmeticError):
    """The closed form of phi has a vanishing denominator at the query point."""


class PoleOfInverse(FracWaveError, ArithmeticError):
    """phi vanishes at a point where negative powers of phi are required."""


class CaseMismatch(FracWaveError, ValueError):
    """Parameters are inconsistent with the requested phi case."""


class ComplexWaveSpeed(FracWaveError, ValueError):
    """kappa^2 is negative at the given parameters."""


class DegenerateGrid(FracWaveError, ValueError):
    """A grid is too small (or fully masked) to evaluate residuals on."""
