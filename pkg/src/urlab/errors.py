"""Exception hierarchy shared by every urlab module."""


class UrLabError(Exception):
    """Base class for all errors raised by urlab."""


# hilbert
class NonSquare(UrLabError, ValueError):
    pass


class NotNearlyHermitian(UrLabError, ValueError):
    pass


class NonFiniteEntry(UrLabError, ValueError):
    pass


class IndexOutOfRange(UrLabError, IndexError):
    pass


class DimTooSmall(UrLabError, ValueError):
    pass


class DimMismatch(UrLabError, ValueError):
    pass


class NonHermitianExpectation(UrLabError, ArithmeticError):
    pass


class NotNormalized(UrLabError, ValueError):
    pass


class NoConvergence(UrLabError, ArithmeticError):
    """Iterative routine hit its iteration cap; ``residual`` holds the last error."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


# mt
class DirectionIsEigenvector(UrLabError, ValueError):
    pass


class EmptyGrid(UrLabError, ValueError):
    pass


class InvalidGrid(UrLabError, ValueError):
    pass


class TooFewDefinedSamples(UrLabError, ValueError):
    pass


# zeno
class InvalidSchedule(UrLabError, ValueError):
    pass


class InvalidParam(UrLabError, ValueError):
    pass


# bw
class InvalidParams(UrLabError, ValueError):
    pass


class QuadratureNoConvergence(UrLabError, ArithmeticError):
    pass


class ScheduleTooShort(UrLabError, ValueError):
    pass


# cli
class ConfigParse(UrLabError):
    exit_code = 2


class ConfigValidate(UrLabError):
    exit_code = 3


class InvariantViolation(UrLabError, AssertionError):
    """A post-condition that must hold in exact arithmetic failed beyond its slack."""
