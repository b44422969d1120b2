"""Exceptions raised by the waveshape package."""


class WaveShapeError(Exception):
    """Base class for all package errors."""


class ShapeError(WaveShapeError, ValueError):
    """A shape could not be formed or compared."""


class DataError(WaveShapeError, ValueError):
    """A dataset is malformed or unusable."""


class InsufficientPatternsError(DataError):
    """Training needs more patterns than the dataset has."""


class ArityError(WaveShapeError, ValueError):
    """Input arity does not match the model or dataset."""


class GroupingError(WaveShapeError, ValueError):
    """A partition is invalid or the requested search cannot run."""


class DivergenceError(WaveShapeError, ArithmeticError):
    """Iterative training produced non-finite weights."""

    def __init__(self, message: str = "diverged; reduce learning rate"):
        super().__init__(message)
