# waveshape/utils/shape.py
"""
Difference shapes of value series.

A value series is a 1-D float array. Its shape is the vector of forward first
differences, so a series of n values has a shape of n - 1 deltas. Everything
here is a pure function over numpy arrays.
"""

from typing import Sequence, Union

import numpy as np

from ..exceptions import ShapeError

ArrayLike = Union[Sequence[float], np.ndarray]


def as_series(values: ArrayLike, name: str = "series") -> np.ndarray:
    """
    Convert values to a finite 1-D float64 array.

    Args:
        values: Sequence of reals
        name: Label used in error messages

    Returns:
        A new float64 array
    """
    series = np.array(values, dtype=np.float64)
    if series.ndim != 1:
        raise ShapeError(f"{name} must be one-dimensional, got shape {series.shape}")
    if series.size == 0:
        raise ShapeError(f"{name} must contain at least one value")
    if not np.all(np.isfinite(series)):
        raise ShapeError(f"{name} contains non-finite values")
    return series


def shape_of(series: ArrayLike) -> np.ndarray:
    """Forward first differences: deltas[i] = values[i+1] - values[i]."""
    values = as_series(series)
    if values.size < 2:
        raise ShapeError("shape undefined for fewer than two values")
    return np.diff(values)


def reconstruct(first: float, shape: ArrayLike) -> np.ndarray:
    """
    Rebuild a series from its first value and its shape.

    Args:
        first: Value of the first element
        shape: Delta vector, possibly empty

    Returns:
        Series of length len(shape) + 1
    """
    if not np.isfinite(first):
        raise ShapeError("first value must be finite")
    deltas = np.array(shape, dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(deltas)):
        raise ShapeError("shape contains non-finite values")
    # cumsum accumulates left to right: values[i+1] = values[i] + deltas[i]
    return np.cumsum(np.concatenate(([float(first)], deltas)))


def shape_distance(a: ArrayLike, b: ArrayLike, sign_aware: bool = False) -> float:
    """
    Euclidean distance between two delta vectors.

    With sign_aware, a mirrored match counts as well: the result is the
    smaller of |a - b| and |a + b|.
    """
    left = np.asarray(a, dtype=np.float64).reshape(-1)
    right = np.asarray(b, dtype=np.float64).reshape(-1)
    if left.size != right.size:
        raise ShapeError(f"shape lengths differ: {left.size} != {right.size}")
    distance = float(np.linalg.norm(left - right))
    if sign_aware:
        distance = min(distance, float(np.linalg.norm(left + right)))
    return distance


def transpose_to_level(series: ArrayLike, target_mean: float) -> np.ndarray:
    """Shift a series vertically so its mean equals target_mean."""
    values = as_series(series)
    return values + (target_mean - values.mean())


def shape_change_average(series: ArrayLike) -> float:
    """Mean absolute delta of the series; 0 for a constant series."""
    return float(np.mean(np.abs(shape_of(series))))
