import math

import numpy as np
import pytest

from ..exceptions import ShapeError
from ..utils.shape import (
    reconstruct,
    shape_change_average,
    shape_distance,
    shape_of,
    transpose_to_level,
)


def test_shape_of_examples():
    """Forward differences of a value series."""
    np.testing.assert_array_equal(shape_of([10, 5]), [-5])
    np.testing.assert_array_equal(shape_of([3, 3, 3]), [0, 0])
    np.testing.assert_array_equal(shape_of([0, 1, 3, 6]), [1, 2, 3])


def test_shape_of_needs_two_values():
    with pytest.raises(ShapeError, match="fewer than two values"):
        shape_of([1.0])


def test_shape_of_rejects_non_finite():
    with pytest.raises(ShapeError):
        shape_of([1.0, math.nan])


def test_reconstruct_examples():
    np.testing.assert_array_equal(reconstruct(10, [-5]), [10, 5])
    np.testing.assert_array_equal(reconstruct(0, []), [0])
    np.testing.assert_array_equal(reconstruct(1, [1, 1]), [1, 2, 3])


def test_roundtrip_is_exact_on_integer_grids(rng):
    for _ in range(1000):
        series = rng.integers(-10**6, 10**6, size=rng.integers(1, 30)).astype(float)
        if series.size == 1:
            np.testing.assert_array_equal(reconstruct(series[0], []), series)
            continue
        np.testing.assert_array_equal(reconstruct(series[0], shape_of(series)), series)


def test_roundtrip_on_arbitrary_reals(rng):
    for _ in range(200):
        series = rng.normal(0, 100, size=rng.integers(2, 30))
        np.testing.assert_allclose(reconstruct(series[0], shape_of(series)), series, rtol=0, atol=1e-9)


def test_shift_invariance(rng):
    series = rng.integers(-100, 100, size=20).astype(float)
    np.testing.assert_array_equal(shape_of(series + 7.0), shape_of(series))


def test_shape_distance_examples():
    assert shape_distance([1, 2], [1, 2]) == 0.0
    assert shape_distance([1, -2], [-1, 2], sign_aware=True) == 0.0
    assert shape_distance([1, 0], [0, 1]) == pytest.approx(math.sqrt(2))


def test_shape_distance_properties(rng):
    for _ in range(100):
        a, b = rng.normal(size=(2, 5))
        assert shape_distance(a, b) == pytest.approx(shape_distance(b, a))
        assert shape_distance(a, b, sign_aware=True) <= shape_distance(a, b)


def test_shape_distance_length_mismatch():
    with pytest.raises(ShapeError, match="lengths differ"):
        shape_distance([1, 2], [1])


def test_transpose_to_level_examples():
    np.testing.assert_allclose(transpose_to_level([2, 4], 3), [2, 4])
    np.testing.assert_allclose(transpose_to_level([2, 4], 0), [-1, 1])
    np.testing.assert_allclose(transpose_to_level([0, 0], 5), [5, 5])


def test_transpose_keeps_shape(rng):
    for _ in range(1000):
        series = rng.normal(0, 10, size=rng.integers(2, 20))
        target = rng.normal(0, 10)
        moved = transpose_to_level(series, target)
        assert moved.mean() == pytest.approx(target, abs=1e-9)
        np.testing.assert_allclose(shape_of(moved), shape_of(series), rtol=0, atol=1e-12)


def test_shape_change_average_examples():
    assert shape_change_average([1, 0]) == 1.0
    assert shape_change_average([0, 2, 0]) == 2.0
    assert shape_change_average([4, 4, 4]) == 0.0


def test_shape_change_average_scales_with_magnitude(rng):
    series = rng.normal(size=15)
    for alpha in (-3.0, -0.5, 0.0, 2.0):
        assert shape_change_average(alpha * series) == pytest.approx(abs(alpha) * shape_change_average(series))
