import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.spatial import cKDTree

from tdsampling.errors import GeometryError
from tdsampling.geometry import (
    make_circle_array,
    make_direction_grid,
    make_gauss_sphere_array,
    make_image_grid,
    make_sphere_array,
)


def check_array(arr, total):
    assert np.allclose(np.linalg.norm(arr.points, axis=1), arr.radius, atol=1e-12)
    assert np.allclose(np.linalg.norm(arr.normals, axis=1), 1.0, atol=1e-12)
    assert np.allclose(arr.normals * arr.radius, arr.points, atol=1e-12)
    assert abs(arr.weights.sum() - total) < 1e-9


def test_circle_four():
    arr = make_circle_array(4, 1.0)
    assert np.allclose(np.arctan2(arr.points[:, 1], arr.points[:, 0]) % (2 * math.pi), [0, math.pi / 2, math.pi, 3 * math.pi / 2])
    assert arr.weight == pytest.approx(math.pi / 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 500), st.floats(0.1, 10.0))
def test_circle_invariants(n, radius):
    arr = make_circle_array(n, radius)
    assert arr.count == n
    check_array(arr, 2 * math.pi * radius)


def test_circle_near2d_layout():
    arr = make_circle_array(80, 1.0)
    assert arr.count == 80 and arr.radius == 1.0
    assert arr.weight == pytest.approx(2 * math.pi / 80)


@settings(max_examples=20, deadline=None)
@given(st.integers(4, 400), st.floats(0.1, 10.0))
def test_sphere_invariants(n, radius):
    check_array(make_sphere_array(n, radius), 4 * math.pi * radius**2)


def test_sphere_near3d_layout():
    arr = make_sphere_array(200, 3.0)
    check_array(arr, 4 * math.pi * 9)
    nn = cKDTree(arr.points).query(arr.points, k=2)[0][:, 1]
    assert nn.std() / nn.mean() < 0.25


def test_gauss_sphere_integrates_polynomials():
    arr = make_gauss_sphere_array(12, 24, 2.0)
    check_array(arr, 16 * math.pi)
    z = arr.points[:, 2]
    assert abs(np.sum(arr.weights * z**2) - 4 * math.pi * 4 * 4 / 3) < 1e-9


@pytest.mark.parametrize("maker, n", [(make_circle_array, 2), (make_sphere_array, 3)])
def test_invalid_counts(maker, n):
    with pytest.raises(GeometryError):
        maker(n, 1.0)


def test_direction_grid_counts():
    g = make_direction_grid(2, 1.0, 3)
    assert g.count == 8
    assert np.allclose(np.linalg.norm(g.directions, axis=1), 1.0)
    assert g.cell_volume == pytest.approx(1.0)
    assert make_direction_grid(2, 1.0, 4).count == 16  # even count: no origin node
    far2d = make_direction_grid(2, 8.0, 40)
    assert far2d.count == 1600 and far2d.axis[0] == -8.0 and far2d.axis[-1] == 8.0
    far3d = make_direction_grid(3, 20.0, 40)
    assert far3d.count == 40**3 and far3d.cell_volume == pytest.approx((40 / 39) ** 3)
    assert np.allclose(far3d.norms[:, None] * far3d.directions, far3d.nodes)


def test_direction_grid_invalid():
    with pytest.raises(GeometryError):
        make_direction_grid(2, -1.0, 5)
    with pytest.raises(GeometryError):
        make_direction_grid(2, 1.0, 1)


def test_image_grid_layout_and_round_trip():
    g = make_image_grid(3, [(-1, 1), (0, 2), (-3, 0)], (4, 5, 6))
    assert g.size == 120 and g.values.shape == (4, 5, 6)
    coords = g.coordinates()
    assert np.allclose(coords[1], [-1, 0, -2.4])  # last axis fastest
    for flat in range(g.size):
        idx = np.unravel_index(flat, g.n_per_axis)
        assert np.array_equal(g.node_coordinate(idx), coords[flat])
        assert g.node_index(coords[flat]) == tuple(int(i) for i in idx)


def test_image_grid_invalid():
    with pytest.raises(GeometryError):
        make_image_grid(2, (1.0, -1.0), 5)
    with pytest.raises(GeometryError):
        make_image_grid(2, (0.0, np.inf), 5)
    with pytest.raises(GeometryError):
        make_image_grid(4, (0.0, 1.0), 5)
    g = make_image_grid(2, (0, 1), 3)
    with pytest.raises(ValueError):
        g.with_values(np.zeros(8))
