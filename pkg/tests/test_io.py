import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tdsampling.errors import GridFormatError
from tdsampling.forward import TimeAxis, TimeSeriesData
from tdsampling.geometry import make_circle_array, make_direction_grid, make_image_grid, make_sphere_array
from tdsampling.io import load_data, read_grid, read_pgm, save_spectral, save_time_series, write_grid, write_heatmap
from tdsampling.spectral import SpectralData, WavenumberAxis


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3]))
def test_grid_round_trip(tmp_path_factory, seed, dim):
    rng = np.random.default_rng(seed)
    n = tuple(rng.integers(2, 6, dim))
    g = make_image_grid(dim, rng.uniform(-2, -0.1, (dim, 1)) * [1, -1], n)
    g = g.with_values(rng.normal(size=n) * 10.0 ** rng.integers(-300, 300, n))
    path = tmp_path_factory.mktemp("g") / "x.grid"
    write_grid(g, path)
    back = read_grid(path)
    assert back.same_layout(g)
    assert np.array_equal(back.values, g.values)


def test_two_by_two(tmp_path):
    g = make_image_grid(2, (0, 1), 2).with_values(np.arange(4.0).reshape(2, 2))
    write_grid(g, tmp_path / "a.grid")
    lines = (tmp_path / "a.grid").read_text().splitlines()
    assert len([ln for ln in lines if not ln.startswith("#")]) == 4


def test_malformed(tmp_path):
    g = make_image_grid(2, (0, 1), 3).with_values(np.ones((3, 3)))
    p = tmp_path / "b.grid"
    write_grid(g, p)
    p.write_text("\n".join(p.read_text().splitlines()[:-2]) + "\n")
    with pytest.raises(GridFormatError, match="expected 9 values"):
        read_grid(p)
    p.write_text("1.0\n2.0\n")
    with pytest.raises(GridFormatError):
        read_grid(p)
    p.write_text("# tdsampling-grid 1\n# dim 2\n# axis 0 0 1\n")
    with pytest.raises(GridFormatError):
        read_grid(p)


def test_heatmap(tmp_path):
    const = make_image_grid(2, (0, 1), 4).with_values(np.full((4, 4), 2.0))
    write_heatmap(const, tmp_path / "c.pgm")
    assert np.all(read_pgm(tmp_path / "c.pgm") == 128)
    ramp = make_image_grid(2, (0, 1), (3, 2)).with_values(np.arange(6.0).reshape(3, 2))
    write_heatmap(ramp, tmp_path / "r.pgm")
    img = read_pgm(tmp_path / "r.pgm")
    assert img.shape == (2, 3) and img.min() == 0 and img.max() == 255
    assert img[1, 0] == 0 and img[0, 2] == 255  # first axis left-right, second bottom-top
    assert "max = 5.0" in (tmp_path / "r.pgm.range").read_text()
    g3 = make_image_grid(3, (0, 1), 4).with_values(np.random.default_rng(0).normal(size=(4, 4, 4)))
    with pytest.raises(ValueError):
        write_heatmap(g3, tmp_path / "x.pgm")
    write_heatmap(g3, tmp_path / "s.pgm", (2, 2))
    assert read_pgm(tmp_path / "s.pgm").shape == (4, 4)


@pytest.mark.parametrize("geometry", [make_circle_array(5, 1.0), make_sphere_array(6, 2.0), make_direction_grid(3, 2.0, 3)])
def test_archives(tmp_path, geometry):
    n = geometry.count
    rng = np.random.default_rng(1)
    data = TimeSeriesData(TimeAxis(-1.0, 0.25, 9), rng.normal(size=(n, 9)), geometry, "displacement")
    save_time_series(data, tmp_path / "d.npz")
    back = load_data(tmp_path / "d.npz")
    assert back.axis == data.axis and back.excitation == "displacement"
    assert np.array_equal(back.channels, data.channels)
    assert back.geometry.count == n
    spec = SpectralData(WavenumberAxis(0, 3, 4), rng.normal(size=(n, 4)) + 1j, geometry)
    save_spectral(spec, tmp_path / "s.npz")
    sb = load_data(tmp_path / "s.npz")
    assert sb.k_axis == spec.k_axis and np.array_equal(sb.channels, spec.channels)
