"""Serialization: grid text files, graymap heatmaps and data archives."""

from pathlib import Path

import numpy as np

from .errors import GridFormatError
from .forward import TimeAxis, TimeSeriesData
from .geometry import DirectionGrid, ImageGrid, SensorArray, make_direction_grid
from .spectral import SpectralData, WavenumberAxis

GRID_MAGIC = "# tdsampling-grid 1"


def write_grid(grid, path):
    """Header lines start with '#'; then one value per line, row-major, repr precision."""
    lines = [GRID_MAGIC, f"# dim {grid.dim}"]
    for i, ((lo, hi), n) in enumerate(zip(grid.bounds, grid.n_per_axis)):
        lines.append(f"# axis {i} {float(lo)!r} {float(hi)!r} {n}")
    lines += [repr(float(v)) for v in grid.values.ravel()]
    Path(path).write_text("\n".join(lines) + "\n")


def read_grid(path):
    text = Path(path).read_text().splitlines()
    header = [ln for ln in text if ln.startswith("#")]
    body = [ln for ln in text if ln.strip() and not ln.startswith("#")]
    if not header or header[0] != GRID_MAGIC:
        raise GridFormatError(f"{path}: missing '{GRID_MAGIC}' header")
    try:
        dim = int(header[1].split()[2]) if header[1].startswith("# dim ") else None
    except (IndexError, ValueError):
        dim = None
    if dim not in (2, 3):
        raise GridFormatError(f"{path}: malformed '# dim' header line")
    bounds, counts = [], []
    for i in range(dim):
        try:
            tag, word, idx, lo, hi, n = header[2 + i].split()
            if word != "axis" or int(idx) != i:
                raise ValueError
            bounds.append((float(lo), float(hi)))
            counts.append(int(n))
        except (IndexError, ValueError):
            raise GridFormatError(f"{path}: malformed header for axis {i}") from None
    expected = int(np.prod(counts))
    if len(body) != expected:
        raise GridFormatError(f"{path}: expected {expected} values, found {len(body)}")
    try:
        values = np.array([float(v) for v in body])
    except ValueError as exc:
        raise GridFormatError(f"{path}: {exc}") from None
    return ImageGrid(dim, np.array(bounds), tuple(counts), values.reshape(counts))


def _plane(grid, slice_spec):
    if grid.dim == 2:
        return grid.values
    if slice_spec is None:
        raise ValueError("a 3D grid needs slice_spec=(axis, index) for a heatmap")
    axis, index = slice_spec
    return np.take(grid.values, index, axis=axis)


def write_heatmap(grid, path, slice_spec=None):
    """8-bit binary PGM, min -> 0 and max -> 255 (128 everywhere for a constant
    grid); the range is stored in ``<path>.range``.  The first grid axis runs
    left to right, the second bottom to top."""
    plane = _plane(grid, slice_spec)
    lo, hi = float(plane.min()), float(plane.max())
    if hi > lo:
        pixels = np.rint((plane - lo) / (hi - lo) * 255.0)
    else:
        pixels = np.full(plane.shape, 128.0)
    image = pixels.astype(np.uint8).T[::-1]
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{image.shape[1]} {image.shape[0]}\n255\n".encode("ascii"))
        fh.write(image.tobytes())
    Path(str(path) + ".range").write_text(f"min = {lo!r}\nmax = {hi!r}\n")
    return path


def read_pgm(path):
    data = Path(path).read_bytes()
    parts = data.split(maxsplit=4)
    if parts[0] != b"P5":
        raise GridFormatError(f"{path}: not a binary graymap")
    width, height = int(parts[1]), int(parts[2])
    return np.frombuffer(parts[4][: width * height], dtype=np.uint8).reshape(height, width)


def _geometry_fields(geometry):
    if isinstance(geometry, SensorArray):
        return {
            "geometry": "sensors",
            "dim": geometry.dim,
            "radius": geometry.radius,
            "points": geometry.points,
            "normals": geometry.normals,
            "weights": geometry.weights,
        }
    if isinstance(geometry, DirectionGrid):
        return {"geometry": "directions", "dim": geometry.dim, "extent": geometry.extent, "n_per_axis": geometry.n_per_axis}
    raise TypeError(f"cannot serialize geometry of type {type(geometry).__name__}")


def _geometry_from(arch):
    kind = str(arch["geometry"])
    if kind == "sensors":
        return SensorArray(int(arch["dim"]), float(arch["radius"]), arch["points"], arch["normals"], arch["weights"])
    return make_direction_grid(int(arch["dim"]), float(arch["extent"]), int(arch["n_per_axis"]))


def save_time_series(data, path):
    np.savez(
        path,
        kind="time",
        t0=data.axis.t0,
        dt=data.axis.dt,
        n=data.axis.n,
        channels=data.channels,
        excitation=data.excitation,
        **_geometry_fields(data.geometry),
    )


def save_spectral(data, path):
    ax = data.k_axis
    np.savez(
        path,
        kind="spectral",
        k_min=ax.k_min,
        k_max=ax.k_max,
        k_n=ax.n,
        channels=data.channels,
        excitation=data.excitation,
        **_geometry_fields(data.geometry),
    )


def load_data(path):
    """Load a TimeSeriesData or SpectralData archive written by this module."""
    with np.load(path, allow_pickle=False) as arch:
        kind = str(arch["kind"])
        geometry = _geometry_from(arch)
        if kind == "time":
            axis = TimeAxis(float(arch["t0"]), float(arch["dt"]), int(arch["n"]))
            return TimeSeriesData(axis, arch["channels"], geometry, str(arch["excitation"]))
        if kind == "spectral":
            k_axis = WavenumberAxis(float(arch["k_min"]), float(arch["k_max"]), int(arch["k_n"]))
            return SpectralData(k_axis, arch["channels"], geometry, str(arch["excitation"]))
    raise GridFormatError(f"{path}: unknown archive kind {kind!r}")
