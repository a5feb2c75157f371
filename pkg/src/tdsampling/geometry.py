"""Sensor arrays, far-field direction grids and image sampling grids."""

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import GeometryError

GOLDEN = (1.0 + 5.0**0.5) / 2.0


@dataclass(frozen=True)
class SensorArray:
    """Measurement points on the circle/sphere of radius ``radius``.

    ``weights`` holds the surface measure carried by each sensor; for the
    equal-weight constructors every entry is the same and ``weight`` returns it.
    """

    dim: int
    radius: float
    points: np.ndarray
    normals: np.ndarray
    weights: np.ndarray

    @property
    def count(self):
        return len(self.points)

    @property
    def weight(self):
        if not np.all(self.weights == self.weights[0]):
            raise ValueError("sensor weights are not uniform")
        return float(self.weights[0])

    @property
    def geom_eps(self):
        return 1e-12 * self.radius


def _array_from_points(dim, radius, unit, weights):
    unit = np.asarray(unit, dtype=float)
    unit = unit / np.linalg.norm(unit, axis=1, keepdims=True)
    return SensorArray(
        dim=dim,
        radius=float(radius),
        points=radius * unit,
        normals=unit,
        weights=np.broadcast_to(np.asarray(weights, dtype=float), (len(unit),)).copy(),
    )


def make_circle_array(n, radius):
    if n < 3:
        raise GeometryError(f"a circle array needs at least 3 sensors, got {n}")
    if radius <= 0:
        raise GeometryError("radius must be positive")
    theta = 2.0 * np.pi * np.arange(n) / n
    unit = np.column_stack([np.cos(theta), np.sin(theta)])
    return _array_from_points(2, radius, unit, 2.0 * np.pi * radius / n)


def make_sphere_array(n, radius):
    """Fibonacci-lattice sensors with equal weights 4 pi R^2 / n."""
    if n < 4:
        raise GeometryError(f"a sphere array needs at least 4 sensors, got {n}")
    if radius <= 0:
        raise GeometryError("radius must be positive")
    i = np.arange(n) + 0.5
    polar = np.arccos(1.0 - 2.0 * i / n)
    azim = 2.0 * np.pi * i / GOLDEN
    unit = np.column_stack(
        [np.sin(polar) * np.cos(azim), np.sin(polar) * np.sin(azim), np.cos(polar)]
    )
    return _array_from_points(3, radius, unit, 4.0 * np.pi * radius**2 / n)


def make_gauss_sphere_array(n_polar, n_azimuth, radius):
    """Product Gauss-Legendre (in cos theta) x trapezoid (in phi) sphere rule.

    Not a measurement layout; used where sphere integrals must converge
    spectrally (reciprocity checks).
    """
    if n_polar < 2 or n_azimuth < 3:
        raise GeometryError("product sphere rule needs n_polar >= 2 and n_azimuth >= 3")
    mu, w_mu = np.polynomial.legendre.leggauss(n_polar)
    phi = 2.0 * np.pi * np.arange(n_azimuth) / n_azimuth
    mu_g, phi_g = np.meshgrid(mu, phi, indexing="ij")
    s = np.sqrt(1.0 - mu_g**2)
    unit = np.column_stack([(s * np.cos(phi_g)).ravel(), (s * np.sin(phi_g)).ravel(), mu_g.ravel()])
    weights = radius**2 * np.repeat(w_mu, n_azimuth) * (2.0 * np.pi / n_azimuth)
    return _array_from_points(3, radius, unit, weights)


@dataclass(frozen=True)
class DirectionGrid:
    """Uniform Cartesian grid over [-extent, extent]^dim used as the far-field
    integration variable x = |x| * xhat.  The origin node is excluded."""

    dim: int
    extent: float
    n_per_axis: int
    axis: np.ndarray
    nodes: np.ndarray
    norms: np.ndarray
    directions: np.ndarray
    index: np.ndarray
    cell_volume: float

    @property
    def count(self):
        return len(self.nodes)


def make_direction_grid(dim, extent, n_per_axis):
    if dim not in (2, 3):
        raise GeometryError(f"dim must be 2 or 3, got {dim}")
    if not extent > 0 or n_per_axis < 2:
        raise GeometryError("direction grid needs extent > 0 and n_per_axis >= 2")
    axis = np.linspace(-extent, extent, n_per_axis)
    mesh = np.meshgrid(*([axis] * dim), indexing="ij")
    nodes = np.stack([m.ravel() for m in mesh], axis=1)
    norms = np.linalg.norm(nodes, axis=1)
    keep = norms >= 1e-12 * extent
    index = np.flatnonzero(keep)
    nodes, norms = nodes[keep], norms[keep]
    return DirectionGrid(
        dim=dim,
        extent=float(extent),
        n_per_axis=int(n_per_axis),
        axis=axis,
        nodes=nodes,
        norms=norms,
        directions=nodes / norms[:, None],
        index=index,
        cell_volume=(2.0 * extent / (n_per_axis - 1)) ** dim,
    )


@dataclass(frozen=True)
class ImageGrid:
    dim: int
    bounds: np.ndarray
    n_per_axis: tuple
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.values.shape != tuple(self.n_per_axis):
            raise ValueError(
                f"values shape {self.values.shape} does not match grid {tuple(self.n_per_axis)}"
            )

    @property
    def size(self):
        return int(np.prod(self.n_per_axis))

    @property
    def axes(self):
        return [np.linspace(lo, hi, n) for (lo, hi), n in zip(self.bounds, self.n_per_axis)]

    @property
    def spacing(self):
        return np.array([(hi - lo) / (n - 1) for (lo, hi), n in zip(self.bounds, self.n_per_axis)])

    def coordinates(self):
        """(size, dim) node coordinates in row-major order."""
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    def node_coordinate(self, idx):
        return np.array([ax[i] for ax, i in zip(self.axes, idx)])

    def node_index(self, point):
        lo = self.bounds[:, 0]
        return tuple(int(i) for i in np.rint((np.asarray(point) - lo) / self.spacing))

    def with_values(self, values):
        return replace(self, values=np.asarray(values, dtype=float).reshape(self.n_per_axis))

    def same_layout(self, other):
        return (
            self.dim == other.dim
            and tuple(self.n_per_axis) == tuple(other.n_per_axis)
            and np.array_equal(self.bounds, other.bounds)
        )


def make_image_grid(dim, bounds, n_per_axis):
    if dim not in (2, 3):
        raise GeometryError(f"dim must be 2 or 3, got {dim}")
    bounds = np.asarray(bounds, dtype=float)
    if bounds.shape == (2,):
        bounds = np.tile(bounds, (dim, 1))
    if bounds.shape != (dim, 2):
        raise GeometryError(f"bounds must have shape ({dim}, 2)")
    if not np.all(np.isfinite(bounds)) or np.any(bounds[:, 0] >= bounds[:, 1]):
        raise GeometryError("image grid bounds must be finite with min < max")
    n = np.broadcast_to(np.asarray(n_per_axis, dtype=int), (dim,))
    if np.any(n < 2):
        raise GeometryError("image grid needs at least 2 nodes per axis")
    n = tuple(int(v) for v in n)
    return ImageGrid(dim=dim, bounds=bounds, n_per_axis=n, values=np.zeros(n))
