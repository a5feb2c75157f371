"""Analytic initial sources: evaluation, rasterization and plane/line integrals.

Every term can be evaluated pointwise.  Terms with a closed-form Radon
transform (integral over the hyperplane ``xhat . y = s``) expose it through
``radon``; the forward far-field solver falls back to quadrature otherwise.
"""

from dataclasses import dataclass, field, replace
import math

import numpy as np

from .errors import GeometryError


def _points(y, dim):
    pts = np.asarray(y, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[-1] != dim:
        raise ValueError(f"point dimension {pts.shape[-1]} does not match source dimension {dim}")
    return pts, single


@dataclass(frozen=True)
class GaussianTerm:
    amplitude: float
    center: tuple
    sharpness: float

    is_indicator = False

    def evaluate(self, pts):
        d = pts - np.asarray(self.center)
        return self.amplitude * np.exp(-self.sharpness * np.sum(d * d, axis=-1))

    def radon(self, directions, s):
        """Integral over {y : xhat . y = s}; directions (M, d), s (M, T)."""
        dim = len(self.center)
        shift = directions @ np.asarray(self.center)
        a = self.sharpness
        return self.amplitude * (math.pi / a) ** ((dim - 1) / 2) * np.exp(-a * (s - shift[:, None]) ** 2)

    def translated(self, z0):
        return replace(self, center=tuple(np.asarray(self.center) + z0))


@dataclass(frozen=True)
class PolyGaussianTerm:
    """amplitude * (y2^2 - y1^2) * exp(-sharpness |y|^2), y relative to ``center`` (2D)."""

    amplitude: float
    sharpness: float
    center: tuple = (0.0, 0.0)

    is_indicator = False

    def evaluate(self, pts):
        d = pts - np.asarray(self.center)
        return self.amplitude * (d[:, 1] ** 2 - d[:, 0] ** 2) * np.exp(-self.sharpness * np.sum(d * d, axis=-1))

    def radon(self, directions, s):
        a = self.sharpness
        shift = directions @ np.asarray(self.center)
        cos2 = (directions[:, 0] ** 2 - directions[:, 1] ** 2)[:, None]
        sc = s - shift[:, None]
        return self.amplitude * cos2 * math.sqrt(math.pi / a) * np.exp(-a * sc * sc) * (1.0 / (2.0 * a) - sc * sc)

    def translated(self, z0):
        return replace(self, center=tuple(np.asarray(self.center) + z0))


@dataclass(frozen=True)
class BallIndicator:
    center: tuple
    radius: float
    level: float = 1.0

    is_indicator = True

    def contains(self, pts):
        d = pts - np.asarray(self.center)
        return np.sum(d * d, axis=-1) <= self.radius**2

    def evaluate(self, pts):
        return np.where(self.contains(pts), self.level, 0.0)

    @property
    def bounding_radius(self):
        return self.radius

    @property
    def symmetry_axis(self):
        return 2 if len(self.center) == 3 else None

    @property
    def axial_range(self):
        return -self.radius, self.radius

    def cross_section_radii(self, z):
        """Radii bounding the slice at axial offset ``z`` (see AxisymmetricCurveIndicator)."""
        r2 = self.radius**2 - np.asarray(z) ** 2
        return np.where(r2 > 0, np.sqrt(np.maximum(r2, 0.0)), np.nan)[:, None]

    def radon(self, directions, s):
        dim = len(self.center)
        shift = directions @ np.asarray(self.center)
        h2 = np.maximum(self.radius**2 - (s - shift[:, None]) ** 2, 0.0)
        if dim == 3:
            return self.level * math.pi * h2
        return self.level * 2.0 * np.sqrt(h2)

    def translated(self, z0):
        return replace(self, center=tuple(np.asarray(self.center) + z0))


@dataclass(frozen=True)
class RadialStarIndicator:
    """Star-shaped body |y - c| <= a + b cos(m theta).

    In 2D theta is the polar angle in the plane; in 3D it is the angle from the
    third axis, so the body is axisymmetric about the line through ``center``
    parallel to e3.
    """

    center: tuple
    a: float
    b: float
    m: int
    level: float = 1.0

    def __post_init__(self):
        if self.a <= abs(self.b):
            raise GeometryError("radial profile a + b cos(m theta) must stay positive")
        if len(self.center) == 3:
            theta = np.linspace(0.0, math.pi, 4097)
            rho = self.profile(theta)
            curve = np.column_stack([rho * np.cos(theta), rho * np.sin(theta)])
            curve[[0, -1], 1] = 0.0
            object.__setattr__(self, "_pieces", _MonotonePieces(curve))

    def profile(self, theta):
        return self.a + self.b * np.cos(self.m * theta)

    @property
    def bounding_radius(self):
        return self.a + abs(self.b)

    @property
    def symmetry_axis(self):
        return 2 if len(self.center) == 3 else None

    is_indicator = True

    def contains(self, pts):
        d = pts - np.asarray(self.center)
        rho = np.sqrt(np.sum(d * d, axis=-1))
        if len(self.center) == 2:
            theta = np.arctan2(d[..., 1], d[..., 0])
        else:
            theta = np.arctan2(np.hypot(d[..., 0], d[..., 1]), d[..., 2])
        return rho <= self.profile(theta)

    def evaluate(self, pts):
        return np.where(self.contains(pts), self.level, 0.0)

    @property
    def axial_range(self):
        return self._pieces.z_range

    def cross_section_radii(self, z):
        if len(self.center) != 3:
            raise ValueError("cross sections are defined for the 3D body only")
        return self._pieces.radii(np.asarray(z, dtype=float))

    radon = None

    def translated(self, z0):
        return replace(self, center=tuple(np.asarray(self.center) + z0))


class _MonotonePieces:
    """Generating curve split into pieces monotone in the axial coordinate."""

    def __init__(self, curve):
        z, r = curve[:, 0], curve[:, 1]
        dz = np.sign(np.diff(z))
        # carry flat segments in the direction of the preceding run
        for i in range(1, len(dz)):
            if dz[i] == 0:
                dz[i] = dz[i - 1]
        breaks = np.flatnonzero(np.diff(dz) != 0) + 1
        self.pieces = []
        for lo, hi in zip(np.r_[0, breaks], np.r_[breaks, len(z) - 1]):
            pz, pr = z[lo : hi + 1], r[lo : hi + 1]
            if pz[0] > pz[-1]:
                pz, pr = pz[::-1], pr[::-1]
            if pz[-1] > pz[0]:
                self.pieces.append((pz, pr))

    @property
    def z_range(self):
        return min(pz[0] for pz, _ in self.pieces), max(pz[-1] for pz, _ in self.pieces)

    def radii(self, zq):
        """(len(zq), n_pieces) crossing radii at axial positions, sorted, NaN-padded."""
        out = np.full((len(zq), len(self.pieces)), np.nan)
        for j, (pz, pr) in enumerate(self.pieces):
            inside = (zq >= pz[0]) & (zq < pz[-1])
            out[inside, j] = np.interp(zq[inside], pz, pr)
        return np.sort(out, axis=1)

    def crossings(self, zq, rq):
        count = np.zeros(zq.shape, dtype=int)
        for pz, pr in self.pieces:
            inside = (zq >= pz[0]) & (zq < pz[-1])
            rc = np.interp(zq, pz, pr)
            count += inside & (rc > rq)
        return count


def _check_closed(curve):
    curve = np.asarray(curve, dtype=float)
    if curve.ndim != 2 or curve.shape[1] != 2 or len(curve) < 3:
        raise GeometryError("generating curve must be a (K, 2) array with K >= 3")
    if abs(curve[0, 1]) > 1e-9 or abs(curve[-1, 1]) > 1e-9:
        raise GeometryError("generating curve is open: both ends must lie on the symmetry axis")
    return curve


def inside_axisymmetric(curve, axis, y, center=None):
    """Point-in-body test for the solid of revolution of ``curve`` about ``axis``.

    ``curve`` holds (axial, radial) samples whose ends sit on the axis, so the
    curve plus its mirror image is closed.  Counts crossings of the ray from
    (axial, radial) in the +radial direction; odd means inside.
    """
    curve = _check_closed(curve)
    pts = np.atleast_2d(np.asarray(y, dtype=float))
    if center is not None:
        pts = pts - np.asarray(center)
    zq = pts[:, axis]
    rq = np.sqrt(np.sum(np.delete(pts, axis, axis=1) ** 2, axis=1))
    pieces = _MonotonePieces(np.column_stack([curve[:, 0], np.abs(curve[:, 1])]))
    result = pieces.crossings(zq, rq) % 2 == 1
    return result[0] if np.asarray(y).ndim == 1 else result


@dataclass(frozen=True)
class AxisymmetricCurveIndicator:
    """Solid of revolution of a generating curve (axial, radial) about ``axis``."""

    curve: np.ndarray = field(repr=False)
    axis: int = 0
    center: tuple = (0.0, 0.0, 0.0)
    level: float = 1.0

    def __post_init__(self):
        curve = _check_closed(self.curve)
        object.__setattr__(self, "curve", curve)
        object.__setattr__(self, "_pieces", _MonotonePieces(np.column_stack([curve[:, 0], np.abs(curve[:, 1])])))

    @property
    def bounding_radius(self):
        return float(np.max(np.hypot(self.curve[:, 0], self.curve[:, 1])))

    @property
    def symmetry_axis(self):
        return self.axis

    is_indicator = True

    def contains(self, pts):
        d = pts - np.asarray(self.center)
        zq = d[..., self.axis]
        rq = np.sqrt(np.sum(np.delete(d, self.axis, axis=-1) ** 2, axis=-1))
        return self._pieces.crossings(zq, rq) % 2 == 1

    def evaluate(self, pts):
        return np.where(self.contains(pts), self.level, 0.0)

    @property
    def axial_range(self):
        return self._pieces.z_range

    def cross_section_radii(self, z):
        """Sorted radii r_1 < ... < r_n where the slice at axial offset ``z``
        changes between inside and outside (NaN-padded per row)."""
        return self._pieces.radii(np.asarray(z, dtype=float))

    radon = None

    def translated(self, z0):
        return replace(self, center=tuple(np.asarray(self.center) + z0))


@dataclass(frozen=True)
class SourceSpec:
    dim: int
    terms: tuple
    support_radius: float
    support_center: tuple = None

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise ValueError(f"dim must be 2 or 3, got {self.dim}")
        if not self.support_radius > 0:
            raise ValueError("support_radius must be positive")
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.support_center is None:
            object.__setattr__(self, "support_center", (0.0,) * self.dim)
        for term in self.terms:
            if len(term.center) != self.dim:
                raise ValueError(f"term {type(term).__name__} has dimension {len(term.center)}, spec has {self.dim}")

    @property
    def center(self):
        return np.asarray(self.support_center, dtype=float)

    def translated(self, z0):
        z0 = np.asarray(z0, dtype=float)
        return replace(
            self,
            terms=tuple(t.translated(z0) for t in self.terms),
            support_center=tuple(self.center + z0),
        )

    def scaled(self, factor):
        """Same geometry with every level/amplitude multiplied by ``factor``."""
        out = []
        for t in self.terms:
            key = "amplitude" if hasattr(t, "amplitude") else "level"
            out.append(replace(t, **{key: getattr(t, key) * factor}))
        return replace(self, terms=tuple(out))


def eval_source(spec, y):
    pts, single = _points(y, spec.dim)
    out = np.zeros(len(pts))
    for term in spec.terms:
        out += term.evaluate(pts)
    return out[0] if single else out


def rasterize(spec, grid):
    if grid.dim != spec.dim:
        raise ValueError(f"grid dimension {grid.dim} does not match source dimension {spec.dim}")
    return grid.with_values(eval_source(spec, grid.coordinates()))


def peanut_curve(n=4096):
    """Generating curve of the Near3D body, (axial, radial) for theta in [0, pi]."""
    theta = np.linspace(0.0, math.pi, n)
    curve = np.column_stack([np.cos(theta) + 0.65 * np.cos(2 * theta) - 0.2, 1.5 * np.sin(theta)])
    curve[[0, -1], 1] = 0.0
    return curve
