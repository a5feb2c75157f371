"""Continuous Fourier transform of sampled signals, and frequency-domain checks.

Convention: F[g](k) = integral of g(t) exp(i k t) dt, approximated by the
trapezoidal rule on the data's time axis.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import GeometryError
from .forward import QuadratureParams, TimeAxis, near_field_2d, near_field_3d
from .geometry import SensorArray
from .specfun import bessel_j0, hankel1, kernel_normal_derivative, sph_bessel_j0


@dataclass(frozen=True)
class WavenumberAxis:
    """Midpoint grid on (k_min, k_max]: n cells of width (k_max - k_min) / n."""

    k_min: float
    k_max: float
    n: int

    def __post_init__(self):
        if self.k_min < 0 or not self.k_max > self.k_min or self.n < 1:
            raise ValueError("wavenumber axis needs 0 <= k_min < k_max and n >= 1")

    @property
    def width(self):
        return (self.k_max - self.k_min) / self.n

    @property
    def nodes(self):
        return self.k_min + self.width * (np.arange(self.n) + 0.5)

    @property
    def weights(self):
        return np.full(self.n, self.width)


@dataclass
class SpectralData:
    k_axis: WavenumberAxis
    channels: np.ndarray
    geometry: object
    excitation: str = "velocity"

    def __post_init__(self):
        self.channels = np.asarray(self.channels, dtype=complex)
        if self.channels.ndim != 2 or self.channels.shape[1] != self.k_axis.n:
            raise ValueError(f"spectral channels {self.channels.shape} inconsistent with {self.k_axis.n} wavenumbers")


def trapezoid_weights(axis):
    w = np.full(axis.n, axis.dt)
    w[[0, -1]] *= 0.5
    return w


def fourier_transform(channels, axis, k):
    """Trapezoidal F[g](k) for every channel and every k; (C, T) x (K,) -> (C, K)."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    phase = np.exp(1j * np.outer(axis.times, k))
    return (np.asarray(channels, dtype=float) * trapezoid_weights(axis)) @ phase


def fourier_transform_diagonal(channels, axis, k):
    """F[g_c](k_c): channel c transformed at its own wavenumber; (C, T) x (C,) -> (C,)."""
    k = np.asarray(k, dtype=float)
    out = np.empty(len(k), dtype=complex)
    w = trapezoid_weights(axis)
    times = axis.times
    for start in range(0, len(k), 8192):
        sl = slice(start, start + 8192)
        phase = np.exp(1j * k[sl, None] * times[None, :])
        out[sl] = np.einsum("ct,ct->c", channels[sl] * w, phase)
    return out


def time_to_freq(data, k_axis):
    channels = fourier_transform(data.channels, data.axis, k_axis.nodes)
    return SpectralData(k_axis, channels, data.geometry, data.excitation)


def helmholtz_fundamental(dim, x, y, k):
    """Outgoing fundamental solution: (i/4) H0(k r) in 2D, exp(i k r) / (4 pi r) in 3D."""
    r = np.linalg.norm(np.asarray(x, dtype=float) - np.asarray(y, dtype=float), axis=-1)
    if dim == 2:
        return 0.25j * hankel1(0, k * r)
    return np.exp(1j * k * r) / (4.0 * math.pi * r)


def _check_interior(point, sensors):
    if np.linalg.norm(point) >= sensors.radius * (1.0 - 1e-12):
        raise GeometryError(f"point {tuple(np.round(point, 6))} is not strictly inside the sensor surface")


def reciprocity_integral(y, z, sensors, k):
    """Sensor-sum approximation of the boundary integral of Phi(x, y) dF0(x, z)/dnu."""
    y, z = np.asarray(y, dtype=float), np.asarray(z, dtype=float)
    _check_interior(y, sensors)
    _check_interior(z, sensors)
    phi = helmholtz_fundamental(sensors.dim, sensors.points, y, k)
    d_f0 = kernel_normal_derivative(sensors.dim, sensors.points, sensors.normals, z, k, family="bessel")
    return complex(np.sum(sensors.weights * phi * d_f0))


# --- volume integrals of the source ------------------------------------------


def _polar_nodes(term, n):
    """2D star/disk: polar about the centre with exact radial limits."""
    gl, gw = np.polynomial.legendre.leggauss(n)
    theta = 2.0 * math.pi * np.arange(2 * n) / (2 * n)
    if hasattr(term, "profile"):
        rmax = term.profile(theta)
    else:
        rmax = np.full_like(theta, term.radius)
    r = 0.5 * rmax[:, None] * (gl + 1.0)
    w = 0.5 * rmax[:, None] * gw * r * (math.pi / n)
    pts = np.asarray(term.center) + r[..., None] * np.stack([np.cos(theta), np.sin(theta)], axis=-1)[:, None, :]
    return pts.reshape(-1, 2), w.ravel()


def _slice_nodes(term, n):
    """3D solid of revolution: axial Gauss nodes, radial Gauss nodes on every
    inside interval of the slice, trapezoid in angle."""
    from .forward import _gauss_nodes

    e = np.eye(3)[term.symmetry_axis]
    f1 = np.eye(3)[(term.symmetry_axis + 1) % 3]
    f2 = np.eye(3)[(term.symmetry_axis + 2) % 3]
    z_lo, z_hi = term.axial_range
    z, wz = _gauss_nodes(np.array(z_lo), np.array(z_hi), n)
    radii = term.cross_section_radii(z)
    gl, gw = np.polynomial.legendre.leggauss(n)
    psi = 2.0 * math.pi * np.arange(2 * n) / (2 * n)
    ring = np.cos(psi)[:, None] * f1 + np.sin(psi)[:, None] * f2
    pts, wts = [], []
    for zi, wi, row in zip(z, wz, radii):
        row = row[~np.isnan(row)]
        bounds = np.concatenate([[0.0], row]) if len(row) % 2 else row
        for lo, hi in zip(bounds[0::2], bounds[1::2]):
            half = 0.5 * (hi - lo)
            r = lo + half * (gl + 1.0)
            w = wi * half * gw * r * (math.pi / n)
            p = np.asarray(term.center) + zi * e + r[:, None, None] * ring[None]
            pts.append(p.reshape(-1, 3))
            wts.append(np.repeat(w, len(psi)))
    if not pts:
        return np.zeros((0, 3)), np.zeros(0)
    return np.concatenate(pts), np.concatenate(wts)


def _box_nodes(spec, n):
    gl, gw = np.polynomial.legendre.leggauss(n)
    a = spec.support_radius
    axes = [c + a * gl for c in spec.center]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    w = np.ones(1)
    for _ in range(spec.dim):
        w = np.outer(w, a * gw).ravel()
    return pts, w


def volume_integral(spec, kernel, n=96):
    """Integral of kernel(y) * S(y) over the plane/space.

    ``kernel`` maps (N, d) points to (N, ...) values.  Smooth terms use a
    tensor Gauss rule on the support box; indicator terms use rules whose
    nodes respect the body boundary exactly.
    """
    total = 0.0
    smooth = [t for t in spec.terms if not getattr(t, "is_indicator", False)]
    if smooth:
        pts, w = _box_nodes(spec, n)
        vals = np.zeros(len(pts))
        for term in smooth:
            vals += term.evaluate(pts)
        keep = vals != 0.0
        total = total + np.tensordot(w[keep] * vals[keep], kernel(pts[keep]), axes=(0, 0))
    for term in spec.terms:
        if not getattr(term, "is_indicator", False):
            continue
        if spec.dim == 2:
            pts, w = _polar_nodes(term, n)
        elif getattr(term, "symmetry_axis", None) is not None:
            pts, w = _slice_nodes(term, n)
        else:
            raise ValueError(f"no volume rule for {type(term).__name__}")
        total = total + term.level * np.tensordot(w, kernel(pts), axes=(0, 0))
    return total


def far_pattern_freq(spec, directions, k, n=96):
    """Frequency-domain far-field pattern from its volume-integral formula.

    3D: (1/4 pi) int exp(-i k xhat.y) S dy;  2D: exp(i pi/4)/sqrt(8 pi k) times the same integral.
    """
    dirs = np.atleast_2d(np.asarray(directions, dtype=float))
    integral = volume_integral(spec, lambda y: np.exp(-1j * k * (y @ dirs.T)), n)
    if spec.dim == 3:
        return integral / (4.0 * math.pi)
    return np.exp(0.25j * math.pi) / math.sqrt(8.0 * math.pi * k) * integral


def imag_part_rhs(spec, x, k, n=96):
    """(k/4 pi) int j0(k|x-z|) S dz in 3D, (1/4) int J0(k|x-z|) S dz in 2D."""
    x = np.asarray(x, dtype=float)

    def kernel(z):
        r = np.linalg.norm(z - x, axis=1)
        return sph_bessel_j0(k * r) if spec.dim == 3 else bessel_j0(k * r)

    integral = volume_integral(spec, kernel, n)
    return k / (4.0 * math.pi) * integral if spec.dim == 3 else 0.25 * integral


def default_identity_axis(spec, x):
    """Time window for the imaginary-part check: the whole pulse in 3D, a
    long window in 2D where the tail never switches off."""
    d = float(np.linalg.norm(np.asarray(x, dtype=float) - spec.center))
    end = d + spec.support_radius
    if spec.dim == 3:
        return TimeAxis.from_interval(0.0, end, 2000)
    return TimeAxis.from_interval(0.0, 10.0 * end, 4000)


def imag_part_identity_residual(spec, x, k, quad=QuadratureParams(), axis=None, k_ref=None, n=96):
    """|Im u(x,k) - direct quadrature of its Bessel-kernel formula| / max|u|.

    u is the trapezoidal transform of synthesized near-field data at x; the
    normalization is max |u(x, k')| over ``k_ref`` (default: k' in (0, 30],
    100 midpoints, plus k itself).
    """
    x = np.asarray(x, dtype=float)
    axis = default_identity_axis(spec, x) if axis is None else axis
    sensor = SensorArray(spec.dim, float(np.linalg.norm(x)), x[None], (x / np.linalg.norm(x))[None], np.ones(1))
    synth = near_field_3d if spec.dim == 3 else near_field_2d
    data = synth(spec, sensor, axis, quad)
    k_ref = WavenumberAxis(0.0, 30.0, 100).nodes if k_ref is None else np.asarray(k_ref, dtype=float)
    ks = np.concatenate([[k], k_ref])
    u = fourier_transform(data.channels, axis, ks)[0]
    scale = np.max(np.abs(u))
    if scale == 0.0:
        return 0.0
    return float(abs(u[0].imag - imag_part_rhs(spec, x, k, n)) / scale)
