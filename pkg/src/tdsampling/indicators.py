"""Direct-sampling indicator functions.

Each indicator maps measured data to values on an ImageGrid approximating the
source.  Near-field indicators sum over sensors (and wavenumbers); far-field
indicators sum over a Cartesian grid of x = |x| xhat, where the time integral
against exp(i|x|t) of the shifted trace reduces exactly to exp(i x.y) times the
channel's Fourier transform at k = |x|.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.ndimage import uniform_filter1d

from .errors import GeometryError, RetardedTimeError, SpectrumError
from .forward import DISPLACEMENT, VELOCITY
from .geometry import DirectionGrid, SensorArray
from .spectral import fourier_transform_diagonal
from .specfun import kernel_normal_derivative

NODE_CHUNK = 2048
NYQUIST_FRACTION = 0.8


@dataclass(frozen=True)
class FilterParams:
    """Centred moving average of ``window`` samples (odd), or none."""

    window: int | None = None

    def __post_init__(self):
        if self.window is not None and (self.window < 1 or self.window % 2 == 0):
            raise ValueError("filter window must be a positive odd integer")

    @classmethod
    def for_snr(cls, snr_db):
        return cls(5) if snr_db is not None and snr_db <= 20.0 else cls(None)

    def apply(self, channels):
        if self.window is None or self.window == 1:
            return channels
        return uniform_filter1d(channels, self.window, axis=-1, mode="nearest")


@dataclass
class ReconstructionResult:
    grid: object
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not np.all(np.isfinite(self.grid.values)):
            raise ValueError("reconstruction contains non-finite values")


# --- helpers ----------------------------------------------------------------


def _require(got, want, what):
    if got != want:
        raise ValueError(f"{what} needs {want} data, got {got}")


def _interior_nodes(grid, sensors):
    nodes = grid.coordinates()
    if grid.dim != sensors.dim:
        raise ValueError(f"grid dimension {grid.dim} does not match sensors ({sensors.dim})")
    radius = np.linalg.norm(nodes, axis=1)
    bad = np.flatnonzero(radius >= sensors.radius - sensors.geom_eps)
    if bad.size:
        raise GeometryError(
            f"image node {tuple(np.round(nodes[bad[0]], 6))} is not strictly inside the sensor surface"
        )
    return nodes


def _geometry_terms(nodes, sensors):
    """Distances r (N, C) and weighted cosine factors w (x-y).nu / r (N, C)."""
    diff = sensors.points[None, :, :] - nodes[:, None, :]
    r = np.sqrt(np.sum(diff * diff, axis=-1))
    if np.any(r <= sensors.geom_eps):
        raise GeometryError("image node coincides with a sensor")
    cos = np.einsum("ncd,cd->nc", diff, sensors.normals) / r
    return r, cos * sensors.weights


def central_derivatives(channels, dt):
    """First and second time derivatives by fourth-order central differences
    (second order at the two samples nearest each end)."""
    f = np.asarray(channels, dtype=float)
    d1 = np.gradient(f, dt, axis=-1, edge_order=2)
    d2 = np.empty_like(f)
    d2[..., 1:-1] = (f[..., 2:] - 2.0 * f[..., 1:-1] + f[..., :-2]) / dt**2
    d2[..., 0] = d2[..., 1]
    d2[..., -1] = d2[..., -2]
    inner = slice(2, -2)
    d1[..., inner] = (-f[..., 4:] + 8.0 * f[..., 3:-1] - 8.0 * f[..., 1:-3] + f[..., :-4]) / (12.0 * dt)
    d2[..., inner] = (
        -f[..., 4:] + 16.0 * f[..., 3:-1] - 30.0 * f[..., 2:-2] + 16.0 * f[..., 1:-3] - f[..., :-4]
    ) / (12.0 * dt * dt)
    return d1, d2


class _ChannelSpline:
    """Cubic splines of every channel, evaluated at one time per (node, channel)."""

    def __init__(self, axis, channels):
        self.t0, self.dt, self.n = axis.t0, axis.dt, axis.n
        spline = CubicSpline(axis.times, np.asarray(channels, dtype=float).T, axis=0)
        self.coef = spline.c  # (4, n - 1, C)
        self.cols = np.arange(self.coef.shape[2])

    def __call__(self, r):
        pos = (r - self.t0) / self.dt
        idx = np.clip(np.floor(pos).astype(int), 0, self.n - 2)
        s = r - (self.t0 + idx * self.dt)
        c = self.coef[:, idx, self.cols]
        return ((c[0] * s + c[1]) * s + c[2]) * s + c[3]


def _check_retarded(r, axis, nodes_offset):
    lo, hi = axis.t0, axis.t_end
    bad = (r < lo) | (r > hi)
    if np.any(bad):
        n, c = np.argwhere(bad)[0]
        raise RetardedTimeError(int(c), int(n + nodes_offset), float(r[n, c]), (lo, hi))


def _near_time(data, grid, filt, combine, name):
    sensors = data.geometry
    if not isinstance(sensors, SensorArray) or sensors.dim != 3:
        raise ValueError(f"{name} needs 3D sensor-array data")
    nodes = _interior_nodes(grid, sensors)
    smoothed = filt.apply(data.channels)
    d1, d2 = central_derivatives(smoothed, data.axis.dt)
    splines = [_ChannelSpline(data.axis, f) for f in (smoothed, d1, d2)]
    out = np.empty(len(nodes))
    for start in range(0, len(nodes), NODE_CHUNK):
        chunk = nodes[start : start + NODE_CHUNK]
        r, wcos = _geometry_terms(chunk, sensors)
        _check_retarded(r, data.axis, start)
        p, dp, ddp = (s(r) for s in splines)
        out[start : start + len(chunk)] = np.sum(wcos / (2.0 * math.pi * r) * combine(r, p, dp, ddp), axis=1)
    return ReconstructionResult(
        grid.with_values(out), {"indicator": name, "filter_window": filt.window, "excitation": data.excitation}
    )


# --- near field, time domain --------------------------------------------------


def indicator_near_time_3d(data, grid, filt=FilterParams()):
    """sum_x w ((x-y).nu) / (2 pi r^2) * (p'(x, r) / r - p''(x, r)),  r = |x - y|."""
    _require(data.excitation, VELOCITY, "indicator_near_time_3d")
    return _near_time(data, grid, filt, lambda r, p, dp, ddp: dp / r - ddp, "near_time_3d")


def indicator_near_time_disp_3d(data, grid, filt=FilterParams()):
    """Displacement counterpart: sum_x w ((x-y).nu) / (2 pi r^2) * (p(x, r) / r - p'(x, r)).

    Data p = d/dt of the velocity-excitation field, so this is the velocity
    kernel applied to the antiderivative of p.
    """
    _require(data.excitation, DISPLACEMENT, "indicator_near_time_disp_3d")
    return _near_time(data, grid, filt, lambda r, p, dp, ddp: p / r - dp, "near_time_disp_3d")


# --- near field, frequency domain ---------------------------------------------


def _spherical_sum(spectral, nodes, alpha, beta):
    """sum_k w_k sum_x w_x cos * Re[(alpha(k)/r + beta(k)/r^2) exp(i k r) conj(u)].

    exp(i k r) is advanced by a fixed rotation per midpoint step.
    """
    sensors = spectral.geometry
    ks = spectral.k_axis.nodes
    wk = spectral.k_axis.weights
    step_k = spectral.k_axis.width
    u = np.conj(spectral.channels)
    out = np.empty(len(nodes))
    for start in range(0, len(nodes), NODE_CHUNK // 4):
        chunk = nodes[start : start + NODE_CHUNK // 4]
        r, wcos = _geometry_terms(chunk, sensors)
        inv_r, inv_r2 = wcos / r, wcos / (r * r)
        phase = np.exp(1j * ks[0] * r)
        rot = np.exp(1j * step_k * r)
        acc = np.zeros(len(chunk))
        for j, k in enumerate(ks):
            if j:
                phase *= rot
            if j % 16 == 15:
                # renormalize to stop the recurrence drifting off the unit circle
                phase = np.exp(1j * k * r)
            a = phase * u[:, j]
            acc += wk[j] * (np.real(alpha(k) * np.sum(inv_r * a, axis=1)) + np.real(beta(k) * np.sum(inv_r2 * a, axis=1)))
        out[start : start + len(chunk)] = acc
    return out


def _cylindrical_sum(spectral, nodes):
    """sum_k w_k k sum_x w_x Re[dH0(k r)/dnu conj(u)] via the library kernel."""
    sensors = spectral.geometry
    ks, wk = spectral.k_axis.nodes, spectral.k_axis.weights
    u = np.conj(spectral.channels)
    out = np.empty(len(nodes))
    for start in range(0, len(nodes), NODE_CHUNK // 4):
        chunk = nodes[start : start + NODE_CHUNK // 4]
        _geometry_terms(chunk, sensors)
        x = sensors.points[None]
        nu = sensors.normals[None]
        y = chunk[:, None, :]
        acc = np.zeros(len(chunk))
        for j, k in enumerate(ks):
            dk = kernel_normal_derivative(2, x, nu, y, k, family="hankel")
            acc += wk[j] * k * np.real(dk * u[:, j]) @ sensors.weights
        out[start : start + len(chunk)] = acc
    return out


def indicator_near_freq(spectral, grid, dim):
    """3D: (1/2 pi^2) int int Re[d h0/dnu conj(u)] k^2;  2D: (1/2 pi) int int Re[d H0/dnu conj(u)] k."""
    sensors = spectral.geometry
    if not isinstance(sensors, SensorArray) or sensors.dim != dim:
        raise ValueError(f"indicator_near_freq needs {dim}D sensor-array spectra")
    _require(spectral.excitation, VELOCITY, "indicator_near_freq")
    nodes = _interior_nodes(grid, sensors)
    if dim == 3:
        # k^2 dh0(kr)/dnu = cos (k^2 / r + i k / r^2) exp(i k r)
        vals = _spherical_sum(spectral, nodes, lambda k: k * k, lambda k: 1j * k) / (2.0 * math.pi**2)
    else:
        vals = _cylindrical_sum(spectral, nodes) / (2.0 * math.pi)
    return ReconstructionResult(grid.with_values(vals), {"indicator": f"near_freq_{dim}d"})


def indicator_disp_near_freq(spectral, grid):
    """(1/2 pi^2) int int Re[-i k dh0/dnu conj(u)] for displacement spectra (3D).

    Displacement spectra satisfy u = -i k int Phi S under the exp(+i k t)
    transform, hence the -i k weight.
    """
    sensors = spectral.geometry
    if not isinstance(sensors, SensorArray) or sensors.dim != 3:
        raise ValueError("indicator_disp_near_freq needs 3D sensor-array spectra")
    _require(spectral.excitation, DISPLACEMENT, "indicator_disp_near_freq")
    nodes = _interior_nodes(grid, sensors)
    # -i k dh0(kr)/dnu = cos (-i k / r + 1 / r^2) exp(i k r)
    vals = _spherical_sum(spectral, nodes, lambda k: -1j * k, lambda k: 1.0) / (2.0 * math.pi**2)
    return ReconstructionResult(grid.with_values(vals), {"indicator": "disp_near_freq_3d"})


# --- far field ------------------------------------------------------------------


def _far_spectra(data):
    grid = data.geometry
    if not isinstance(grid, DirectionGrid):
        raise ValueError("far-field indicators need data on a DirectionGrid")
    limit = NYQUIST_FRACTION * math.pi / data.axis.dt
    if grid.norms.max() > limit:
        raise SpectrumError(
            f"direction-grid node |x| = {grid.norms.max():.3f} exceeds the reliable band "
            f"|x| <= {limit:.3f} implied by dt = {data.axis.dt:g}"
        )
    return fourier_transform_diagonal(data.channels, data.axis, grid.norms)


def _cartesian_sum(dgrid, coeff, image):
    """sum_x coeff(x) exp(i x . y) over the direction grid, for all image nodes.

    exp(i x.y) factorizes over coordinates, so the sum is a chain of
    one-axis contractions on the full Cartesian tensor (origin entry zero).
    """
    full = np.zeros(dgrid.n_per_axis**dgrid.dim, dtype=complex)
    full[dgrid.index] = coeff
    tensor = full.reshape((dgrid.n_per_axis,) * dgrid.dim)
    for y_axis in image.axes:
        # contract the leading direction axis, append the image axis at the end
        tensor = np.tensordot(tensor, np.exp(1j * np.outer(dgrid.axis, y_axis)), axes=(0, 0))
    return tensor


def _far_result(data, image, coeff, name):
    if image.dim != data.geometry.dim:
        raise ValueError(f"image grid dimension {image.dim} does not match direction grid ({data.geometry.dim})")
    values = _cartesian_sum(data.geometry, coeff, image)
    return ReconstructionResult(
        image.with_values(values.real),
        {"indicator": name, "imag_residue": float(np.mean(np.abs(values.imag)))},
    )


def far_constant(dim):
    """Prefactor of the far indicator: 1/(2 pi^2), times (2 pi / i)^(1/2) in 2D."""
    c = 1.0 / (2.0 * math.pi**2)
    return c if dim == 3 else c * math.sqrt(2.0 * math.pi) * np.exp(-0.25j * math.pi)


def indicator_far(data, image, dim):
    """Re sum_x c dV |x|^((3-d)/2) exp(i x.y) F[p_inf(xhat, .)](|x|)."""
    _require(data.excitation, VELOCITY, "indicator_far")
    if data.geometry.dim != dim:
        raise ValueError(f"indicator_far(dim={dim}) got {data.geometry.dim}D directions")
    spectra = _far_spectra(data)
    dgrid = data.geometry
    coeff = far_constant(dim) * dgrid.cell_volume * dgrid.norms ** ((3 - dim) / 2) * spectra
    return _far_result(data, image, coeff, f"far_{dim}d")


def indicator_disp_far(data, image):
    """Re sum_x (1/2 pi^2) dV (i / |x|) exp(i x.y) F[p_inf(xhat, .)](|x|), 3D displacement data."""
    _require(data.excitation, DISPLACEMENT, "indicator_disp_far")
    if data.geometry.dim != 3:
        raise ValueError("indicator_disp_far needs 3D directions")
    spectra = _far_spectra(data)
    dgrid = data.geometry
    coeff = dgrid.cell_volume * 1j / dgrid.norms * spectra / (2.0 * math.pi**2)
    return _far_result(data, image, coeff, "disp_far_3d")
