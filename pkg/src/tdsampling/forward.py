"""Exact-solution synthesis of near- and far-field time traces.

The fundamental solutions are never discretized as distributions.  In 3D the
near field is t times the spherical mean of the source, the far field is a
plane integral (Radon transform); in 2D the near field is a weighted disk
integral and the far field an Abel-type integral of the line Radon transform.
Displacement excitations are time derivatives of the velocity fields.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.interpolate import CubicSpline, RectBivariateSpline

from .errors import GeometryError
from .geometry import DirectionGrid, SensorArray

VELOCITY = "velocity"
DISPLACEMENT = "displacement"
OVERSAMPLE = 4


@dataclass(frozen=True)
class TimeAxis:
    t0: float
    dt: float
    n: int

    def __post_init__(self):
        if self.n < 2 or not self.dt > 0:
            raise ValueError("time axis needs n >= 2 and dt > 0")

    @classmethod
    def from_interval(cls, start, end, steps):
        """``steps`` intervals over [start, end], i.e. steps + 1 samples."""
        return cls(float(start), (end - start) / steps, int(steps) + 1)

    @property
    def times(self):
        return self.t0 + self.dt * np.arange(self.n)

    @property
    def t_end(self):
        return self.t0 + self.dt * (self.n - 1)


@dataclass(frozen=True)
class QuadratureParams:
    n_theta: int = 64
    n_phi: int = 64
    n_2d: int = 96
    # axial nodes for the slice integrals of axisymmetric indicator bodies
    n_axial: int = 512

    def doubled(self):
        return QuadratureParams(2 * self.n_theta, 2 * self.n_phi, 2 * self.n_2d, 2 * self.n_axial)


@dataclass
class TimeSeriesData:
    axis: TimeAxis
    channels: np.ndarray
    geometry: object
    excitation: str = VELOCITY

    def __post_init__(self):
        self.channels = np.asarray(self.channels, dtype=float)
        if self.channels.shape != (_channel_count(self.geometry), self.axis.n):
            raise ValueError(
                f"channel matrix {self.channels.shape} inconsistent with geometry "
                f"({_channel_count(self.geometry)} channels) and axis ({self.axis.n} samples)"
            )

    def with_channels(self, channels):
        return TimeSeriesData(self.axis, channels, self.geometry, self.excitation)


def _channel_count(geometry):
    if isinstance(geometry, (SensorArray, DirectionGrid)):
        return geometry.count
    return len(np.atleast_2d(geometry))


def _directions(geometry):
    if isinstance(geometry, DirectionGrid):
        return geometry.directions
    dirs = np.atleast_2d(np.asarray(geometry, dtype=float))
    return dirs / np.linalg.norm(dirs, axis=1, keepdims=True)


def _orthonormal_frame(axis):
    """Two unit vectors completing ``axis`` (3D) to an orthonormal basis."""
    helper = np.array([1.0, 0.0, 0.0]) if abs(axis[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(axis, helper)
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(axis, e1)


def _check_sensors(spec, sensors, allow_interior):
    if sensors.dim != spec.dim:
        raise ValueError(f"sensor dimension {sensors.dim} does not match source dimension {spec.dim}")
    dist = np.linalg.norm(sensors.points - spec.center, axis=1)
    # touching the support ball is allowed (Near2D places sensors on |x| = 1)
    if not allow_interior and np.any(dist < spec.support_radius * (1.0 - 1e-12)):
        bad = int(np.argmax(dist < spec.support_radius * (1.0 - 1e-12)))
        raise GeometryError(f"sensor {bad} lies inside the source support ball")
    return dist


def _eval(spec, pts, terms=None):
    flat = pts.reshape(-1, pts.shape[-1])
    out = np.zeros(len(flat))
    for term in spec.terms if terms is None else terms:
        out += term.evaluate(flat)
    return out.reshape(pts.shape[:-1])


def _split_terms(spec):
    smooth = [t for t in spec.terms if not getattr(t, "is_indicator", False)]
    sharp = [t for t in spec.terms if getattr(t, "is_indicator", False)]
    return smooth, sharp


def _ray_measure(contains, point_at, u_lo, u_hi, n, moment, iterations=40):
    """Measure of {u in [u_lo, u_hi] : point_at(ray, u) inside} for each ray,
    with density u**moment (0 or 1).

    The inside set is sampled at n uniform nodes; every sign change is
    located by bisection, so the result is exact up to features thinner than
    the node spacing.  Used for indicator sources, whose jumps would otherwise
    limit Gauss rules to first-order convergence.
    """
    prim = (lambda v: v) if moment == 0 else (lambda v: 0.5 * v * v)
    frac = np.linspace(0.0, 1.0, n)
    u = u_lo[:, None] + (u_hi - u_lo)[:, None] * frac
    rays = np.repeat(np.arange(len(u_lo)), n)
    inside = contains(point_at(rays, u.ravel())).reshape(u.shape)
    both = inside[:, :-1] & inside[:, 1:]
    total = np.sum(np.where(both, prim(u[:, 1:]) - prim(u[:, :-1]), 0.0), axis=1)
    ri, ji = np.nonzero(inside[:, :-1] != inside[:, 1:])
    if ri.size:
        left_in = inside[ri, ji]
        lo, hi = u[ri, ji].copy(), u[ri, ji + 1].copy()
        for _ in range(iterations):
            mid = 0.5 * (lo + hi)
            same = contains(point_at(ri, mid)) == left_in
            lo = np.where(same, mid, lo)
            hi = np.where(same, hi, mid)
        c = 0.5 * (lo + hi)
        part = np.where(left_in, prim(c) - prim(u[ri, ji]), prim(u[ri, ji + 1]) - prim(c))
        np.add.at(total, ri, part)
    return total


def _is_axisymmetric(term):
    return hasattr(term, "cross_section_radii") and getattr(term, "symmetry_axis", None) is not None


def _slice_sum(radii, measure_of_disk):
    """Measure of a slice from its boundary radii r_1 < ... < r_n.

    A point at radius r is inside when an odd number of r_i exceed it, so the
    slice measure is the alternating sum of disk measures, largest radius with
    a plus sign.
    """
    valid = ~np.isnan(radii)
    n_valid = valid.sum(axis=-1, keepdims=True)
    pos = np.arange(radii.shape[-1])
    sign = np.where((n_valid - 1 - pos) % 2 == 0, 1.0, -1.0)
    disk = measure_of_disk(np.where(valid, radii, 0.0))
    return np.sum(np.where(valid, sign * disk, 0.0), axis=-1)


def _gauss_nodes(lo, hi, n):
    gl, gw = np.polynomial.legendre.leggauss(n)
    half = 0.5 * np.maximum(hi - lo, 0.0)
    return lo[..., None] + half[..., None] * (gl + 1.0), half[..., None] * gw


def _slice_sphere_measure(term, x, t, n):
    """Area of {|y - x| = t} inside an axisymmetric body, divided by t.

    Slices perpendicular to the body axis cut the sphere in circles; with
    dsigma = t dz dpsi only the arc angle inside each slice is needed.
    """
    e = np.eye(3)[term.symmetry_axis]
    rel = x - np.asarray(term.center, dtype=float)
    xz = rel @ e
    c = np.linalg.norm(rel - xz * e)
    z_lo, z_hi = term.axial_range
    z, w = _gauss_nodes(np.maximum(xz - t, z_lo), np.minimum(xz + t, z_hi), n)
    rho = np.sqrt(np.maximum(t[:, None] ** 2 - (z - xz) ** 2, 0.0))
    radii = term.cross_section_radii(z.ravel()).reshape(z.shape + (-1,))

    def arc(r):
        num = r * r - c * c - rho[..., None] ** 2
        den = 2.0 * c * rho[..., None]
        with np.errstate(divide="ignore", invalid="ignore"):
            q = np.where(den > 0, num / np.where(den > 0, den, 1.0), np.where(num >= 0, 1.0, -1.0))
        return 2.0 * (np.pi - np.arccos(np.clip(q, -1.0, 1.0)))

    return np.sum(_slice_sum(radii, arc) * w, axis=-1)


def _slice_plane_area(term, xhat, s, n):
    """Area of {xhat . y = s} inside an axisymmetric body.

    Lines of constant axial coordinate in the plane are perpendicular to the
    axis, at signed distance c from it, so each slice contributes chords
    2 sqrt(r^2 - c^2).  Integrates over z when the plane is steep relative to
    the axis and over c when it is nearly perpendicular to it.
    """
    e = np.eye(3)[term.symmetry_axis]
    cos_a = float(xhat @ e)
    sin_a = math.sqrt(max(1.0 - cos_a * cos_a, 0.0))
    s_rel = np.asarray(s, dtype=float) - xhat @ np.asarray(term.center, dtype=float)
    z_lo, z_hi = term.axial_range
    r_max = term.bounding_radius

    def chord(c):
        return lambda r: 2.0 * np.sqrt(np.maximum(r * r - c[..., None] ** 2, 0.0))

    if sin_a >= abs(cos_a):
        lo, hi = np.full(s_rel.shape, z_lo), np.full(s_rel.shape, z_hi)
        if abs(cos_a) > 0:
            a, b = (s_rel - r_max * sin_a) / cos_a, (s_rel + r_max * sin_a) / cos_a
            lo, hi = np.maximum(lo, np.minimum(a, b)), np.minimum(hi, np.maximum(a, b))
        z, w = _gauss_nodes(lo, hi, n)
        c = (s_rel[:, None] - z * cos_a) / sin_a
        radii = term.cross_section_radii(z.ravel()).reshape(z.shape + (-1,))
        return np.sum(_slice_sum(radii, chord(c)) * w, axis=-1) / sin_a
    lo, hi = np.full(s_rel.shape, -r_max), np.full(s_rel.shape, r_max)
    if sin_a > 0:
        a, b = (s_rel - z_lo * cos_a) / sin_a, (s_rel - z_hi * cos_a) / sin_a
        lo, hi = np.maximum(lo, np.minimum(a, b)), np.minimum(hi, np.maximum(a, b))
    c, w = _gauss_nodes(lo, hi, n)
    z = (s_rel[:, None] - c * sin_a) / cos_a
    radii = term.cross_section_radii(z.ravel()).reshape(z.shape + (-1,))
    return np.sum(_slice_sum(radii, chord(c)) * w, axis=-1) / abs(cos_a)


def _sphere_integrals_3d(spec, x, d, times, quad):
    """(1/(4 pi t)) * integral of S over the sphere |y - x| = t, for each t.

    Spherical coordinates about the axis from x to the support centre; only
    the cap mu >= mu_min can meet the support ball.  Smooth terms use Gauss
    nodes in mu, indicator terms the exact ray measure in mu.
    """
    a = spec.support_radius
    out = np.zeros(len(times))
    if d > 1e-14:
        axis = (spec.center - x) / d
    else:
        axis = np.array([0.0, 0.0, 1.0])
    e1, e2 = _orthonormal_frame(axis)
    phi = 2.0 * np.pi * np.arange(quad.n_phi) / quad.n_phi
    ring = np.cos(phi)[:, None] * e1 + np.sin(phi)[:, None] * e2  # (n_phi, 3)
    idx = np.flatnonzero((times > max(d - a, 0.0)) & (times < d + a))
    if idx.size == 0:
        return out
    t = times[idx]
    if d > 1e-14:
        mu_min = np.clip((t * t + d * d - a * a) / (2.0 * t * d), -1.0, 1.0)
    else:
        mu_min = np.full_like(t, -1.0)
    d_phi = 2.0 * np.pi / quad.n_phi
    integral = np.zeros(len(t))
    smooth, sharp = _split_terms(spec)
    if smooth:
        gl, gw = np.polynomial.legendre.leggauss(quad.n_theta)
        half = 0.5 * (1.0 - mu_min)
        mu = 1.0 - half[:, None] * (1.0 - gl[None, :])  # [-1, 1] -> [mu_min, 1]
        w_mu = half[:, None] * gw[None, :]
        sin_t = np.sqrt(np.maximum(1.0 - mu * mu, 0.0))
        for start in range(0, len(t), 16):
            sl = slice(start, start + 16)
            dirs = mu[sl, :, None, None] * axis + sin_t[sl, :, None, None] * ring[None, None]
            pts = x + t[sl, None, None, None] * dirs
            integral[sl] = np.einsum("tij,ti->t", _eval(spec, pts, smooth), w_mu[sl]) * d_phi
    for term in sharp:
        if _is_axisymmetric(term):
            integral += term.level * _slice_sphere_measure(term, x, t, quad.n_axial) / t
            continue
        t_ray = np.repeat(t, quad.n_phi)
        ring_ray = np.tile(ring, (len(t), 1))

        def point_at(rays, mu):
            sin_m = np.sqrt(np.maximum(1.0 - mu * mu, 0.0))
            return x + t_ray[rays, None] * (mu[:, None] * axis + sin_m[:, None] * ring_ray[rays])

        lo = np.repeat(mu_min, quad.n_phi)
        meas = _ray_measure(term.contains, point_at, lo, np.ones_like(lo), quad.n_theta + 1, 0)
        integral += term.level * meas.reshape(len(t), quad.n_phi).sum(axis=1) * d_phi
    out[idx] = t * integral / (4.0 * np.pi)
    return out


def near_field_3d(spec, sensors, axis, quad=QuadratureParams(), allow_interior=False):
    """Velocity-excitation near field p(x, t) = t * (spherical mean of S)."""
    dist = _check_sensors(spec, sensors, allow_interior)
    times = axis.times
    channels = np.zeros((sensors.count, axis.n))
    for i, x in enumerate(sensors.points):
        channels[i] = _sphere_integrals_3d(spec, x, dist[i], times, quad)
    return TimeSeriesData(axis, channels, sensors, VELOCITY)


def _disk_integrals_2d(spec, x, d, times, quad):
    """(1/2pi) integral over |y - x| < t of S(y) / sqrt(t^2 - |y - x|^2).

    The angular integral f(rho) = int S(x + rho e_theta) dtheta depends on one
    variable only; it is tabulated once per sensor and splined, and the radial
    integral uses rho = t sin(psi), which removes the wavefront singularity.
    """
    a = spec.support_radius
    out = np.zeros(len(times))
    rho_lo = max(d - a, 0.0)
    rho_hi = d + a
    if d >= a:
        theta_c = math.atan2(*(spec.center - x)[::-1])
        half_width = math.asin(min(1.0, a / d))
    else:
        theta_c, half_width = 0.0, math.pi
    gl, gw = np.polynomial.legendre.leggauss(quad.n_2d)
    theta = theta_c + half_width * gl
    ring = np.column_stack([np.cos(theta), np.sin(theta)])
    rho_nodes = np.linspace(rho_lo, rho_hi, 8 * quad.n_2d + 1)
    pts = x + rho_nodes[:, None, None] * ring[None]
    profile = _eval(spec, pts) @ (half_width * gw)
    spline = CubicSpline(rho_nodes, profile)
    idx = np.flatnonzero(times > rho_lo)
    if idx.size == 0:
        return out
    t = times[idx]
    psi_lo = np.arcsin(np.clip(rho_lo / t, 0.0, 1.0))
    psi_hi = np.arcsin(np.clip(np.minimum(t, rho_hi) / t, 0.0, 1.0))
    half = 0.5 * (psi_hi - psi_lo)
    psi = psi_lo[:, None] + half[:, None] * (gl[None, :] + 1.0)
    rho = t[:, None] * np.sin(psi)
    integral = np.sum(spline(np.clip(rho, rho_lo, rho_hi)) * rho * gw[None, :], axis=1) * half
    out[idx] = integral / (2.0 * np.pi)
    return out


def near_field_2d(spec, sensors, axis, quad=QuadratureParams(), allow_interior=False):
    """Velocity-excitation near field in 2D.

    Polar coordinates about the sensor with rho = t sin(psi) remove the inverse
    square-root singularity at the wavefront.
    """
    dist = _check_sensors(spec, sensors, allow_interior)
    times = axis.times
    channels = np.zeros((sensors.count, axis.n))
    for i, x in enumerate(sensors.points):
        channels[i] = _disk_integrals_2d(spec, x, dist[i], times, quad)
    return TimeSeriesData(axis, channels, sensors, VELOCITY)


def _oversampled(axis):
    h = axis.dt / OVERSAMPLE
    return TimeAxis(axis.t0 - h, h, OVERSAMPLE * (axis.n - 1) + 3)


def _central_difference(fine, axis):
    """d/dt at the coarse samples from values on the oversampled axis."""
    h = axis.dt / OVERSAMPLE
    centre = 1 + OVERSAMPLE * np.arange(axis.n)
    return (fine[:, centre + 1] - fine[:, centre - 1]) / (2.0 * h)


def near_field_displacement_3d(spec, sensors, axis, quad=QuadratureParams(), allow_interior=False):
    """Displacement-excitation near field: time derivative of the velocity field."""
    if axis.dt >= spec.support_radius / 10.0:
        raise ValueError("displacement synthesis needs dt < support_radius / 10")
    fine = near_field_3d(spec, sensors, _oversampled(axis), quad, allow_interior)
    return TimeSeriesData(axis, _central_difference(fine.channels, axis), sensors, DISPLACEMENT)


# --- far field --------------------------------------------------------------


def _plane_section_quadrature(terms, center, radius, directions, s, quad):
    """Integral of the terms over {xhat . y = s} within the ball B(center, radius).

    directions (M, 3), s (M, T) -> (M, T).  Polar coordinates in the plane:
    Gauss nodes in rho for smooth terms, exact ray measure for indicators.
    """
    gl, gw = np.polynomial.legendre.leggauss(quad.n_theta)
    phi = 2.0 * np.pi * np.arange(quad.n_phi) / quad.n_phi
    d_phi = 2.0 * np.pi / quad.n_phi
    smooth = [t for t in terms if not getattr(t, "is_indicator", False)]
    sharp = [t for t in terms if getattr(t, "is_indicator", False)]
    out = np.zeros(s.shape)
    for m, xhat in enumerate(directions):
        e1, e2 = _orthonormal_frame(xhat)
        ring = np.cos(phi)[:, None] * e1 + np.sin(phi)[:, None] * e2
        offset = s[m] - xhat @ center
        h2 = radius**2 - offset**2
        live = np.flatnonzero(h2 > 0)
        if live.size == 0:
            continue
        h = np.sqrt(h2[live])
        foot = center + offset[live, None] * xhat
        acc = np.zeros(live.size)
        if smooth:
            rho = 0.5 * h[:, None] * (gl[None, :] + 1.0)
            w = 0.5 * h[:, None] * gw[None, :] * rho * d_phi
            pts = foot[:, None, None, :] + rho[:, :, None, None] * ring[None, None]
            vals = np.zeros(pts.shape[:-1])
            for term in smooth:
                vals += term.evaluate(pts.reshape(-1, 3)).reshape(vals.shape)
            acc += np.einsum("tij,ti->t", vals, w)
        for term in sharp:
            if _is_axisymmetric(term):
                acc += term.level * _slice_plane_area(term, xhat, s[m, live], quad.n_axial)
                continue
            foot_ray = np.repeat(foot, quad.n_phi, axis=0)
            ring_ray = np.tile(ring, (live.size, 1))
            hi = np.repeat(h, quad.n_phi)

            def point_at(rays, rho):
                return foot_ray[rays] + rho[:, None] * ring_ray[rays]

            meas = _ray_measure(term.contains, point_at, np.zeros_like(hi), hi, quad.n_theta + 1, 1)
            acc += term.level * meas.reshape(live.size, quad.n_phi).sum(axis=1) * d_phi
        out[m, live] = acc
    return out


def _chord_quadrature(terms, center, radius, directions, s, quad):
    """Integral over the line {xhat . y = s} within the disk B(center, radius) (2D)."""
    gl, gw = np.polynomial.legendre.leggauss(quad.n_2d)
    smooth = [t for t in terms if not getattr(t, "is_indicator", False)]
    sharp = [t for t in terms if getattr(t, "is_indicator", False)]
    out = np.zeros(s.shape)
    rows = max(1, 2_000_000 // (s.shape[1] * quad.n_2d))
    for start in range(0, len(directions), rows):
        sl = slice(start, start + rows)
        dirs = directions[sl]
        perp = np.column_stack([-dirs[:, 1], dirs[:, 0]])
        offset = s[sl] - (dirs @ center)[:, None]
        h = np.sqrt(np.maximum(radius**2 - offset**2, 0.0))
        foot = center + offset[..., None] * dirs[:, None, :]
        if smooth:
            r = h[..., None] * gl
            pts = foot[:, :, None, :] + r[..., None] * perp[:, None, None, :]
            vals = np.zeros(pts.shape[:-1])
            for term in smooth:
                vals += term.evaluate(pts.reshape(-1, 2)).reshape(vals.shape)
            out[sl] += np.einsum("mtk,k->mt", vals, gw) * h
        if sharp:
            foot_ray = foot.reshape(-1, 2)
            perp_ray = np.repeat(perp, s.shape[1], axis=0)
            hr = h.ravel()

            def point_at(rays, r):
                return foot_ray[rays] + r[:, None] * perp_ray[rays]

            for term in sharp:
                meas = _ray_measure(term.contains, point_at, -hr, hr, quad.n_2d + 1, 0)
                out[sl] += term.level * meas.reshape(h.shape)
    return out


class _AxisymmetricRadonTable:
    """Radon transform of an axisymmetric body tabulated in (tilt, offset).

    For a body symmetric about a line through ``center`` with direction e_axis,
    R(xhat, s) depends only on the tilt angle acos(xhat . e_axis) and on
    s - xhat . center.  Each table entry is a plane-section quadrature.
    """

    def __init__(self, term, quad, n_tilt=241, n_offset=801):
        self.center = np.asarray(term.center, dtype=float)
        self.axis_vec = np.eye(3)[term.symmetry_axis]
        self.radius = term.bounding_radius * (1.0 + 1e-9)
        tilt = np.linspace(0.0, math.pi, n_tilt)
        offsets = np.linspace(-self.radius, self.radius, n_offset)
        e1, _ = _orthonormal_frame(self.axis_vec)
        dirs = np.cos(tilt)[:, None] * self.axis_vec + np.sin(tilt)[:, None] * e1
        s = offsets[None, :] + (dirs @ self.center)[:, None]
        values = _plane_section_quadrature([term], self.center, self.radius, dirs, s, quad)
        self.spline = RectBivariateSpline(tilt, offsets, values, kx=3, ky=3)

    def __call__(self, directions, s):
        tilt = np.arccos(np.clip(directions @ self.axis_vec, -1.0, 1.0))
        offset = s - (directions @ self.center)[:, None]
        tilt_b = np.broadcast_to(tilt[:, None], offset.shape)
        out = self.spline.ev(tilt_b.ravel(), offset.ravel()).reshape(offset.shape)
        out[np.abs(offset) >= self.radius] = 0.0
        return out


_TABLES = {}


def _radon_table(term, quad):
    key = (id(term), quad)
    hit = _TABLES.get(key)
    if hit is None or hit[0] is not term:
        if len(_TABLES) > 8:
            _TABLES.clear()
        hit = _TABLES[key] = (term, _AxisymmetricRadonTable(term, quad))
    return hit[1]


def _term_radon(term, spec, directions, s, quad, method):
    """Integral of one term over the hyperplanes {xhat . y = s}."""
    if method == "auto" and term.radon is not None:
        return term.radon(directions, s)
    if spec.dim == 2:
        return _chord_quadrature([term], spec.center, spec.support_radius, directions, s, quad)
    symmetric = getattr(term, "symmetry_axis", None) is not None
    if method == "table" or (method == "auto" and symmetric and len(directions) > 200):
        return _radon_table(term, quad)(directions, s)
    return _plane_section_quadrature([term], spec.center, spec.support_radius, directions, s, quad)


def radon_transform(spec, directions, s, quad=QuadratureParams(), method="auto"):
    """Sum over terms of the hyperplane integrals; ``method`` 'auto' uses
    closed forms where available, 'quadrature' forces numerical integration."""
    if method not in ("auto", "quadrature", "table"):
        raise ValueError(f"unknown method {method!r}")
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    s = np.asarray(s, dtype=float)
    out = np.zeros(s.shape)
    for term in spec.terms:
        out += _term_radon(term, spec, directions, s, quad, method)
    return out


def far_field_samples(spec, directions, times, quad=QuadratureParams(), method="auto"):
    """Velocity far-field pattern p_inf(xhat, t) at per-direction sample times.

    directions (M, d); times (T,) shared or (M, T) per direction.
    """
    dirs = np.atleast_2d(np.asarray(directions, dtype=float))
    if dirs.shape[1] != spec.dim:
        raise ValueError(f"direction dimension {dirs.shape[1]} does not match source dimension {spec.dim}")
    t = np.broadcast_to(np.asarray(times, dtype=float), (len(dirs), np.shape(times)[-1]))
    if spec.dim == 3:
        return radon_transform(spec, dirs, -t, quad, method) / (4.0 * math.pi)
    # 2D: (1/(sqrt2 pi)) int_0^inf R(xhat, v^2 - t) dv over v^2 - t within the support projection
    proj = dirs @ spec.center
    s_lo = (proj - spec.support_radius)[:, None]
    s_hi = (proj + spec.support_radius)[:, None]
    v_lo = np.sqrt(np.maximum(t + s_lo, 0.0))
    v_hi = np.sqrt(np.maximum(t + s_hi, 0.0))
    gl, gw = np.polynomial.legendre.leggauss(quad.n_2d)
    half = 0.5 * (v_hi - v_lo)
    out = np.zeros(t.shape)
    for g, w in zip(gl, gw):
        v = v_lo + half * (g + 1.0)
        out += w * half * radon_transform(spec, dirs, v * v - t, quad, method)
    return out / (math.sqrt(2.0) * math.pi)


def _far(spec, directions, axis, quad, method, chunk=4096):
    dirs = _directions(directions)
    channels = np.empty((len(dirs), axis.n))
    for start in range(0, len(dirs), chunk):
        sl = slice(start, start + chunk)
        channels[sl] = far_field_samples(spec, dirs[sl], axis.times, quad, method)
    return channels


def far_field_3d(spec, directions, axis, quad=QuadratureParams(), method="auto"):
    if spec.dim != 3:
        raise ValueError("far_field_3d needs a 3D source")
    return TimeSeriesData(axis, _far(spec, directions, axis, quad, method), directions, VELOCITY)


def far_field_2d(spec, directions, axis, quad=QuadratureParams(), method="auto"):
    if spec.dim != 2:
        raise ValueError("far_field_2d needs a 2D source")
    return TimeSeriesData(axis, _far(spec, directions, axis, quad, method), directions, VELOCITY)


def far_field_displacement_3d(spec, directions, axis, quad=QuadratureParams(), method="auto"):
    """Displacement far field: time derivative of the velocity far field."""
    if spec.dim != 3:
        raise ValueError("far_field_displacement_3d needs a 3D source")
    fine = _far(spec, directions, _oversampled(axis), quad, method)
    return TimeSeriesData(axis, _central_difference(fine, axis), directions, DISPLACEMENT)
