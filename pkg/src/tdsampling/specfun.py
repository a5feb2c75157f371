"""Bessel and Hankel functions of order 0 and 1, and the kernels built on them.

Cylindrical functions use the ascending power series for ``x <= SERIES_MAX``,
Miller's backward recurrence with Neumann sums for Y up to ``SPLIT``, and the
Hankel asymptotic expansion above it.  The power series alone would reach
``SPLIT`` but cancels to ~1e-11 there, which is enough to spoil finite-difference
derivatives; the recurrence carries no cancellation.
"""

import math

import numpy as np

from .errors import DomainError, GeometryError

SERIES_MAX = 4.0
SPLIT = 15.0
_N_MILLER = 64
EULER_GAMMA = 0.57721566490153286061
_TWO_OVER_PI = 2.0 / math.pi

_N_SERIES = 48
_N_ASYMP = 15


def _series_tables():
    m = np.arange(_N_SERIES, dtype=float)
    fact = np.array([math.factorial(int(i)) for i in m], dtype=float)
    sign = (-1.0) ** m
    # J0 = sum (-1)^m z^m / (m!)^2,  z = x^2/4
    j0 = sign / fact**2
    # J1 = (x/2) sum (-1)^m z^m / (m! (m+1)!)
    fact1 = np.array([math.factorial(int(i) + 1) for i in m], dtype=float)
    j1 = sign / (fact * fact1)
    harmonic = np.concatenate([[0.0], np.cumsum(1.0 / np.arange(1, _N_SERIES))])
    # Y0 correction: sum_{m>=1} (-1)^{m+1} H_m z^m / (m!)^2
    y0 = -sign * harmonic / fact**2
    # Y1 correction: sum_k (-1)^k [psi(k+1) + psi(k+2)] (x/2)^{2k+1} / (k!(k+1)!)
    psi1 = harmonic - EULER_GAMMA
    psi2 = np.concatenate([harmonic[1:], [harmonic[-1] + 1.0 / _N_SERIES]]) - EULER_GAMMA
    y1 = sign * (psi1 + psi2) / (fact * fact1)
    return j0, j1, y0, y1


def _asymp_tables(nu):
    mu = 4.0 * nu * nu
    a = [1.0]
    for k in range(1, 2 * _N_ASYMP + 2):
        a.append(a[-1] * (mu - (2 * k - 1) ** 2) / (k * 8.0))
    a = np.array(a)
    p = np.array([(-1) ** k * a[2 * k] for k in range(_N_ASYMP)])
    q = np.array([(-1) ** k * a[2 * k + 1] for k in range(_N_ASYMP)])
    return p, q


_J0S, _J1S, _Y0S, _Y1S = _series_tables()
_ASYMP = {0: _asymp_tables(0), 1: _asymp_tables(1)}


def _horner(coef, z):
    out = np.full_like(z, coef[-1])
    for c in coef[-2::-1]:
        out = out * z + c
    return out


def _asymptotic(order, x):
    p_coef, q_coef = _ASYMP[order]
    w = 1.0 / (x * x)
    p = _horner(p_coef, w)
    q = _horner(q_coef, w) / x
    omega = x - (0.5 * order + 0.25) * math.pi
    amp = np.sqrt(_TWO_OVER_PI / x)
    c, s = np.cos(omega), np.sin(omega)
    return amp * (p * c - q * s), amp * (p * s + q * c)


def _miller(x):
    """(J0, J1, Y0, Y1) for 4 <= x <= 15; J_64 is below 1e-30 there, so the start is exact."""
    n_top = _N_MILLER
    b = np.zeros((n_top + 2, x.size))
    b[n_top] = 1e-30
    for n in range(n_top, 0, -1):
        b[n - 1] = 2 * n / x * b[n] - b[n + 1]
    b /= b[0] + 2 * b[2 : n_top + 1 : 2].sum(axis=0)
    k = np.arange(1, n_top // 2 + 1)[:, None]
    alt = (-1.0) ** k
    log_term = np.log(0.5 * x) + EULER_GAMMA
    y0 = _TWO_OVER_PI * (log_term * b[0] - 2 * (alt * b[2 : n_top + 2 : 2] / k).sum(axis=0))
    y1 = _TWO_OVER_PI * (
        log_term * b[1] - b[0] / x + (alt * (b[1 : n_top + 1 : 2] - b[3 : n_top + 3 : 2]) / k).sum(axis=0)
    )
    return b[0], b[1], y0, y1


def _as_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _finish(out, scalar):
    return out[()] if scalar else out


def _cylinder(order, x, want_y):
    """Return (J_n, Y_n) on |x|; Y is None when not requested."""
    ax = np.abs(x)
    j = np.empty_like(ax)
    y = np.empty_like(ax) if want_y else None
    small = ax <= SERIES_MAX
    mid = ~small & (ax <= SPLIT)
    if small.any():
        xs = ax[small]
        z = 0.25 * xs * xs
        j0 = _horner(_J0S, z)
        j1 = 0.5 * xs * _horner(_J1S, z)
        j[small] = j0 if order == 0 else j1
        if want_y:
            with np.errstate(divide="ignore"):
                log_term = np.log(0.5 * xs)
                if order == 0:
                    y[small] = _TWO_OVER_PI * ((log_term + EULER_GAMMA) * j0 + _horner(_Y0S, z))
                else:
                    y[small] = (
                        -_TWO_OVER_PI / xs
                        + _TWO_OVER_PI * log_term * j1
                        - (0.5 * xs / math.pi) * _horner(_Y1S, z)
                    )
    if mid.any():
        j0, j1, y0, y1 = _miller(ax[mid])
        j[mid] = j0 if order == 0 else j1
        if want_y:
            y[mid] = y0 if order == 0 else y1
    big = ax > SPLIT
    if big.any():
        jb, yb = _asymptotic(order, ax[big])
        j[big] = jb
        if want_y:
            y[big] = yb
    return j, y


def bessel_j0(x):
    arr, scalar = _as_array(x)
    j, _ = _cylinder(0, arr, False)
    return _finish(j, scalar)


def bessel_j1(x):
    arr, scalar = _as_array(x)
    j, _ = _cylinder(1, arr, False)
    j = np.where(arr < 0, -j, j)
    return _finish(j, scalar)


def _require_positive(arr, name):
    if np.any(~(arr > 0)):
        raise DomainError(f"{name} requires x > 0")


def bessel_y0(x):
    arr, scalar = _as_array(x)
    _require_positive(arr, "bessel_y0")
    _, y = _cylinder(0, arr, True)
    return _finish(y, scalar)


def bessel_y1(x):
    arr, scalar = _as_array(x)
    _require_positive(arr, "bessel_y1")
    _, y = _cylinder(1, arr, True)
    return _finish(y, scalar)


def hankel1(order, x):
    """Hankel function of the first kind, H_n = J_n + i Y_n, for n in {0, 1}."""
    if order not in (0, 1):
        raise ValueError("only orders 0 and 1 are supported")
    arr, scalar = _as_array(x)
    _require_positive(arr, "hankel1")
    j, y = _cylinder(order, arr, True)
    return _finish(j + 1j * y, scalar)


def sph_bessel_j0(x):
    arr, scalar = _as_array(x)
    out = np.empty_like(arr)
    small = np.abs(arr) < 1e-3
    xs = arr[small]
    z = xs * xs
    out[small] = 1.0 - z / 6.0 + z * z / 120.0 - z**3 / 5040.0
    xb = arr[~small]
    out[~small] = np.sin(xb) / xb
    return _finish(out, scalar)


def sph_bessel_j1(x):
    arr, scalar = _as_array(x)
    out = np.empty_like(arr)
    small = np.abs(arr) < 1e-2
    xs = arr[small]
    z = xs * xs
    out[small] = xs / 3.0 * (1.0 - z / 10.0 + z * z / 280.0 - z**3 / 15120.0)
    xb = arr[~small]
    out[~small] = np.sin(xb) / xb**2 - np.cos(xb) / xb
    return _finish(out, scalar)


def sph_hankel1_0(x):
    arr, scalar = _as_array(x)
    _require_positive(arr, "sph_hankel1_0")
    return _finish(-1j * np.exp(1j * arr) / arr, scalar)


def sph_hankel1_1(x):
    arr, scalar = _as_array(x)
    _require_positive(arr, "sph_hankel1_1")
    return _finish(-(1.0 + 1j / arr) * np.exp(1j * arr) / arr, scalar)


def _order_one(dim, family):
    if dim == 2:
        return (lambda z: hankel1(1, z)) if family == "hankel" else bessel_j1
    if dim == 3:
        return sph_hankel1_1 if family == "hankel" else sph_bessel_j1
    raise ValueError(f"dim must be 2 or 3, got {dim}")


def kernel_normal_derivative(dim, x, nu, y, k, family="hankel", eps=0.0):
    """Normal derivative d/dnu_x of K0(k|x - y|) for the requested family.

    ``x``/``nu`` are (..., dim) sensor positions and unit normals, ``y`` is
    (..., dim) and broadcast against them.  Uses dK0/dz = -K1 for all four
    families (J0, H0 in 2D; j0, h0 in 3D).
    """
    if family not in ("hankel", "bessel"):
        raise ValueError(f"unknown kernel family {family!r}")
    diff = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    r = np.sqrt(np.sum(diff * diff, axis=-1))
    if np.any(r <= eps):
        raise GeometryError("kernel evaluated with |x - y| at or below the geometric tolerance")
    cos_term = np.sum(diff * np.asarray(nu, dtype=float), axis=-1) / r
    k1 = _order_one(dim, family)(k * r)
    return -k * k1 * cos_term
