import json
import math
from pathlib import Path

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tdsampling.errors import DomainError, GeometryError
from tdsampling.specfun import (
    bessel_j0,
    bessel_j1,
    bessel_y0,
    bessel_y1,
    hankel1,
    kernel_normal_derivative,
    sph_bessel_j0,
    sph_bessel_j1,
    sph_hankel1_0,
    sph_hankel1_1,
)

ORACLE = json.loads((Path(__file__).parent / "data" / "specfun_oracle.json").read_text())
FUNCS = {
    "bessel_j0": bessel_j0,
    "bessel_j1": bessel_j1,
    "bessel_y0": bessel_y0,
    "bessel_y1": bessel_y1,
    "sph_bessel_j0": sph_bessel_j0,
    "sph_bessel_j1": sph_bessel_j1,
}


def fd(f, x, h=1e-5):
    return (f(x + h) - f(x - h)) / (2 * h)


@pytest.mark.parametrize("name", sorted(FUNCS))
def test_oracle_table(name):
    x = np.array(ORACLE[name]["x"])
    ref = np.array(ORACLE[name]["value"])
    assert len(x) == 200
    err = np.abs(FUNCS[name](x) - ref)
    assert np.all(err <= 1e-10 * np.maximum(1.0, np.abs(ref)))


def test_values_at_origin():
    assert bessel_j0(0.0) == 1.0
    assert bessel_j1(0.0) == 0.0
    assert sph_bessel_j0(0.0) == 1.0


def test_first_zero_of_j0():
    lo, hi = 2.0, 3.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if bessel_j0(mid) > 0 else (lo, mid)
    assert abs(lo - 2.404825557695773) < 1e-9


def test_y0_singular_and_domain():
    assert bessel_y0(1e-8) < -10
    assert abs(bessel_y0(1.0) - 0.08825696421567696) < 1e-12
    for f in (bessel_y0, bessel_y1, sph_hankel1_0, sph_hankel1_1):
        with pytest.raises(DomainError):
            f(0.0)
    with pytest.raises(DomainError):
        hankel1(0, -1.0)


def test_wronskian_point():
    x = 3.7
    assert abs(bessel_j1(x) * bessel_y0(x) - bessel_j0(x) * bessel_y1(x) - 2 / (math.pi * x)) < 1e-9


@settings(max_examples=50, deadline=None)
@given(st.floats(0.01, 200.0))
def test_wronskian_random(x):
    w = bessel_j1(x) * bessel_y0(x) - bessel_j0(x) * bessel_y1(x)
    assert abs(w - 2 / (math.pi * x)) < 1e-9 * max(1.0, 2 / (math.pi * x))


def test_hankel_definition_and_asymptotics():
    x = np.linspace(0.1, 50, 37)
    assert np.array_equal(hankel1(0, x), bessel_j0(x) + 1j * bessel_y0(x))
    assert np.array_equal(hankel1(1, x), bessel_j1(x) + 1j * bessel_y1(x))
    assert abs(abs(hankel1(0, 100.0)) * math.sqrt(100.0) - math.sqrt(2 / math.pi)) < 0.01


@pytest.mark.parametrize("x", [1e-3, 0.5, 7.9, 15.0, 15.1, 42.0, 200.0])
@pytest.mark.parametrize("order", [0, 1])
def test_hankel_mpmath(order, x):
    mp.mp.dps = 40
    ref = complex(mp.hankel1(order, x))
    assert abs(hankel1(order, x) - ref) <= 1e-10 * abs(ref)


def test_spherical_closed_forms():
    assert abs(sph_hankel1_0(math.pi) - 1j / math.pi) < 1e-15
    x = 2.3
    assert abs(sph_hankel1_1(x) - (-(1 + 1j / x) * np.exp(1j * x) / x)) < 1e-15


def test_derivative_relations_named_points():
    assert abs(fd(lambda t: hankel1(0, t), 2.0) + hankel1(1, 2.0)) < 1e-6
    assert abs(fd(sph_hankel1_0, 1.3) + sph_hankel1_1(1.3)) < 1e-6


@pytest.mark.parametrize(
    "k0, k1",
    [
        (bessel_j0, bessel_j1),
        (bessel_y0, bessel_y1),
        (lambda x: hankel1(0, x), lambda x: hankel1(1, x)),
        (sph_bessel_j0, sph_bessel_j1),
        (sph_hankel1_0, sph_hankel1_1),
    ],
)
def test_derivative_relations_random(k0, k1):
    x = np.random.default_rng(3).uniform(0.1, 50, 100)
    assert np.max(np.abs(fd(k0, x) + k1(x))) < 1e-6


def test_kernel_normal_derivative():
    x, y = np.array([1.0, 0.0, 0.0]), np.zeros(3)
    assert kernel_normal_derivative(3, x, [0.0, 1.0, 0.0], y, 2.0) == 0.0
    assert abs(kernel_normal_derivative(3, x, [1.0, 0.0, 0.0], y, 1.0) + sph_hankel1_1(1.0)) < 1e-15
    # 2D bessel family against a finite difference along nu
    x2, y2, nu = np.array([0.8, -0.3]), np.array([0.1, 0.2]), np.array([0.6, 0.8])
    k = 3.0
    g = lambda h: bessel_j0(k * np.linalg.norm(x2 + h * nu - y2))
    assert abs(kernel_normal_derivative(2, x2, nu, y2, k, family="bessel") - fd(g, 0.0)) < 1e-6
    with pytest.raises(GeometryError):
        kernel_normal_derivative(2, y2, nu, y2, k, eps=1e-12)
