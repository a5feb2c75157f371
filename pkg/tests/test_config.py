import pytest
import yaml

from tdsampling.config import FAR2D_DIRECTION_GRIDS, PRESETS, build_config, dump_config, load_config, preset_config
from tdsampling.errors import ConfigError
from tdsampling.sources import AxisymmetricCurveIndicator, BallIndicator, GaussianTerm, PolyGaussianTerm, RadialStarIndicator


def test_near2d_fields():
    c = preset_config("near2d")
    assert (c.dimension, c.excitation, c.indicator) == (2, "velocity", "near_freq")
    assert (c.sensors.count, c.sensors.radius, c.sensors.layout) == (80, 1.0, "circle")
    assert (c.time.start, c.time.end, c.time.steps) == (0.0, 10.0, 1000)
    assert (c.k_axis.k_max, c.k_axis.steps) == (30.0, 100)
    terms = c.source_spec().terms
    assert terms[0] == GaussianTerm(1.1, (0.01, 0.12), 30.0)
    assert terms[1] == PolyGaussianTerm(-100.0, 20.0, (0.0, 0.0))
    assert c.source.support_radius == 1.0
    ax = c.time_axis()
    assert ax.n == 1001 and ax.dt == pytest.approx(0.01)


def test_near3d_fields():
    c = preset_config("near3d")
    assert (c.sensors.count, c.sensors.radius, c.sensors.layout) == (200, 3.0, "fibonacci")
    assert (c.time.start, c.time.end, c.time.steps) == (0.0, 6.0, 150)
    assert (c.k_axis.k_max, c.k_axis.steps) == (30.0, 100)
    assert c.indicator == "near_time_3d" and c.snr_db == 100.0
    (body,) = c.source_spec().terms
    assert isinstance(body, AxisymmetricCurveIndicator) and body.axis == 0 and body.level == 1.0


def test_far2d_fields():
    c = preset_config("far2d")
    assert (c.time.start, c.time.end, c.time.steps) == (-3.0, 18.0, 350)
    assert c.snr_db == -1.0 and c.indicator == "far"
    assert (c.image.bounds, c.image.n_per_axis) == ((-1.0, 1.0), 40)
    assert (c.directions.extent, c.directions.n_per_axis) == (15.0, 80)
    assert FAR2D_DIRECTION_GRIDS == ((8.0, 40), (10.0, 60), (15.0, 80))
    a, b = c.source_spec().terms
    assert a == GaussianTerm(0.5, (0.0, 0.2), 20.0) and b == GaussianTerm(-0.5, (0.0, -0.2), 20.0)


def test_far3d_fields():
    c = preset_config("far3d")
    assert (c.time.start, c.time.end, c.time.steps) == (-1.2, 1.2, 60)
    assert (c.image.bounds, c.image.n_per_axis) == ((-1.0, 1.0), 60)
    assert (c.directions.extent, c.directions.n_per_axis) == (20.0, 40)
    assert c.snr_db == -1.0
    ball, pear = c.source_spec().terms
    assert ball == BallIndicator((-0.4, -0.4, -0.4), 0.4, 1.0)
    assert (pear.center, pear.a, pear.b, pear.m, pear.level) == ((0.0, 0.0, 0.2), 0.4, 0.12, 3, 0.5)
    assert isinstance(pear, RadialStarIndicator)


def test_yaml_preset_with_overrides(tmp_path):
    p = tmp_path / "c.yaml"
    p.write_text("preset: near2d\nsnr_db: 5\nseed: 3\nimage:\n  n_per_axis: 21\n")
    c = load_config(p)
    assert (c.snr_db, c.seed, c.image.n_per_axis, c.image.bounds) == (5.0, 3, 21, (-0.7, 0.7))
    assert c.sensors.count == 80


def test_dump_round_trip(tmp_path):
    for name in PRESETS:
        c = preset_config(name)
        p = tmp_path / f"{name}.yaml"
        p.write_text(dump_config(c))
        assert load_config(p) == c


def test_unknown_key_rejected():
    with pytest.raises(ConfigError, match="sensors.colour"):
        build_config({"preset": "near2d", "sensors": {"colour": "red"}})
    with pytest.raises(ConfigError, match="bogus"):
        build_config({"preset": "far3d", "bogus": 1})


def test_custom_needs_dimension():
    raw = {k: v for k, v in PRESETS["near2d"].items() if k != "dimension"}
    with pytest.raises(ConfigError, match="dimension"):
        build_config({"preset": "custom", **raw})
    assert build_config({"preset": "custom", **PRESETS["near2d"]}).dimension == 2


def test_parse_error_line(tmp_path):
    p = tmp_path / "bad.yaml"
    p.write_text("preset: near2d\nsnr_db: [1, 2\nseed: 3\n")
    with pytest.raises(ConfigError, match="line"):
        load_config(p)


def test_cross_field_checks():
    with pytest.raises(ConfigError, match="directions"):
        preset_config("near2d", indicator="far")
    with pytest.raises(ConfigError, match="excitation"):
        preset_config("near3d", indicator="disp_near_time")
    with pytest.raises(ConfigError, match="three-dimensional"):
        preset_config("near2d", indicator="near_time_3d")
    with pytest.raises(ConfigError, match="unknown preset"):
        build_config({"preset": "near4d"})
    assert preset_config("near3d", indicator="disp_near_time", excitation="displacement").excitation == "displacement"


def test_filter_resolution():
    assert preset_config("near3d").filter_params().window is None
    assert preset_config("near3d", snr_db=10).filter_params().window == 5
    assert preset_config("near3d", filter_window=3).filter_params().window == 3
