"""Experiment configuration: YAML schema, the four named presets, and resolution
of a config into library objects."""

from pathlib import Path
from typing import Annotated, Literal, Union

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .errors import ConfigError
from .forward import QuadratureParams, TimeAxis
from .geometry import make_circle_array, make_direction_grid, make_gauss_sphere_array, make_image_grid, make_sphere_array
from .indicators import FilterParams
from .sources import (
    AxisymmetricCurveIndicator,
    BallIndicator,
    GaussianTerm,
    PolyGaussianTerm,
    RadialStarIndicator,
    SourceSpec,
    peanut_curve,
)
from .spectral import WavenumberAxis


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class GaussianCfg(_Strict):
    type: Literal["gaussian"]
    amplitude: float
    center: tuple[float, ...]
    sharpness: float = Field(gt=0)

    def build(self):
        return GaussianTerm(self.amplitude, self.center, self.sharpness)


class PolyGaussianCfg(_Strict):
    type: Literal["poly_gaussian"]
    amplitude: float
    sharpness: float = Field(gt=0)
    center: tuple[float, float] = (0.0, 0.0)

    def build(self):
        return PolyGaussianTerm(self.amplitude, self.sharpness, self.center)


class BallCfg(_Strict):
    type: Literal["ball"]
    center: tuple[float, ...]
    radius: float = Field(gt=0)
    level: float = 1.0

    def build(self):
        return BallIndicator(self.center, self.radius, self.level)


class RadialStarCfg(_Strict):
    type: Literal["radial_star"]
    center: tuple[float, ...]
    a: float = Field(gt=0)
    b: float
    m: int = Field(ge=0)
    level: float = 1.0

    def build(self):
        return RadialStarIndicator(self.center, self.a, self.b, self.m, self.level)


class PeanutCfg(_Strict):
    """The Near3D body: revolution of (cos t + 0.65 cos 2t - 0.2, 1.5 sin t) about e1."""

    type: Literal["peanut"]
    center: tuple[float, float, float] = (0.0, 0.0, 0.0)
    level: float = 1.0

    def build(self):
        return AxisymmetricCurveIndicator(peanut_curve(), axis=0, center=self.center, level=self.level)


TermCfg = Annotated[
    Union[GaussianCfg, PolyGaussianCfg, BallCfg, RadialStarCfg, PeanutCfg], Field(discriminator="type")
]


class SourceCfg(_Strict):
    terms: list[TermCfg] = Field(min_length=1)
    support_radius: float = Field(gt=0)
    support_center: tuple[float, ...] | None = None


class SensorCfg(_Strict):
    count: int = Field(ge=1)
    radius: float = Field(gt=0)
    # circle in 2D; fibonacci or gauss (count = n_polar * 2 n_polar) in 3D
    layout: Literal["circle", "fibonacci", "gauss"] = "circle"


class DirectionCfg(_Strict):
    extent: float = Field(gt=0)
    n_per_axis: int = Field(ge=2)


class TimeCfg(_Strict):
    start: float
    end: float
    steps: int = Field(ge=1)

    @model_validator(mode="after")
    def _ordered(self):
        if not self.end > self.start:
            raise ValueError("time.end must exceed time.start")
        return self


class KCfg(_Strict):
    k_max: float = Field(gt=0)
    steps: int = Field(ge=1)


class ImageCfg(_Strict):
    bounds: tuple[float, float]
    n_per_axis: int = Field(ge=2)


class QuadCfg(_Strict):
    n_theta: int = Field(64, ge=2)
    n_phi: int = Field(64, ge=2)
    n_2d: int = Field(96, ge=2)
    n_axial: int = Field(512, ge=2)


INDICATORS = ("near_time_3d", "near_freq", "far", "disp_near_time", "disp_near_freq", "disp_far")
NEAR = {"near_time_3d", "near_freq", "disp_near_time", "disp_near_freq"}


class ExperimentConfig(_Strict):
    preset: Literal["near2d", "near3d", "far2d", "far3d", "custom"] = "custom"
    dimension: Literal[2, 3]
    excitation: Literal["velocity", "displacement"] = "velocity"
    source: SourceCfg
    sensors: SensorCfg | None = None
    directions: DirectionCfg | None = None
    time: TimeCfg
    k_axis: KCfg | None = None
    snr_db: float | None = None
    seed: int = Field(0, ge=0, lt=2**64)
    indicator: Literal[INDICATORS]
    image: ImageCfg
    # "auto": 5-sample moving average when snr_db <= 20, else none
    filter_window: int | Literal["auto"] | None = "auto"
    quadrature: QuadCfg = QuadCfg()
    output_dir: str = "out"

    @model_validator(mode="after")
    def _consistent(self):
        near = self.indicator in NEAR
        if near and self.sensors is None:
            raise ValueError(f"indicator {self.indicator!r} needs a 'sensors' section")
        if not near and self.directions is None:
            raise ValueError(f"indicator {self.indicator!r} needs a 'directions' section")
        if self.indicator in ("near_freq", "disp_near_freq") and self.k_axis is None:
            raise ValueError(f"indicator {self.indicator!r} needs a 'k_axis' section")
        if self.indicator.startswith("disp") != (self.excitation == "displacement"):
            raise ValueError(f"indicator {self.indicator!r} does not match excitation {self.excitation!r}")
        if self.indicator.startswith("disp") or self.indicator == "near_time_3d":
            if self.dimension != 3:
                raise ValueError(f"indicator {self.indicator!r} is three-dimensional only")
        return self

    # --- resolution into library objects ---

    def source_spec(self):
        s = self.source
        return SourceSpec(self.dimension, [t.build() for t in s.terms], s.support_radius, s.support_center)

    def sensor_array(self):
        s = self.sensors
        if self.dimension == 2:
            return make_circle_array(s.count, s.radius)
        if s.layout == "gauss":
            n_polar = int(round(np.sqrt(s.count / 2)))
            if 2 * n_polar * n_polar != s.count:
                raise ConfigError("sensors.count must be 2 n^2 for the gauss layout")
            return make_gauss_sphere_array(n_polar, 2 * n_polar, s.radius)
        return make_sphere_array(s.count, s.radius)

    def direction_grid(self):
        return make_direction_grid(self.dimension, self.directions.extent, self.directions.n_per_axis)

    def geometry(self):
        return self.sensor_array() if self.indicator in NEAR else self.direction_grid()

    def time_axis(self):
        return TimeAxis.from_interval(self.time.start, self.time.end, self.time.steps)

    def wavenumber_axis(self):
        return WavenumberAxis(0.0, self.k_axis.k_max, self.k_axis.steps)

    def image_grid(self):
        n = self.image.n_per_axis
        return make_image_grid(self.dimension, self.image.bounds, n)

    def filter_params(self):
        if self.filter_window == "auto":
            return FilterParams.for_snr(self.snr_db)
        return FilterParams(self.filter_window)

    def quad_params(self):
        return QuadratureParams(**self.quadrature.model_dump())


# --- presets ---------------------------------------------------------------------

PRESETS = {
    "near2d": {
        "dimension": 2,
        "source": {
            "terms": [
                {"type": "gaussian", "amplitude": 1.1, "center": [0.01, 0.12], "sharpness": 30.0},
                {"type": "poly_gaussian", "amplitude": -100.0, "sharpness": 20.0},
            ],
            "support_radius": 1.0,
        },
        "sensors": {"count": 80, "radius": 1.0, "layout": "circle"},
        "time": {"start": 0.0, "end": 10.0, "steps": 1000},
        "k_axis": {"k_max": 30.0, "steps": 100},
        "snr_db": 15.0,
        "indicator": "near_freq",
        "image": {"bounds": [-0.7, 0.7], "n_per_axis": 71},
    },
    "near3d": {
        "dimension": 3,
        "source": {"terms": [{"type": "peanut"}], "support_radius": 1.8},
        "sensors": {"count": 200, "radius": 3.0, "layout": "fibonacci"},
        "time": {"start": 0.0, "end": 6.0, "steps": 150},
        "k_axis": {"k_max": 30.0, "steps": 100},
        "snr_db": 100.0,
        "indicator": "near_time_3d",
        "image": {"bounds": [-1.6, 1.6], "n_per_axis": 48},
    },
    "far2d": {
        "dimension": 2,
        "source": {
            "terms": [
                {"type": "gaussian", "amplitude": 0.5, "center": [0.0, 0.2], "sharpness": 20.0},
                {"type": "gaussian", "amplitude": -0.5, "center": [0.0, -0.2], "sharpness": 20.0},
            ],
            "support_radius": 1.0,
        },
        "directions": {"extent": 15.0, "n_per_axis": 80},
        "time": {"start": -3.0, "end": 18.0, "steps": 350},
        "snr_db": -1.0,
        "indicator": "far",
        "image": {"bounds": [-1.0, 1.0], "n_per_axis": 40},
    },
    "far3d": {
        "dimension": 3,
        "source": {
            "terms": [
                {"type": "ball", "center": [-0.4, -0.4, -0.4], "radius": 0.4, "level": 1.0},
                {"type": "radial_star", "center": [0.0, 0.0, 0.2], "a": 0.4, "b": 0.12, "m": 3, "level": 0.5},
            ],
            "support_radius": 1.1,
        },
        "directions": {"extent": 20.0, "n_per_axis": 40},
        "time": {"start": -1.2, "end": 1.2, "steps": 60},
        "snr_db": -1.0,
        "indicator": "far",
        "image": {"bounds": [-1.0, 1.0], "n_per_axis": 60},
    },
}

# direction grids compared for the 2D far-field experiment: (extent, n_per_axis)
FAR2D_DIRECTION_GRIDS = ((8.0, 40), (10.0, 60), (15.0, 80))


def _merge(base, override):
    out = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def _field_path(err):
    return ".".join(str(p) for p in err["loc"]) or "<root>"


def build_config(raw):
    """Validate a mapping; a named preset supplies defaults that ``raw`` overrides."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping at the top level")
    preset = raw.get("preset", "custom")
    if preset != "custom":
        if preset not in PRESETS:
            raise ConfigError(f"field 'preset': unknown preset {preset!r} (choose from {', '.join(PRESETS)}, custom)")
        raw = _merge(PRESETS[preset], raw)
    try:
        return ExperimentConfig.model_validate(raw)
    except ValidationError as exc:
        problems = "; ".join(f"field '{_field_path(e)}': {e['msg']}" for e in exc.errors())
        raise ConfigError(problems) from None


def preset_config(name, **overrides):
    return build_config({"preset": name, **overrides})


def load_config(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise ConfigError(f"{path}:{where} {getattr(exc, 'problem', None) or exc}") from None
    return build_config(raw or {})


def dump_config(cfg):
    """Resolved config as YAML text; ``load_config`` of it gives back ``cfg``."""
    return yaml.safe_dump(cfg.model_dump(mode="json"), sort_keys=False)
