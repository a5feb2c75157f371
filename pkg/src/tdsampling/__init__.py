"""Time-domain direct sampling reconstruction of acoustic initial sources."""

from .config import ExperimentConfig, build_config, load_config, preset_config
from .forward import QuadratureParams, TimeAxis, TimeSeriesData
from .geometry import ImageGrid, make_circle_array, make_direction_grid, make_image_grid, make_sphere_array
from .pipeline import run_experiment
from .sources import SourceSpec, eval_source, rasterize

__version__ = "0.1.0"

__all__ = [
    "ExperimentConfig",
    "ImageGrid",
    "QuadratureParams",
    "SourceSpec",
    "TimeAxis",
    "TimeSeriesData",
    "build_config",
    "eval_source",
    "load_config",
    "make_circle_array",
    "make_direction_grid",
    "make_image_grid",
    "make_sphere_array",
    "preset_config",
    "rasterize",
    "run_experiment",
]
