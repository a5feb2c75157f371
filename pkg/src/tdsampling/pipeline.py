"""End-to-end experiment: forward -> noise -> [spectral] -> indicator -> metrics."""

from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

from . import forward, indicators
from .config import NEAR, dump_config
from .errors import StageError
from .io import save_spectral, save_time_series, write_grid, write_heatmap
from .metrics import evaluate
from .noise import NoiseParams, add_snr_noise
from .sources import rasterize
from .spectral import time_to_freq


@contextmanager
def stage(name):
    try:
        yield
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


def synthesize(cfg):
    spec, geometry, axis, quad = cfg.source_spec(), cfg.geometry(), cfg.time_axis(), cfg.quad_params()
    disp = cfg.excitation == "displacement"
    if cfg.indicator in NEAR:
        if cfg.dimension == 3:
            solver = forward.near_field_displacement_3d if disp else forward.near_field_3d
        else:
            solver = forward.near_field_2d
    elif cfg.dimension == 3:
        solver = forward.far_field_displacement_3d if disp else forward.far_field_3d
    else:
        solver = forward.far_field_2d
    return solver(spec, geometry, axis, quad)


def add_noise(cfg, data):
    if cfg.snr_db is None:
        return data
    return add_snr_noise(data, NoiseParams(cfg.snr_db, cfg.seed))


def needs_spectrum(cfg):
    return cfg.indicator in ("near_freq", "disp_near_freq")


def reconstruct(cfg, data):
    """``data`` is time-series data, or SpectralData for the frequency-domain near indicators."""
    image = cfg.image_grid()
    kind = cfg.indicator
    if kind == "near_time_3d":
        return indicators.indicator_near_time_3d(data, image, cfg.filter_params())
    if kind == "disp_near_time":
        return indicators.indicator_near_time_disp_3d(data, image, cfg.filter_params())
    if kind in ("near_freq", "disp_near_freq"):
        spectral = data if hasattr(data, "k_axis") else time_to_freq(data, cfg.wavenumber_axis())
        if kind == "near_freq":
            return indicators.indicator_near_freq(spectral, image, cfg.dimension)
        return indicators.indicator_disp_near_freq(spectral, image)
    if kind == "far":
        return indicators.indicator_far(data, image, cfg.dimension)
    return indicators.indicator_disp_far(data, image)


@dataclass
class RunOutput:
    config: object
    truth: object
    data: object
    result: object
    report: object
    files: dict


def _slice(grid):
    return None if grid.dim == 2 else (2, grid.n_per_axis[2] // 2)


def run_experiment(cfg, out_dir=None, write=True):
    """Run every stage; failures surface as StageError('[stage] cause')."""
    with stage("source"):
        truth = rasterize(cfg.source_spec(), cfg.image_grid())
    with stage("forward"):
        clean = synthesize(cfg)
    with stage("noise"):
        data = add_noise(cfg, clean)
    spectral = None
    if needs_spectrum(cfg):
        with stage("transform"):
            spectral = time_to_freq(data, cfg.wavenumber_axis())
    with stage("indicator"):
        result = reconstruct(cfg, spectral if spectral is not None else data)
    with stage("metrics"):
        report = evaluate(
            result.grid, truth, preset=cfg.preset, indicator=cfg.indicator, snr_db=cfg.snr_db, seed=cfg.seed
        )
    files = {}
    if write:
        with stage("output"):
            out = Path(out_dir if out_dir is not None else cfg.output_dir)
            out.mkdir(parents=True, exist_ok=True)
            files["config"] = out / "config.yaml"
            files["config"].write_text(dump_config(cfg))
            files["truth"] = out / "truth.grid"
            write_grid(truth, files["truth"])
            files["data"] = out / "data.npz"
            save_time_series(data, files["data"])
            if spectral is not None:
                files["spectral"] = out / "spectral.npz"
                save_spectral(spectral, files["spectral"])
            files["reconstruction"] = out / "reconstruction.grid"
            write_grid(result.grid, files["reconstruction"])
            files["report"] = out / "report.txt"
            files["report"].write_text(report.to_text())
            files["truth_pgm"] = write_heatmap(truth, out / "truth.pgm", _slice(truth))
            files["reconstruction_pgm"] = write_heatmap(result.grid, out / "reconstruction.pgm", _slice(result.grid))
    return RunOutput(cfg, truth, data, result, report, files)
