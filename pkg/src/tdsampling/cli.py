"""Command-line entry point: ``tdsampling <subcommand> ...``."""

import argparse
from pathlib import Path
import sys

import yaml

from . import pipeline
from .config import PRESETS, build_config, dump_config
from .errors import ConfigError, StageError
from .io import load_data, read_grid, save_spectral, save_time_series, write_grid, write_heatmap
from .metrics import evaluate
from .noise import NoiseParams, add_snr_noise
from .sources import rasterize
from .spectral import time_to_freq


def _snr(text):
    return None if text.lower() == "none" else float(text)


def _config_args(p, indicator=True):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", type=Path, help="YAML experiment file")
    src.add_argument("--preset", choices=sorted(PRESETS), help="named experiment")
    p.add_argument("--snr", type=_snr, default=argparse.SUPPRESS, help="SNR in dB, or 'none' for clean data")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    if indicator:
        p.add_argument("--indicator", default=argparse.SUPPRESS)


def resolve_config(args, out_dir=False):
    if args.config is not None:
        try:
            raw = yaml.safe_load(args.config.read_text()) or {}
        except OSError as exc:
            raise ConfigError(f"{args.config}: {exc.strerror}") from None
        except yaml.YAMLError as exc:
            mark = getattr(exc, "problem_mark", None)
            where = f" line {mark.line + 1}, column {mark.column + 1}" if mark else ""
            raise ConfigError(f"{args.config}:{where} {getattr(exc, 'problem', None) or exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError(f"{args.config}: top level must be a mapping")
    else:
        raw = {"preset": args.preset}
    for flag, key in (("snr", "snr_db"), ("seed", "seed"), ("indicator", "indicator")):
        if hasattr(args, flag):
            raw[key] = getattr(args, flag)
    if out_dir and args.out is not None:
        raw["output_dir"] = str(args.out)
    return build_config(raw)


def _out(args, default):
    path = Path(args.out) if args.out is not None else Path(default)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def cmd_synthesize(args):
    cfg = resolve_config(args)
    with pipeline.stage("forward"):
        data = pipeline.synthesize(cfg)
    out = _out(args, Path(cfg.output_dir) / "data.npz")
    save_time_series(data, out)
    write_grid(rasterize(cfg.source_spec(), cfg.image_grid()), out.with_suffix(".truth.grid"))
    print(out)


def cmd_add_noise(args):
    with pipeline.stage("noise"):
        data = add_snr_noise(load_data(args.input), NoiseParams(args.snr, args.seed))
    out = _out(args, Path(args.input).with_suffix(".noisy.npz"))
    save_time_series(data, out)
    print(out)


def cmd_transform(args):
    cfg = resolve_config(args)
    if cfg.k_axis is None:
        raise ConfigError("field 'k_axis': required for the transform")
    with pipeline.stage("transform"):
        spectral = time_to_freq(load_data(args.input), cfg.wavenumber_axis())
    out = _out(args, Path(args.input).with_suffix(".spectral.npz"))
    save_spectral(spectral, out)
    print(out)


def cmd_reconstruct(args):
    cfg = resolve_config(args)
    with pipeline.stage("indicator"):
        result = pipeline.reconstruct(cfg, load_data(args.input))
    out = _out(args, Path(cfg.output_dir) / "reconstruction.grid")
    write_grid(result.grid, out)
    if result.grid.dim == 2:
        write_heatmap(result.grid, out.with_suffix(".pgm"))
    print(out)


def cmd_evaluate(args):
    with pipeline.stage("metrics"):
        report = evaluate(read_grid(args.reconstruction), read_grid(args.truth))
    text = report.to_text()
    if args.out is not None:
        _out(args, args.out).write_text(text)
    sys.stdout.write(text)


def cmd_run(args):
    cfg = resolve_config(args, out_dir=True)
    run = pipeline.run_experiment(cfg)
    sys.stdout.write(run.report.to_text())
    print(f"outputs in {cfg.output_dir}")


def cmd_preset(args):
    for name in PRESETS:
        cfg = build_config({"preset": name})
        geometry = (
            f"{cfg.sensors.count} sensors, radius {cfg.sensors.radius:g}"
            if cfg.sensors is not None
            else f"{cfg.directions.n_per_axis}^{cfg.dimension} directions over [-{cfg.directions.extent:g}, {cfg.directions.extent:g}]"
        )
        print(
            f"{name}: {cfg.dimension}D, {geometry}, time [{cfg.time.start:g}, {cfg.time.end:g}] / {cfg.time.steps} steps, "
            f"indicator {cfg.indicator}, snr_db {cfg.snr_db}"
        )
        if args.verbose:
            print(dump_config(cfg))


def build_parser():
    parser = argparse.ArgumentParser(prog="tdsampling", description="Time-domain direct sampling for acoustic sources.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synthesize", help="forward data for a config (clean)")
    _config_args(p)
    p.add_argument("--out", help="output .npz (default <output_dir>/data.npz)")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("add-noise", help="add SNR-calibrated noise to a data archive")
    p.add_argument("input")
    p.add_argument("--snr", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_add_noise)

    p = sub.add_parser("transform", help="Fourier transform time data onto the config's k axis")
    p.add_argument("input")
    _config_args(p, indicator=False)
    p.add_argument("--out")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("reconstruct", help="evaluate an indicator on the config's image grid")
    p.add_argument("input")
    _config_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("evaluate", help="compare a reconstruction grid with a truth grid")
    p.add_argument("reconstruction")
    p.add_argument("truth")
    p.add_argument("--out")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("run", help="end-to-end experiment")
    _config_args(p)
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("preset", help="named experiments")
    psub = p.add_subparsers(dest="action", required=True)
    q = psub.add_parser("list")
    q.add_argument("-v", "--verbose", action="store_true", help="print the full resolved configs")
    q.set_defaults(func=cmd_preset)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ConfigError, StageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
