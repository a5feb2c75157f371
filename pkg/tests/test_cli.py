import subprocess
import sys

import yaml

from tdsampling.cli import main
from test_pipeline import SMALL


def test_preset_list(capsys):
    assert main(["preset", "list"]) == 0
    out = capsys.readouterr().out
    for name in ("near2d", "near3d", "far2d", "far3d"):
        assert out.count(name + ":") == 1
    assert "80 sensors" in out and "40^3 directions over [-20, 20]" in out


def test_staged_commands(tmp_path, capsys):
    cfg = tmp_path / "c.yaml"
    cfg.write_text(yaml.safe_dump({**SMALL, "output_dir": str(tmp_path / "o")}))
    d = tmp_path / "d.npz"
    assert main(["synthesize", "--config", str(cfg), "--out", str(d)]) == 0
    assert main(["add-noise", str(d), "--snr", "10", "--seed", "1", "--out", str(tmp_path / "n.npz")]) == 0
    assert main(["transform", str(tmp_path / "n.npz"), "--config", str(cfg), "--out", str(tmp_path / "s.npz")]) == 0
    assert main(["reconstruct", str(tmp_path / "s.npz"), "--config", str(cfg), "--out", str(tmp_path / "r.grid")]) == 0
    capsys.readouterr()
    assert main(["evaluate", str(tmp_path / "r.grid"), str(tmp_path / "d.truth.grid"), "--out", str(tmp_path / "rep.txt")]) == 0
    assert capsys.readouterr().out.startswith("relative_l2 = ")
    assert (tmp_path / "rep.txt").exists()


def test_run_with_overrides(tmp_path, capsys):
    cfg = tmp_path / "c.yaml"
    cfg.write_text(yaml.safe_dump(SMALL))
    assert main(["run", "--config", str(cfg), "--snr", "none", "--seed", "2", "--out", str(tmp_path / "o")]) == 0
    echoed = yaml.safe_load((tmp_path / "o" / "config.yaml").read_text())
    assert echoed["snr_db"] is None and echoed["seed"] == 2
    assert "snr_db = None" in capsys.readouterr().out


def test_errors_exit_nonzero(tmp_path, capsys):
    cfg = tmp_path / "c.yaml"
    cfg.write_text(yaml.safe_dump({**SMALL, "image": {"bounds": [-2, 2], "n_per_axis": 3}}))
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) != 0
    assert "[indicator]" in capsys.readouterr().err
    cfg.write_text("preset: near2d\nwat: 1\n")
    assert main(["run", "--config", str(cfg)]) != 0
    assert "wat" in capsys.readouterr().err


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "tdsampling", "preset", "list"], capture_output=True, text=True)
    assert out.returncode == 0 and "far3d" in out.stdout
