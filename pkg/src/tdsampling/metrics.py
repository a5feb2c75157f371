"""Error measures comparing reconstructions with exact source rasters."""

from dataclasses import dataclass, field

import numpy as np


def _same_layout(a, b):
    if not a.same_layout(b):
        raise ValueError(f"grid layouts differ: {a.n_per_axis} vs {b.n_per_axis}")


def relative_l2(recon, truth):
    _same_layout(recon, truth)
    norm = np.linalg.norm(truth.values)
    if norm == 0.0:
        raise ValueError("relative error undefined for an all-zero truth grid")
    return float(np.linalg.norm(recon.values - truth.values) / norm)


def threshold_level_set(grid, level, absolute=False):
    """Binary mask of value >= level * max(grid), or value >= level when ``absolute``."""
    cut = level if absolute else level * np.max(grid.values)
    return grid.with_values((grid.values >= cut).astype(float))


def jaccard(mask_a, mask_b):
    _same_layout(mask_a, mask_b)
    a, b = mask_a.values > 0.5, mask_b.values > 0.5
    union = np.count_nonzero(a | b)
    return 1.0 if union == 0 else np.count_nonzero(a & b) / union


def peak_offset(recon, truth):
    """Per-axis distance between the argmax nodes of the two grids."""
    _same_layout(recon, truth)
    a = recon.node_coordinate(np.unravel_index(np.argmax(recon.values), recon.values.shape))
    b = truth.node_coordinate(np.unravel_index(np.argmax(truth.values), truth.values.shape))
    return np.abs(a - b)


@dataclass
class ErrorReport:
    relative_l2: float
    max_abs: float
    peak_offset: np.ndarray
    meta: dict = field(default_factory=dict)

    def to_text(self):
        lines = [
            f"relative_l2 = {self.relative_l2!r}",
            f"max_abs = {self.max_abs!r}",
            "peak_offset = " + " ".join(repr(float(v)) for v in self.peak_offset),
        ]
        lines += [f"{k} = {v}" for k, v in sorted(self.meta.items())]
        return "\n".join(lines) + "\n"


def evaluate(recon, truth, **meta):
    return ErrorReport(
        relative_l2=relative_l2(recon, truth),
        max_abs=float(np.max(np.abs(recon.values - truth.values))),
        peak_offset=peak_offset(recon, truth),
        meta=meta,
    )
