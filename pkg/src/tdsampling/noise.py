"""Additive Gaussian noise calibrated to a per-channel signal-to-noise ratio."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class NoiseParams:
    snr_db: float
    seed: int = 0

    def __post_init__(self):
        if not np.isfinite(self.snr_db):
            raise ValueError("snr_db must be finite")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def channel_generator(seed, channel):
    """Independent stream per (seed, channel); draws never depend on the
    order in which channels are processed."""
    return np.random.Generator(np.random.Philox(key=int(seed), counter=[0, 0, 0, int(channel)]))


def noise_std(channels, snr_db):
    power = np.mean(np.asarray(channels, dtype=float) ** 2, axis=-1)
    return np.sqrt(power / 10.0 ** (snr_db / 10.0))


def add_snr_noise(data, params):
    """Return a copy of ``data`` with N(0, P / 10^(snr/10)) added sample-wise,
    P being the mean square of each channel over time."""
    channels = data.channels
    if channels.size == 0:
        raise ValueError("cannot add noise to empty data")
    std = noise_std(channels, params.snr_db)
    noisy = channels.copy()
    for c in range(channels.shape[0]):
        if std[c] > 0:
            noisy[c] += std[c] * channel_generator(params.seed, c).standard_normal(channels.shape[1])
    return data.with_channels(noisy)
