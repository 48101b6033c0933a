"""Cyclic-prefix OFDM baseline: IFFT per symbol, CP copy of the body tail."""

from __future__ import annotations

import numpy as np

from ..errors import FramingError
from .config import WaveformConfig


def _alpha(cfg: WaveformConfig) -> float:
    # Unit average transmit sample power for unit-power constellations.
    return cfg.fft_size / np.sqrt(cfg.n_subcarriers)


def block_len(cfg: WaveformConfig) -> int:
    return cfg.fft_size + cfg.cp_len


def n_samples(cfg: WaveformConfig, n_symbols: int) -> int:
    return n_symbols * block_len(cfg)


def modulate(grid: np.ndarray, cfg: WaveformConfig) -> np.ndarray:
    n = cfg.fft_size
    k, m = grid.shape
    spectrum = np.zeros((n, m), dtype=np.complex128)
    spectrum[cfg.allocated_bins, :] = grid * _alpha(cfg)
    body = np.fft.ifft(spectrum, axis=0)
    blocks = np.vstack([body[n - cfg.cp_len :, :], body]) if cfg.cp_len else body
    return blocks.reshape(-1, order="F")


def demodulate(samples: np.ndarray, cfg: WaveformConfig) -> np.ndarray:
    blk = block_len(cfg)
    if len(samples) % blk != 0:
        raise FramingError(
            f"signal length {len(samples)} is not a multiple of the "
            f"{blk}-sample symbol block"
        )
    blocks = samples.reshape(blk, -1, order="F")
    spectrum = np.fft.fft(blocks[cfg.cp_len :, :], axis=0)
    return spectrum[cfg.allocated_bins, :] / _alpha(cfg)


def symbol_midpoints(cfg: WaveformConfig, n_symbols: int) -> np.ndarray:
    """Absolute sample index of each symbol body center."""
    m = np.arange(n_symbols)
    return m * block_len(cfg) + cfg.cp_len + cfg.fft_size // 2


def noise_gain(cfg: WaveformConfig) -> np.ndarray:
    """Demod-output noise variance per tone for unit time-domain noise power."""
    return np.full(cfg.n_subcarriers, cfg.n_subcarriers / cfg.fft_size)


def per_bin_noise_scale(cfg: WaveformConfig) -> np.ndarray:
    return np.ones(cfg.n_subcarriers)
