"""Full-band filtered OFDM: CP-OFDM plus one transmit/receive filter pair.

The filter is a windowed sinc spanning the union of the allocated RBs, used
at both ends. Its combined impulse response exceeds the CP, so reception
applies a small timing advance into the CP and accepts the residual tail as
self-interference.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..dsp import design_windowed_sinc
from ..errors import FramingError
from .config import WaveformConfig, unit_power_scale
from . import cpofdm


@lru_cache(maxsize=16)
def _filter(cfg: WaveformConfig) -> np.ndarray:
    tones = cfg.allocated_tones
    center = (tones.min() + tones.max()) / 2.0
    half_width = (tones.max() - tones.min()) / 2.0 + cfg.fofdm_tone_offset
    lf = cfg.fofdm_len
    lowpass = design_windowed_sinc(
        half_width * cfg.subcarrier_spacing, lf, cfg.sample_rate, "hann"
    ).taps
    shift = np.exp(
        2j * np.pi * center * (np.arange(lf) - (lf - 1) / 2) / cfg.fft_size
    )
    return lowpass * shift


def _timing_advance(cfg: WaveformConfig) -> int:
    # Split the combined-filter spread across the CP window.
    return cfg.cp_len // 2


@lru_cache(maxsize=16)
def _tone_compensation(cfg: WaveformConfig) -> np.ndarray:
    """Static per-tone response of the aligned Tx+Rx filter cascade."""
    f = _filter(cfg)
    combined = np.convolve(f, f)
    origin = len(f) - 1 - _timing_advance(cfg)  # sample treated as delay zero
    n = np.arange(len(combined)) - origin
    tones = cfg.allocated_tones
    phases = np.exp(-2j * np.pi * np.outer(tones, n) / cfg.fft_size)
    return phases @ combined


def n_samples(cfg: WaveformConfig, n_symbols: int) -> int:
    return cpofdm.n_samples(cfg, n_symbols) + cfg.fofdm_len - 1


@lru_cache(maxsize=16)
def _scale(cfg: WaveformConfig) -> float:
    return unit_power_scale(_modulate_unscaled, cfg, cpofdm.block_len(cfg))


def _modulate_unscaled(grid: np.ndarray, cfg: WaveformConfig) -> np.ndarray:
    return np.convolve(cpofdm.modulate(grid, cfg), _filter(cfg))


def modulate(grid: np.ndarray, cfg: WaveformConfig) -> np.ndarray:
    return _modulate_unscaled(grid, cfg) * _scale(cfg)


def demodulate(samples: np.ndarray, cfg: WaveformConfig) -> np.ndarray:
    lf = cfg.fofdm_len
    frame = len(samples) - (lf - 1)
    if frame <= 0 or frame % cpofdm.block_len(cfg) != 0:
        raise FramingError(
            f"signal length {len(samples)} inconsistent with filtered framing"
        )
    filtered = np.convolve(samples, _filter(cfg))
    start = (lf - 1) - _timing_advance(cfg)
    aligned = filtered[start : start + frame]
    raw = cpofdm.demodulate(aligned, cfg)
    comp = _tone_compensation(cfg) * _scale(cfg)
    return raw / comp[:, None]


def symbol_midpoints(cfg: WaveformConfig, n_symbols: int) -> np.ndarray:
    return cpofdm.symbol_midpoints(cfg, n_symbols) + (cfg.fofdm_len - 1) // 2


def noise_gain(cfg: WaveformConfig) -> np.ndarray:
    f = _filter(cfg)
    tones = cfg.allocated_tones
    response = np.exp(
        -2j * np.pi * np.outer(tones, np.arange(len(f))) / cfg.fft_size
    ) @ f
    alpha = cfg.fft_size / np.sqrt(cfg.n_subcarriers)
    comp = _tone_compensation(cfg) * _scale(cfg)
    return (
        cfg.fft_size * np.abs(response) ** 2 / (alpha**2 * np.abs(comp) ** 2)
    )


def per_bin_noise_scale(cfg: WaveformConfig) -> np.ndarray:
    return np.ones(cfg.n_subcarriers)
