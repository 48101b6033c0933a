"""Sub-band filtered multicarrier without CP, received through a 2N-point FFT.

Each resource block is synthesized by a full-size IFFT restricted to its own
tones and shaped by an equiripple-sidelobe window modulated to the sub-band
center. Per-symbol blocks of N+L-1 samples are concatenated back to back.
Reception zero-pads each block to 2N, takes the 2N FFT, and keeps the even
bins, which wraps the filter tail back onto the body (circular convolution)
at the cost of collecting N+L-1 noise samples instead of N.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..dsp import design_chebyshev_window
from ..errors import ConfigurationError, FramingError
from .config import WaveformConfig, unit_power_scale


def block_len(cfg: WaveformConfig) -> int:
    return cfg.fft_size + cfg.ufmc_len - 1


def n_samples(cfg: WaveformConfig, n_symbols: int) -> int:
    return n_symbols * block_len(cfg)


@lru_cache(maxsize=16)
def _subband_filters(cfg: WaveformConfig) -> tuple[np.ndarray, np.ndarray]:
    """(n_rb, L) modulated filters and (n_rb, N) their per-bin responses."""
    lf = cfg.ufmc_len
    if lf >= cfg.fft_size:
        raise ConfigurationError(
            f"sub-band filter length {lf} must be below fft_size {cfg.fft_size}"
        )
    window = design_chebyshev_window(lf, cfg.ufmc_sidelobe_db).taps
    n = cfg.fft_size
    filters = []
    responses = []
    for rb in cfg.rb_allocation:
        center = float(np.mean(cfg.rb_tones(rb)))  # tone units, may be half-integer
        phase = np.exp(2j * np.pi * center * (np.arange(lf) - (lf - 1) / 2) / n)
        f = window * phase
        filters.append(f)
        responses.append(np.fft.fft(f, n=n))
    return np.array(filters), np.array(responses)


@lru_cache(maxsize=16)
def _scale(cfg: WaveformConfig) -> float:
    # Normalized over the N-sample body, not the emitted N+L-1 block: the
    # per-subcarrier transmit amplitude then matches the CP baseline and the
    # 2N-FFT reception pays its nominal 1+L/N noise cost.
    return unit_power_scale(_modulate_unscaled, cfg, cfg.fft_size)


def _modulate_unscaled(grid: np.ndarray, cfg: WaveformConfig) -> np.ndarray:
    n = cfg.fft_size
    m = grid.shape[1]
    filters, _ = _subband_filters(cfg)
    blk = block_len(cfg)
    out = np.zeros((blk, m), dtype=np.complex128)
    for i, rb in enumerate(cfg.rb_allocation):
        rows = slice(i * cfg.rb_size, (i + 1) * cfg.rb_size)
        spectrum = np.zeros((n, m), dtype=np.complex128)
        spectrum[cfg.rb_tones(rb) % n, :] = grid[rows, :]
        body = np.fft.ifft(spectrum, axis=0) * n
        for col in range(m):
            out[:, col] += np.convolve(body[:, col], filters[i])
    return out.reshape(-1, order="F")


def modulate(grid: np.ndarray, cfg: WaveformConfig) -> np.ndarray:
    return _modulate_unscaled(grid, cfg) * _scale(cfg)


def demodulate(samples: np.ndarray, cfg: WaveformConfig) -> np.ndarray:
    n = cfg.fft_size
    blk = block_len(cfg)
    if len(samples) % blk != 0:
        raise FramingError(
            f"signal length {len(samples)} is not a multiple of the "
            f"{blk}-sample block"
        )
    blocks = samples.reshape(blk, -1, order="F")
    padded = np.zeros((2 * n, blocks.shape[1]), dtype=np.complex128)
    padded[:blk, :] = blocks
    spectrum = np.fft.fft(padded, axis=0)
    even = spectrum[::2, :]
    _, responses = _subband_filters(cfg)
    out = np.empty((cfg.n_subcarriers, blocks.shape[1]), dtype=np.complex128)
    for i, rb in enumerate(cfg.rb_allocation):
        tones = cfg.rb_tones(rb)
        rows = slice(i * cfg.rb_size, (i + 1) * cfg.rb_size)
        comp = responses[i][tones % n] * _scale(cfg) * n
        out[rows, :] = even[tones % n, :] / comp[:, None]
    return out


def filter_tone_gains(cfg: WaveformConfig) -> np.ndarray:
    """|sub-band filter response| at each allocated tone (droop profile)."""
    _, responses = _subband_filters(cfg)
    gains = np.empty(cfg.n_subcarriers)
    for i, rb in enumerate(cfg.rb_allocation):
        tones = cfg.rb_tones(rb)
        gains[i * cfg.rb_size : (i + 1) * cfg.rb_size] = np.abs(
            responses[i][tones % cfg.fft_size]
        )
    return gains


def symbol_midpoints(cfg: WaveformConfig, n_symbols: int) -> np.ndarray:
    m = np.arange(n_symbols)
    return m * block_len(cfg) + block_len(cfg) // 2


def noise_gain(cfg: WaveformConfig) -> np.ndarray:
    """Exact per-tone noise variance gain, including filter droop."""
    gains = filter_tone_gains(cfg)
    return block_len(cfg) / (gains * _scale(cfg) * cfg.fft_size) ** 2


def per_bin_noise_scale(cfg: WaveformConfig) -> np.ndarray:
    """Nominal noise-enhancement factor of the 2N-FFT reception."""
    return np.full(cfg.n_subcarriers, 1.0 + cfg.ufmc_len / cfg.fft_size)
