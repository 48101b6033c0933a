"""One contract over the five modulator/demodulator pairs."""

from __future__ import annotations

import numpy as np

from ..dsp import ComplexSignal
from ..errors import ConfigurationError
from . import cpofdm, fbmc, fofdm, rbfofdm, ufmc
from .config import DemodGrid, QamGrid, WaveformConfig, check_grid

_MODULES = {
    "cpofdm": cpofdm,
    "fbmc": fbmc,
    "rbfofdm": rbfofdm,
    "ufmc": ufmc,
    "fofdm": fofdm,
}


def _module(cfg: WaveformConfig):
    return _MODULES[cfg.waveform_kind]


def _expect_kind(cfg: WaveformConfig, kind: str) -> None:
    if cfg.waveform_kind != kind:
        raise ConfigurationError(
            f"config is for {cfg.waveform_kind!r}, expected {kind!r}"
        )


def modulate(grid: QamGrid, cfg: WaveformConfig) -> ComplexSignal:
    check_grid(grid, cfg)
    samples = _module(cfg).modulate(grid.symbols, cfg)
    return ComplexSignal(samples=samples, sample_rate=cfg.sample_rate)


def demodulate(signal: ComplexSignal, cfg: WaveformConfig) -> DemodGrid:
    mod = _module(cfg)
    symbols = mod.demodulate(signal.samples, cfg)
    return DemodGrid(
        symbols=symbols,
        per_bin_noise_scale=mod.per_bin_noise_scale(cfg),
        oqam_half_symbols=False,
    )


def demodulate_to_lattice(signal: ComplexSignal, cfg: WaveformConfig) -> DemodGrid:
    """Equalizer-ready receive grid.

    Identical to :func:`demodulate` for the block waveforms; for the
    staggered filter bank this returns the complex half-symbol analysis
    output (K x 2M) so one-tap equalization can run before real extraction.
    """
    if cfg.waveform_kind != "fbmc":
        return demodulate(signal, cfg)
    return DemodGrid(
        symbols=fbmc.analysis_grid(signal.samples, cfg),
        per_bin_noise_scale=fbmc.per_bin_noise_scale(cfg),
        oqam_half_symbols=True,
    )


def finalize_estimates(symbols: np.ndarray, cfg: WaveformConfig) -> np.ndarray:
    """Post-equalization mapping back to K x M complex QAM estimates."""
    if cfg.waveform_kind != "fbmc":
        return symbols
    half = symbols.real
    if half.shape[1] % 2:
        half = half[:, :-1]
    return fbmc.pair(half)


def n_samples(cfg: WaveformConfig, n_symbols: int) -> int:
    return _module(cfg).n_samples(cfg, n_symbols)


def samples_per_symbol(cfg: WaveformConfig) -> float:
    """Power-normalization divisor: useful samples per QAM symbol column.

    The CP-bearing waveforms normalize over their emitted block (CP energy is
    spent and discarded, as in plain OFDM). The CP-free waveforms normalize
    over the N-sample body so their per-subcarrier transmit amplitude matches
    the CP baseline; the 2N-FFT receiver's noise collection then carries its
    nominal 1+L/N cost.
    """
    if cfg.waveform_kind in ("fbmc", "ufmc"):
        return float(cfg.fft_size)
    return _module(cfg).n_samples(cfg, 1) - (
        0 if cfg.waveform_kind == "cpofdm" else _tail_len(cfg)
    )


def _tail_len(cfg: WaveformConfig) -> int:
    if cfg.waveform_kind == "fofdm":
        return cfg.fofdm_len - 1
    if cfg.waveform_kind == "rbfofdm":
        return cfg.rbf_len - 1
    return 0


def symbol_midpoints(cfg: WaveformConfig, n_symbols: int) -> np.ndarray:
    """Channel-time sample index at the center of each lattice point.

    One entry per symbol for block waveforms, one per half-symbol for the
    staggered filter bank (matching ``demodulate_to_lattice`` columns).
    """
    return _module(cfg).symbol_midpoints(cfg, n_symbols)


def noise_gain(cfg: WaveformConfig) -> np.ndarray:
    """Per-tone demod noise variance for unit received noise power."""
    return _module(cfg).noise_gain(cfg)


# Named per-kind entry points.

def modulate_cpofdm(grid: QamGrid, cfg: WaveformConfig) -> ComplexSignal:
    _expect_kind(cfg, "cpofdm")
    return modulate(grid, cfg)


def demodulate_cpofdm(signal: ComplexSignal, cfg: WaveformConfig) -> DemodGrid:
    _expect_kind(cfg, "cpofdm")
    return demodulate(signal, cfg)


def modulate_fbmc(grid: QamGrid, cfg: WaveformConfig) -> ComplexSignal:
    _expect_kind(cfg, "fbmc")
    return modulate(grid, cfg)


def demodulate_fbmc(signal: ComplexSignal, cfg: WaveformConfig) -> DemodGrid:
    _expect_kind(cfg, "fbmc")
    return demodulate(signal, cfg)


def modulate_rbfofdm(grid: QamGrid, cfg: WaveformConfig) -> ComplexSignal:
    _expect_kind(cfg, "rbfofdm")
    return modulate(grid, cfg)


def demodulate_rbfofdm(signal: ComplexSignal, cfg: WaveformConfig) -> DemodGrid:
    _expect_kind(cfg, "rbfofdm")
    return demodulate(signal, cfg)


def modulate_ufmc(grid: QamGrid, cfg: WaveformConfig) -> ComplexSignal:
    _expect_kind(cfg, "ufmc")
    return modulate(grid, cfg)


def demodulate_ufmc(signal: ComplexSignal, cfg: WaveformConfig) -> DemodGrid:
    _expect_kind(cfg, "ufmc")
    return demodulate(signal, cfg)


def modulate_fofdm(grid: QamGrid, cfg: WaveformConfig) -> ComplexSignal:
    _expect_kind(cfg, "fofdm")
    return modulate(grid, cfg)


def demodulate_fofdm(signal: ComplexSignal, cfg: WaveformConfig) -> DemodGrid:
    _expect_kind(cfg, "fofdm")
    return demodulate(signal, cfg)
