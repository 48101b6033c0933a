from .api import (
    demodulate,
    demodulate_cpofdm,
    demodulate_fbmc,
    demodulate_fofdm,
    demodulate_rbfofdm,
    demodulate_to_lattice,
    demodulate_ufmc,
    finalize_estimates,
    modulate,
    modulate_cpofdm,
    modulate_fbmc,
    modulate_fofdm,
    modulate_rbfofdm,
    modulate_ufmc,
    n_samples,
    noise_gain,
    symbol_midpoints,
)
from .config import DemodGrid, QamGrid, WaveformConfig, WAVEFORM_KINDS

__all__ = [
    "DemodGrid",
    "QamGrid",
    "WaveformConfig",
    "WAVEFORM_KINDS",
    "demodulate",
    "demodulate_cpofdm",
    "demodulate_fbmc",
    "demodulate_fofdm",
    "demodulate_rbfofdm",
    "demodulate_to_lattice",
    "demodulate_ufmc",
    "finalize_estimates",
    "modulate",
    "modulate_cpofdm",
    "modulate_fbmc",
    "modulate_fofdm",
    "modulate_rbfofdm",
    "modulate_ufmc",
    "n_samples",
    "noise_gain",
    "symbol_midpoints",
]
