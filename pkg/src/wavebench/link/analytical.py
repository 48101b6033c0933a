"""Closed-form link quantities: residual-ISI SINR and the 2N-FFT noise loss."""

from __future__ import annotations

import numpy as np

from ..errors import ConfigurationError


def sinr_analytical(n_isi_taps: int, n_subcarriers: int, fft_size: int,
                    snr_linear: float) -> float:
    """Per-subcarrier SINR with L interfering taps of unit total power.

    Evaluates (L*K/N^2 + 1/SNR)^-1; SNR is per data subcarrier, so with no
    interfering taps the SINR equals the SNR exactly.
    """
    if n_isi_taps < 0 or n_subcarriers < 1 or fft_size < n_subcarriers:
        raise ConfigurationError("need L >= 0 and N >= K >= 1")
    isi = n_isi_taps * n_subcarriers / fft_size**2
    inv = isi + (0.0 if np.isinf(snr_linear) else 1.0 / snr_linear)
    return float("inf") if inv == 0 else 1.0 / inv


def ufmc_snr_loss(filter_len: int, fft_size: int) -> float:
    """SNR degradation in dB of collecting N+L noise samples instead of N."""
    if filter_len < 0 or fft_size < 1:
        raise ConfigurationError("need L >= 0 and N >= 1")
    return float(10.0 * np.log10(1.0 + filter_len / fft_size))
