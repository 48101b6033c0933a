"""Per-subcarrier one-tap equalization with perfect CSI."""

from __future__ import annotations

import numpy as np

from ..errors import ConfigurationError

ERASURE_VARIANCE = 1e30
_H_EPS = 1e-12


def equalize_one_tap(
    symbols: np.ndarray,
    freq_response: np.ndarray,
    scheme: str = "mmse",
    noise_var: np.ndarray | float = 0.0,
):
    """Equalize a receive grid against its per-element channel response.

    Returns ``(estimates, post_variances)``. ``noise_var`` is the complex
    noise variance per element at the equalizer input. ``zf`` divides by the
    response and flags spectral nulls as erasures (zero estimate, huge
    variance, so LLRs come out zero); ``mmse`` applies the regularized
    h*.y/(|h|^2+v) combiner, which converges to ``zf`` as v -> 0.
    """
    if scheme not in ("zf", "mmse"):
        raise ConfigurationError(f"unknown equalizer scheme {scheme!r}")
    y = np.asarray(symbols, dtype=np.complex128)
    h = np.broadcast_to(np.asarray(freq_response, dtype=np.complex128), y.shape)
    v = np.broadcast_to(np.asarray(noise_var, dtype=float), y.shape)
    h2 = np.abs(h) ** 2
    if scheme == "zf":
        null = h2 < _H_EPS**2
        safe = np.where(null, 1.0, h)
        est = np.where(null, 0.0, y / safe)
        var = np.where(null, ERASURE_VARIANCE, v / np.maximum(h2, _H_EPS**2))
        return est, var
    est = np.conj(h) * y / (h2 + v)
    var = v * h2 / (h2 + v) ** 2
    return est, var


def equalize_unbiased(symbols, freq_response, noise_var):
    """ZF-with-erasures: the unbiased one-tap combiner used by the link."""
    return equalize_one_tap(symbols, freq_response, "zf", noise_var)
