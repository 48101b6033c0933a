"""Gray-mapped QPSK/16QAM with unit average power, plus max-log LLR demapping."""

from __future__ import annotations

import numpy as np

from ..errors import ConfigurationError, FramingError

# Per-axis Gray labelling. QPSK: bit 0 selects the I sign, bit 1 the Q sign.
# 16QAM: bits (0, 2) label the I axis, bits (1, 3) the Q axis; levels
# {-3, -1, +1, +3}/sqrt(10) carry Gray codes 10, 11, 01, 00 (msb = sign bit).
_AXIS_LEVELS_QPSK = np.array([1.0, -1.0]) / np.sqrt(2.0)  # index = bit value
_AXIS_LEVELS_16 = np.array([-3.0, -1.0, 1.0, 3.0]) / np.sqrt(10.0)
_AXIS_LABELS_16 = np.array([[1, 0], [1, 1], [0, 1], [0, 0]], dtype=np.uint8)

BITS_PER_SYMBOL = {"qpsk": 2, "qam16": 4}


def _check_order(order: str) -> None:
    if order not in BITS_PER_SYMBOL:
        raise ConfigurationError(f"unknown modulation order {order!r}")


def qam_map(bits: np.ndarray, order: str) -> np.ndarray:
    """Map a bit sequence to unit-average-power Gray symbols."""
    _check_order(order)
    bits = np.asarray(bits, dtype=np.uint8)
    bps = BITS_PER_SYMBOL[order]
    if len(bits) % bps != 0:
        raise FramingError(f"bit count {len(bits)} not divisible by {bps}")
    b = bits.reshape(-1, bps)
    if order == "qpsk":
        return _AXIS_LEVELS_QPSK[b[:, 0]] + 1j * _AXIS_LEVELS_QPSK[b[:, 1]]
    # 16QAM: per-axis 2-bit Gray index (sign bit, magnitude bit).
    idx_i = _gray_index(b[:, 0], b[:, 2])
    idx_q = _gray_index(b[:, 1], b[:, 3])
    return _AXIS_LEVELS_16[idx_i] + 1j * _AXIS_LEVELS_16[idx_q]


def _gray_index(sign_bit: np.ndarray, mag_bit: np.ndarray) -> np.ndarray:
    table = np.zeros(4, dtype=np.int64)
    for idx, (s, m) in enumerate(_AXIS_LABELS_16):
        table[(s << 1) | m] = idx
    return table[(sign_bit.astype(np.int64) << 1) | mag_bit.astype(np.int64)]


def qam_demap_llr(symbols: np.ndarray, noise_var: np.ndarray, order: str) -> np.ndarray:
    """Max-log LLRs per bit; positive favours bit 0, sign is the hard decision.

    ``noise_var`` is the complex noise variance per symbol (scalar or
    per-symbol array).
    """
    _check_order(order)
    symbols = np.asarray(symbols, dtype=np.complex128).reshape(-1)
    noise_var = np.broadcast_to(np.asarray(noise_var, dtype=float), symbols.shape)
    if np.any(noise_var <= 0):
        raise ConfigurationError("noise_var must be positive")
    bps = BITS_PER_SYMBOL[order]
    llrs = np.empty((len(symbols), bps), dtype=np.float64)
    if order == "qpsk":
        # Exact max-log for per-axis antipodal points at +-1/sqrt(2).
        scale = 2.0 * np.sqrt(2.0) / noise_var
        llrs[:, 0] = scale * symbols.real
        llrs[:, 1] = scale * symbols.imag
    else:
        llrs[:, 0::2] = _axis_llrs_16(symbols.real, noise_var)
        llrs[:, 1::2] = _axis_llrs_16(symbols.imag, noise_var)
    return llrs.reshape(-1)


def _axis_llrs_16(y: np.ndarray, noise_var: np.ndarray) -> np.ndarray:
    """Max-log LLRs of the (sign, magnitude) bit pair on one 4-level axis."""
    # Distances to the four axis levels, shape (n, 4).
    d2 = (y[:, None] - _AXIS_LEVELS_16[None, :]) ** 2
    out = np.empty((len(y), 2), dtype=np.float64)
    for bit_pos in range(2):
        labels = _AXIS_LABELS_16[:, bit_pos]
        d0 = np.min(d2[:, labels == 0], axis=1)
        d1 = np.min(d2[:, labels == 1], axis=1)
        # Per-axis noise variance is half the complex variance.
        out[:, bit_pos] = (d1 - d0) / noise_var
    return out


def hard_decisions(llrs: np.ndarray) -> np.ndarray:
    return (np.asarray(llrs) < 0).astype(np.uint8)
