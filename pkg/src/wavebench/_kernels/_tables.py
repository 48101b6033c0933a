"""Trellis tables for the rate-1/3, constraint-length-7 convolutional code.

Register convention: bit 6 of the 7-bit register is the newest input bit.
State = register bits 5..0 (the six previous inputs, most recent in bit 5).
"""

from __future__ import annotations

import numpy as np

GENERATORS_OCTAL = (0o133, 0o171, 0o165)
CONSTRAINT_LEN = 7
N_STATES = 64
RATE_INV = 3  # coded bits per info bit
TAIL_BITS = CONSTRAINT_LEN - 1


def generator_taps() -> np.ndarray:
    """3x7 binary tap matrix, newest-input tap first."""
    taps = np.zeros((RATE_INV, CONSTRAINT_LEN), dtype=np.uint8)
    for j, g in enumerate(GENERATORS_OCTAL):
        for i in range(CONSTRAINT_LEN):
            taps[j, i] = (g >> (CONSTRAINT_LEN - 1 - i)) & 1
    return taps


def output_symbols() -> np.ndarray:
    """64x2 table: 3-bit output word for (state, input bit)."""
    table = np.zeros((N_STATES, 2), dtype=np.int32)
    for state in range(N_STATES):
        for bit in (0, 1):
            reg = (bit << 6) | state
            word = 0
            for g in GENERATORS_OCTAL:
                word = (word << 1) | (bin(reg & g).count("1") & 1)
            table[state, bit] = word
    return table


def symbol_signs() -> np.ndarray:
    """8x3 table of (1 - 2*bit) for each 3-bit output word."""
    signs = np.zeros((8, RATE_INV), dtype=np.float64)
    for word in range(8):
        for j in range(RATE_INV):
            bit = (word >> (RATE_INV - 1 - j)) & 1
            signs[word, j] = 1.0 - 2.0 * bit
    return signs
