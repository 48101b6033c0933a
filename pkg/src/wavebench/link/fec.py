"""Rate-1/3 convolutional code, constraint length 7, soft Viterbi decoding.

Generators (133, 171, 165) octal, zero-terminated; free distance 15. This is
the coding stage behind every BLER measurement; curves therefore reflect this
code, not any particular standard's channel coder.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._kernels import viterbi_decode
from .._kernels._tables import RATE_INV, TAIL_BITS, generator_taps
from ..errors import FramingError

_TAPS = generator_taps()

CODE_RATE = (1, RATE_INV)


@dataclass(frozen=True)
class CodedBlock:
    info_bits: np.ndarray
    coded_bits: np.ndarray

    @property
    def block_len_info(self) -> int:
        return len(self.info_bits)


def coded_len(n_info: int) -> int:
    return RATE_INV * (n_info + TAIL_BITS)


def info_len_for_coded(n_coded: int) -> int:
    """Largest info length whose terminated codeword has exactly n_coded bits."""
    if n_coded % RATE_INV != 0:
        raise FramingError(f"coded length {n_coded} not divisible by {RATE_INV}")
    n_info = n_coded // RATE_INV - TAIL_BITS
    if n_info < 1:
        raise FramingError(f"coded length {n_coded} too short for one info bit")
    return n_info


def fec_encode(info_bits: np.ndarray) -> CodedBlock:
    """Encode and zero-terminate; output length 3*(len(info)+6)."""
    info = np.asarray(info_bits, dtype=np.uint8)
    if info.ndim != 1 or len(info) < 1:
        raise FramingError("info_bits must be a non-empty 1-D bit sequence")
    n_out = len(info) + TAIL_BITS
    coded = np.empty((n_out, RATE_INV), dtype=np.uint8)
    for j in range(RATE_INV):
        # Zero termination is the tail of the full convolution.
        coded[:, j] = np.convolve(info, _TAPS[j])[:n_out] & 1
    return CodedBlock(info_bits=info, coded_bits=coded.reshape(-1))


def fec_decode(llrs: np.ndarray) -> np.ndarray:
    """Soft-decision decode; returns the info bits (termination stripped).

    LLR convention: positive favours bit 0.
    """
    llrs = np.asarray(llrs, dtype=np.float64)
    if llrs.ndim != 1 or len(llrs) % RATE_INV != 0:
        raise FramingError("LLR count must be a multiple of 3")
    n_steps = len(llrs) // RATE_INV
    if n_steps <= TAIL_BITS:
        raise FramingError("LLR sequence shorter than the termination tail")
    bits = viterbi_decode(llrs.reshape(n_steps, RATE_INV))
    return np.asarray(bits[: n_steps - TAIL_BITS], dtype=np.uint8)
