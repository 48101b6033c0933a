"""Pure-numpy Viterbi kernel, used when the compiled extension is absent."""

from __future__ import annotations

import numpy as np

from ._tables import N_STATES, output_symbols, symbol_signs

_OUT = output_symbols()
_SIGNS = symbol_signs()

# Predecessor wiring: state ns is reached from ((ns<<1)|z) & 63 with input
# bit ns>>5, for z in {0, 1}.
_NS = np.arange(N_STATES)
_PRED0 = (_NS << 1) & 63
_PRED1 = _PRED0 | 1
_IN_BIT = _NS >> 5
_SYM0 = _OUT[_PRED0, _IN_BIT]
_SYM1 = _OUT[_PRED1, _IN_BIT]

NEG_INF = -1e18


def viterbi_decode(llrs: np.ndarray) -> np.ndarray:
    """Soft Viterbi decode of zero-terminated rate-1/3 LLR triples.

    ``llrs`` has shape (n_steps, 3) with positive values favouring bit 0.
    Returns the n_steps surviving input bits (tail included).
    """
    llrs = np.ascontiguousarray(llrs, dtype=np.float64)
    n_steps = llrs.shape[0]
    metrics = np.full(N_STATES, NEG_INF)
    metrics[0] = 0.0
    decisions = np.empty((n_steps, N_STATES), dtype=np.uint8)
    for t in range(n_steps):
        bm = 0.5 * (_SIGNS @ llrs[t])  # metric for each of the 8 output words
        cand0 = metrics[_PRED0] + bm[_SYM0]
        cand1 = metrics[_PRED1] + bm[_SYM1]
        choice = cand1 > cand0
        metrics = np.where(choice, cand1, cand0)
        decisions[t] = choice
    bits = np.empty(n_steps, dtype=np.uint8)
    state = 0  # zero-terminated
    for t in range(n_steps - 1, -1, -1):
        bits[t] = state >> 5
        state = ((state << 1) | decisions[t, state]) & 63
    return bits
