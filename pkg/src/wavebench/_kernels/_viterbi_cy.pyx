# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Viterbi kernel for the rate-1/3, constraint-length-7 code."""

import numpy as np

cimport numpy as cnp

from ._tables import output_symbols

cnp.import_array()

cdef int N_STATES = 64
cdef double NEG_INF = -1e18

_OUT = output_symbols()

# Flattened transition tables, built once at import.
cdef int[64] PRED0
cdef int[64] PRED1
cdef int[64] SYM0
cdef int[64] SYM1
cdef int[64] IN_BIT

cdef int _ns, _p0, _p1
for _ns in range(64):
    _p0 = (_ns << 1) & 63
    _p1 = _p0 | 1
    PRED0[_ns] = _p0
    PRED1[_ns] = _p1
    IN_BIT[_ns] = _ns >> 5
    SYM0[_ns] = _OUT[_p0, _ns >> 5]
    SYM1[_ns] = _OUT[_p1, _ns >> 5]


def viterbi_decode(cnp.ndarray[cnp.float64_t, ndim=2] llrs):
    """Soft Viterbi decode of zero-terminated rate-1/3 LLR triples."""
    cdef int n_steps = llrs.shape[0]
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] decisions = np.empty(
        (n_steps, N_STATES), dtype=np.uint8
    )
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] bits = np.empty(n_steps, dtype=np.uint8)
    cdef double[64] metrics
    cdef double[64] nxt
    cdef double[8] bm
    cdef double l0, l1, l2, c0, c1
    cdef int t, s, w, state
    for s in range(N_STATES):
        metrics[s] = NEG_INF
    metrics[0] = 0.0
    for t in range(n_steps):
        l0 = 0.5 * llrs[t, 0]
        l1 = 0.5 * llrs[t, 1]
        l2 = 0.5 * llrs[t, 2]
        for w in range(8):
            bm[w] = (
                (l0 if not (w & 4) else -l0)
                + (l1 if not (w & 2) else -l1)
                + (l2 if not (w & 1) else -l2)
            )
        for s in range(N_STATES):
            c0 = metrics[PRED0[s]] + bm[SYM0[s]]
            c1 = metrics[PRED1[s]] + bm[SYM1[s]]
            if c1 > c0:
                nxt[s] = c1
                decisions[t, s] = 1
            else:
                nxt[s] = c0
                decisions[t, s] = 0
        for s in range(N_STATES):
            metrics[s] = nxt[s]
    state = 0
    for t in range(n_steps - 1, -1, -1):
        bits[t] = state >> 5
        state = ((state << 1) | decisions[t, state]) & 63
    return bits
