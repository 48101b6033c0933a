"""Hot decoding kernels: compiled extension with pure-Python fallback.

The compiled Viterbi kernel is preferred; set ``WAVEBENCH_FORCE_PY_KERNELS=1``
to force the numpy fallback (used by the backend-equivalence tests and the
benchmark). ``KERNEL_BACKEND`` reports which one is active.
"""

from __future__ import annotations

import os

from ._viterbi_py import viterbi_decode as viterbi_decode_py

if os.environ.get("WAVEBENCH_FORCE_PY_KERNELS") == "1":
    viterbi_decode = viterbi_decode_py
    KERNEL_BACKEND = "python"
else:
    try:
        from ._viterbi_cy import viterbi_decode  # type: ignore[no-redef]

        KERNEL_BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on build environment
        viterbi_decode = viterbi_decode_py
        KERNEL_BACKEND = "python"

__all__ = ["viterbi_decode", "viterbi_decode_py", "KERNEL_BACKEND"]
