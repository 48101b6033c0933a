"""Link-level simulator and benchmark harness for multicarrier waveforms."""

from ._kernels import KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]
