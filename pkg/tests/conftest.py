import numpy as np
import pytest

from wavebench.waveforms.config import QamGrid, WaveformConfig


def random_qpsk_grid(cfg: WaveformConfig, n_symbols: int, seed: int) -> QamGrid:
    rng = np.random.default_rng(seed)
    k = cfg.n_subcarriers
    sym = (
        rng.choice([1.0, -1.0], size=(k, n_symbols))
        + 1j * rng.choice([1.0, -1.0], size=(k, n_symbols))
    ) / np.sqrt(2.0)
    return QamGrid(symbols=sym, modulation_order="qpsk")


def evm_db(tx: np.ndarray, rx: np.ndarray) -> float:
    return float(
        10.0
        * np.log10(np.sum(np.abs(rx - tx) ** 2) / np.sum(np.abs(tx) ** 2) + 1e-30)
    )


@pytest.fixture
def desk_cfg():
    def make(kind: str, **kw) -> WaveformConfig:
        params = dict(fft_size=256, cp_len=18, rb_allocation=(0,))
        params.update(kw)
        return WaveformConfig(waveform_kind=kind, **params)

    return make


@pytest.fixture
def full_cfg():
    def make(kind: str, **kw) -> WaveformConfig:
        params = dict(fft_size=1024, cp_len=72, rb_allocation=(0, 1, 2))
        params.update(kw)
        return WaveformConfig(waveform_kind=kind, **params)

    return make
