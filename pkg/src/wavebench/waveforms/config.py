"""Waveform configuration, symbol grids, and shared framing arithmetic.

Subcarrier mapping: the allocated resource blocks live on a grid of
``rb_size`` tones per RB, centered on DC with the DC bin left unused (tones
at or above the grid midpoint shift up by one). Tone indices are therefore
signed integers; ``tone % fft_size`` gives the FFT bin.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..errors import ConfigurationError, FramingError

WAVEFORM_KINDS = ("cpofdm", "fbmc", "rbfofdm", "ufmc", "fofdm")


@dataclass(frozen=True)
class WaveformConfig:
    waveform_kind: str
    fft_size: int = 1024
    cp_len: int = 72
    rb_size: int = 12
    rb_allocation: tuple[int, ...] = (0, 1, 2)
    subcarrier_spacing: float = 15e3
    # Per-kind filter parameters; None selects the documented default.
    ufmc_filter_len: int | None = None  # default cp_len + 1
    ufmc_sidelobe_db: float = 40.0
    fofdm_filter_len: int | None = None  # default 7*fft_size/16 + 1
    fofdm_tone_offset: float = 3.5  # cutoff margin beyond the band edge
    rbf_fft_size: int = 32
    rbf_filter_len: int | None = None  # default scales as 113 @ N=1024
    rbf_cutoff_spacings: float = 9.0  # lowpass cutoff from RB center
    fbmc_overlap: int = 4

    def __post_init__(self):
        if self.waveform_kind not in WAVEFORM_KINDS:
            raise ConfigurationError(
                f"unknown waveform {self.waveform_kind!r}; valid kinds: "
                f"{', '.join(WAVEFORM_KINDS)}"
            )
        n = self.fft_size
        if n <= 0 or n & (n - 1):
            raise ConfigurationError(f"fft_size must be a power of two, got {n}")
        if not self.rb_allocation:
            raise ConfigurationError("rb_allocation must name at least one RB")
        if len(set(self.rb_allocation)) != len(self.rb_allocation):
            raise ConfigurationError("rb_allocation contains duplicates")
        if min(self.rb_allocation) < 0:
            raise ConfigurationError("RB indices must be non-negative")
        if not 0 <= self.cp_len < n:
            raise ConfigurationError(f"cp_len must be in [0, {n}), got {self.cp_len}")
        object.__setattr__(self, "rb_allocation", tuple(sorted(self.rb_allocation)))
        if self.grid_span + 1 > n:
            raise ConfigurationError(
                f"allocation span {self.grid_span} does not fit in fft_size {n}"
            )

    # -- derived framing quantities -------------------------------------

    @property
    def n_subcarriers(self) -> int:
        return self.rb_size * len(self.rb_allocation)

    @property
    def grid_span(self) -> int:
        return self.rb_size * (max(self.rb_allocation) + 1)

    @property
    def sample_rate(self) -> float:
        return self.fft_size * self.subcarrier_spacing

    def rb_tones(self, rb: int) -> np.ndarray:
        """Signed tone indices of one RB (DC skipped)."""
        s = np.arange(rb * self.rb_size, (rb + 1) * self.rb_size)
        tones = s - self.grid_span // 2
        tones = np.where(tones >= 0, tones + 1, tones)
        return tones

    @property
    def allocated_tones(self) -> np.ndarray:
        return np.concatenate([self.rb_tones(rb) for rb in self.rb_allocation])

    @property
    def allocated_bins(self) -> np.ndarray:
        return self.allocated_tones % self.fft_size

    @property
    def band_edges_hz(self) -> tuple[float, float]:
        """Outer edges of the allocated band (half a spacing past end tones)."""
        tones = self.allocated_tones
        df = self.subcarrier_spacing
        return ((tones.min() - 0.5) * df, (tones.max() + 0.5) * df)

    # -- resolved filter parameters --------------------------------------

    @property
    def ufmc_len(self) -> int:
        return self.ufmc_filter_len if self.ufmc_filter_len else self.cp_len + 1

    @property
    def fofdm_len(self) -> int:
        if self.fofdm_filter_len:
            return self.fofdm_filter_len
        return 7 * self.fft_size // 16 + 1

    @property
    def rbf_len(self) -> int:
        if self.rbf_filter_len:
            return self.rbf_filter_len
        n = max(9, round(113 * self.fft_size / 1024))
        return n if n % 2 == 1 else n + 1

    def for_kind(self, kind: str) -> "WaveformConfig":
        return replace(self, waveform_kind=kind)


@dataclass(frozen=True)
class QamGrid:
    """K x M matrix of modulation symbols (subcarrier x symbol index)."""

    symbols: np.ndarray
    modulation_order: str

    def __post_init__(self):
        sym = np.asarray(self.symbols, dtype=np.complex128)
        if sym.ndim != 2:
            raise FramingError("QamGrid symbols must be a 2-D (K x M) array")
        object.__setattr__(self, "symbols", sym)

    @property
    def n_subcarriers(self) -> int:
        return self.symbols.shape[0]

    @property
    def n_symbols(self) -> int:
        return self.symbols.shape[1]


@dataclass(frozen=True)
class DemodGrid:
    """Pre-equalization receiver grid.

    ``symbols`` is K x M for the block waveforms. The staggered filter-bank
    waveform returns K x 2M half-symbol samples (``oqam_half_symbols`` set);
    pairing back into complex QAM estimates happens after equalization.
    ``per_bin_noise_scale`` is the nominal per-tone noise-variance multiplier
    relative to plain CP reception.
    """

    symbols: np.ndarray
    per_bin_noise_scale: np.ndarray
    oqam_half_symbols: bool = False

    def __post_init__(self):
        object.__setattr__(
            self, "symbols", np.asarray(self.symbols, dtype=np.complex128)
        )
        object.__setattr__(
            self,
            "per_bin_noise_scale",
            np.asarray(self.per_bin_noise_scale, dtype=float),
        )


def check_grid(grid: QamGrid, cfg: WaveformConfig) -> None:
    if grid.n_subcarriers != cfg.n_subcarriers:
        raise ConfigurationError(
            f"grid has {grid.n_subcarriers} subcarriers, config allocates "
            f"{cfg.n_subcarriers}"
        )


def unit_power_scale(modulate_fn, cfg: WaveformConfig, samples_per_symbol: float) -> float:
    """Scale making the steady-state mean transmit sample power exactly 1.

    Ensemble average over unit-power constellations, computed from the
    single-symbol pulse energies of every allocated tone (real and imaginary
    branches separately, since the staggered waveform is only R-linear).
    """
    k = cfg.n_subcarriers
    probe = np.zeros((k, 1), dtype=np.complex128)
    energy = 0.0
    for ki in range(k):
        for amp in (1.0, 1.0j):
            probe[:] = 0
            probe[ki, 0] = amp
            pulse = modulate_fn(probe, cfg)
            energy += 0.5 * float(np.sum(np.abs(pulse) ** 2))
    mean_power = energy / samples_per_symbol
    return 1.0 / np.sqrt(mean_power)
