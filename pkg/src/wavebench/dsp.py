"""Deterministic DSP primitives: transforms, filter design, resampling, PSD.

Conventions fixed project-wide:

* DFT scaling: forward transform is unnormalized, the inverse carries the
  1/size factor, so ``idft(dft(x)) == x``.
* All ``design_*`` filters are linear phase (symmetric taps) and carry their
  group delay in ``FilterTaps.nominal_delay`` so downstream stages can align
  without per-caller fudge factors.
* PSD estimates are clamped at ``PSD_FLOOR_DB`` so log output stays finite.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import signal as _sig

from .errors import ConfigurationError, MeasurementError

PSD_FLOOR_DB = -200.0


@dataclass(frozen=True)
class ComplexSignal:
    """Complex baseband samples at a stated sampling rate."""

    samples: np.ndarray
    sample_rate: float

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise ConfigurationError(f"sample_rate must be > 0, got {self.sample_rate}")
        object.__setattr__(
            self, "samples", np.asarray(self.samples, dtype=np.complex128)
        )

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def energy(self) -> float:
        return float(np.sum(np.abs(self.samples) ** 2))

    @property
    def power(self) -> float:
        """Mean sample power over the nonzero extent of the signal."""
        occupied = np.abs(self.samples) > 0
        if not occupied.any():
            return 0.0
        return float(np.mean(np.abs(self.samples[occupied]) ** 2))


@dataclass(frozen=True)
class FilterTaps:
    """FIR coefficients plus the group delay used for alignment."""

    taps: np.ndarray
    nominal_delay: int

    def __post_init__(self):
        taps = np.asarray(self.taps)
        if taps.ndim != 1 or len(taps) < 1:
            raise ConfigurationError("taps must be a non-empty 1-D sequence")
        object.__setattr__(self, "taps", taps)

    def __len__(self) -> int:
        return len(self.taps)

    @property
    def is_symmetric(self) -> bool:
        t = self.taps
        scale = np.max(np.abs(t)) or 1.0
        return bool(np.allclose(t, t[::-1], rtol=0, atol=1e-12 * scale))


@dataclass(frozen=True)
class PsdEstimate:
    """PSD in dB relative to a stated reference, on increasing bin centers."""

    frequencies: np.ndarray
    power_db: np.ndarray
    resolution_bw: float

    def __post_init__(self):
        f = np.asarray(self.frequencies, dtype=float)
        p = np.asarray(self.power_db, dtype=float)
        if len(f) != len(p):
            raise MeasurementError("frequencies and power_db lengths differ")
        if self.resolution_bw <= 0:
            raise MeasurementError("resolution_bw must be > 0")
        if len(f) > 1 and not np.all(np.diff(f) > 0):
            raise MeasurementError("frequencies must be strictly increasing")
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "power_db", p)

    def band_mean_db(self, f_lo: float, f_hi: float) -> float:
        """Mean power (linear average, returned in dB) over [f_lo, f_hi]."""
        mask = (self.frequencies >= f_lo) & (self.frequencies <= f_hi)
        if not mask.any():
            raise MeasurementError(f"no PSD bins inside [{f_lo}, {f_hi}] Hz")
        lin = 10.0 ** (self.power_db[mask] / 10.0)
        return float(10.0 * np.log10(max(np.mean(lin), 10.0 ** (PSD_FLOOR_DB / 10.0))))


def _check_pow2(size: int) -> None:
    if size <= 0 or (size & (size - 1)) != 0:
        raise ConfigurationError(f"transform size must be a power of two, got {size}")


def dft(x: np.ndarray, size: int) -> np.ndarray:
    """Forward DFT, unnormalized. Zero-pads ``x`` up to ``size``."""
    _check_pow2(size)
    x = np.asarray(x, dtype=np.complex128)
    if len(x) > size:
        raise ConfigurationError(f"input length {len(x)} exceeds transform size {size}")
    return np.fft.fft(x, n=size)


def idft(spectrum: np.ndarray, size: int | None = None) -> np.ndarray:
    """Inverse DFT with the project-wide 1/size scaling."""
    spectrum = np.asarray(spectrum, dtype=np.complex128)
    size = len(spectrum) if size is None else size
    _check_pow2(size)
    if len(spectrum) != size:
        raise ConfigurationError("spectrum length must equal transform size")
    return np.fft.ifft(spectrum, n=size)


def design_phydyas_prototype(overlap_factor: int, n_subcarriers: int) -> FilterTaps:
    """Frequency-sampling prototype for the per-subcarrier filter bank.

    Length is ``overlap_factor*n_subcarriers - 1``, symmetric, scaled so the
    tap energy equals ``n_subcarriers``. Only overlap factor 4 is supported;
    its tail spans four multicarrier symbol intervals.
    """
    if overlap_factor != 4:
        raise ConfigurationError(
            f"only overlap factor 4 is supported, got {overlap_factor}"
        )
    if n_subcarriers < 2:
        raise ConfigurationError("n_subcarriers must be >= 2")
    # Frequency-sampling coefficients; h1^2 + h3^2 == 1 keeps the design
    # near-perfect-reconstruction.
    h1 = 0.971960
    h2 = np.sqrt(2.0) / 2.0
    h3 = 0.235147
    total = overlap_factor * n_subcarriers
    m = np.arange(1, total)  # length 4K - 1
    taps = (
        1.0
        + 2.0 * (-h1 * np.cos(2 * np.pi * m / total)
                 + h2 * np.cos(4 * np.pi * m / total)
                 - h3 * np.cos(6 * np.pi * m / total))
    )
    taps *= np.sqrt(n_subcarriers / np.sum(taps**2))
    return FilterTaps(taps=taps, nominal_delay=(len(taps) - 1) // 2)


def design_chebyshev_window(length: int, sidelobe_atten_db: float) -> FilterTaps:
    """Equiripple-sidelobe window, symmetric, max tap 1."""
    if length < 1:
        raise ConfigurationError("length must be >= 1")
    if not 20.0 <= sidelobe_atten_db <= 120.0:
        raise ConfigurationError(
            f"sidelobe attenuation must be in [20, 120] dB, got {sidelobe_atten_db}"
        )
    if length == 1:
        taps = np.array([1.0])
    else:
        with warnings.catch_warnings():
            # scipy warns about spectral-analysis use below 45 dB; this is a
            # filter design choice, not an estimator.
            warnings.simplefilter("ignore", UserWarning)
            taps = _sig.windows.chebwin(length, at=sidelobe_atten_db, sym=True)
        taps = taps / np.max(taps)
        # chebwin is symmetric up to float round-off; make it exact.
        taps = 0.5 * (taps + taps[::-1])
    return FilterTaps(taps=taps, nominal_delay=(length - 1) // 2)


_WINDOWS = {
    "hann": np.hanning,
    "hamming": np.hamming,
    "rectangular": np.ones,
}


def design_windowed_sinc(
    cutoff_hz: float, length: int, sample_rate: float, window: str = "hann"
) -> FilterTaps:
    """Lowpass windowed-sinc with unity DC gain, odd length, symmetric."""
    if length < 1 or length % 2 == 0:
        raise ConfigurationError(f"length must be odd and >= 1, got {length}")
    if not 0 < cutoff_hz < sample_rate / 2:
        raise ConfigurationError(
            f"cutoff {cutoff_hz} Hz outside (0, {sample_rate / 2}) Hz"
        )
    if window not in _WINDOWS:
        raise ConfigurationError(f"unknown window {window!r}, expected {sorted(_WINDOWS)}")
    mid = (length - 1) // 2
    n = np.arange(length) - mid
    taps = 2.0 * cutoff_hz / sample_rate * np.sinc(2.0 * cutoff_hz / sample_rate * n)
    taps = taps * _WINDOWS[window](length)
    taps = taps / np.sum(taps)
    return FilterTaps(taps=taps, nominal_delay=mid)


def convolve(sig: ComplexSignal, taps: FilterTaps) -> ComplexSignal:
    """Full linear convolution; output length len(x)+len(taps)-1."""
    if len(sig) == 0:
        raise ConfigurationError("cannot convolve an empty signal")
    out = np.convolve(sig.samples, np.asarray(taps.taps, dtype=np.complex128))
    return ComplexSignal(samples=out, sample_rate=sig.sample_rate)


def resample(
    sig: ComplexSignal, up: int, down: int, antialias: FilterTaps
) -> ComplexSignal:
    """Zero-insert by ``up``, filter, keep every ``down``-th sample.

    The filter group delay is compensated so a tone keeps its phase. The
    antialias cutoff must sit at or below the narrower Nyquist zone.
    """
    if up < 1 or down < 1:
        raise ConfigurationError("up and down factors must be >= 1")
    x = sig.samples
    if up > 1:
        stuffed = np.zeros(len(x) * up, dtype=np.complex128)
        stuffed[::up] = x
    else:
        stuffed = x
    # Gain `up` restores the tone amplitude lost to zero insertion.
    filt = np.convolve(stuffed, antialias.taps.astype(np.complex128)) * up
    aligned = filt[antialias.nominal_delay : antialias.nominal_delay + len(stuffed)]
    out = aligned[::down]
    return ComplexSignal(samples=out, sample_rate=sig.sample_rate * up / down)


def welch_psd(
    sig: ComplexSignal,
    segment_len: int = 1024,
    overlap_fraction: float = 0.5,
    window: str = "hann",
    norm_band: tuple[float, float] | None = None,
) -> PsdEstimate:
    """Averaged-periodogram PSD in dB.

    ``norm_band`` selects the 0 dB reference: the linear-mean PSD inside that
    frequency band (the harness passes the allocated band so a plain
    multicarrier reference reads 0 dB in-band). Without it the peak bin is the
    reference. Either way the result is invariant to scaling the input.
    """
    if segment_len < 16:
        raise MeasurementError(f"segment_len must be >= 16, got {segment_len}")
    if len(sig) < segment_len:
        raise MeasurementError(
            f"signal length {len(sig)} shorter than segment {segment_len}"
        )
    if not 0 <= overlap_fraction < 1:
        raise MeasurementError("overlap_fraction must be in [0, 1)")
    freqs, pxx = _sig.welch(
        sig.samples,
        fs=sig.sample_rate,
        window=window,
        nperseg=segment_len,
        noverlap=int(segment_len * overlap_fraction),
        detrend=False,
        return_onesided=False,
        scaling="density",
    )
    freqs = np.fft.fftshift(freqs)
    pxx = np.fft.fftshift(pxx)
    floor_lin = 10.0 ** (PSD_FLOOR_DB / 10.0)
    if norm_band is not None:
        mask = (freqs >= norm_band[0]) & (freqs <= norm_band[1])
        if not mask.any():
            raise MeasurementError("norm_band contains no PSD bins")
        ref = float(np.mean(pxx[mask]))
    else:
        ref = float(np.max(pxx))
    if ref <= 0:
        # Degenerate all-zero input: report the clamped floor everywhere.
        power_db = np.full_like(pxx, PSD_FLOOR_DB)
    else:
        power_db = 10.0 * np.log10(np.maximum(pxx / ref, floor_lin))
    return PsdEstimate(
        frequencies=freqs,
        power_db=power_db,
        resolution_bw=sig.sample_rate / segment_len,
    )
