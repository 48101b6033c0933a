"""Impairment chain: multipath Rayleigh fading, CFO, PA nonlinearity, AWGN.

Fading taps are independent complex processes with the classic isotropic-
scattering Doppler spectrum, generated by a sum of 32 equal-power sinusoids
with per-seed random arrival angles and phases. Everything is reproducible
from (seed, parameters) alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dsp import ComplexSignal
from .errors import ConfigurationError

SPEED_OF_LIGHT = 299_792_458.0

N_SINUSOIDS = 32

# Channel coefficients are refreshed every this many samples; at the speeds
# of interest the phase advance per hold is < 2e-3 rad, far below the Doppler
# autocorrelation scales being modelled.
COHERENCE_STRIDE = 16


@dataclass(frozen=True)
class ChannelProfile:
    tap_delays: np.ndarray  # seconds
    tap_powers_db: np.ndarray  # normalized so linear powers sum to 1
    name: str = ""

    def __post_init__(self):
        delays = np.asarray(self.tap_delays, dtype=float)
        powers = np.asarray(self.tap_powers_db, dtype=float)
        if len(delays) != len(powers):
            raise ConfigurationError("tap delays and powers differ in length")
        if np.any(delays < 0) or np.any(np.diff(delays) <= 0):
            raise ConfigurationError("tap delays must be non-negative, increasing")
        lin = 10.0 ** (powers / 10.0)
        powers = powers - 10.0 * np.log10(lin.sum())
        object.__setattr__(self, "tap_delays", delays)
        object.__setattr__(self, "tap_powers_db", powers)

    @property
    def tap_powers_linear(self) -> np.ndarray:
        return 10.0 ** (self.tap_powers_db / 10.0)


@dataclass(frozen=True)
class ChannelRealization:
    """Time-varying tapped delay line plus CFO for one trial."""

    tap_delays_samples: np.ndarray  # integer sample delays
    coefficients: np.ndarray  # (n_taps, n_samples) complex gains
    cfo_hz: float
    sample_rate: float
    doppler_hz: float
    seed: int

    @property
    def n_samples(self) -> int:
        return self.coefficients.shape[1]

    @property
    def max_delay(self) -> int:
        return int(self.tap_delays_samples.max()) if len(self.tap_delays_samples) else 0

    def frequency_response(self, tones: np.ndarray, fft_size: int,
                           sample_indices: np.ndarray) -> np.ndarray:
        """Per-tone response at the given sample instants, (n_tones, n_inst)."""
        idx = np.clip(np.asarray(sample_indices, dtype=int), 0, self.n_samples - 1)
        coeff = self.coefficients[:, idx]  # (taps, inst)
        phases = np.exp(
            -2j
            * np.pi
            * np.outer(np.asarray(tones, dtype=float), self.tap_delays_samples)
            / fft_size
        )  # (tones, taps)
        return phases @ coeff


def etu_profile() -> ChannelProfile:
    """Nine-tap urban profile with 5 us maximum delay spread."""
    delays_ns = [0, 50, 120, 200, 230, 500, 1600, 2300, 5000]
    powers_db = [-1.0, -1.0, -1.0, 0.0, 0.0, 0.0, -3.0, -5.0, -7.0]
    return ChannelProfile(
        tap_delays=np.array(delays_ns) * 1e-9,
        tap_powers_db=np.array(powers_db),
        name="etu",
    )


def awgn_profile() -> ChannelProfile:
    return ChannelProfile(
        tap_delays=np.array([0.0]), tap_powers_db=np.array([0.0]), name="awgn"
    )


def doppler_from_speed(speed_kmh: float, carrier_hz: float) -> float:
    """Maximum Doppler shift for a terminal speed and carrier frequency."""
    if speed_kmh < 0:
        raise ConfigurationError("speed must be non-negative")
    return speed_kmh / 3.6 * carrier_hz / SPEED_OF_LIGHT


def sample_fading(
    profile: ChannelProfile,
    doppler_hz: float,
    sample_rate: float,
    n_samples: int,
    seed: int,
    cfo_fraction: float = 0.0,
    fft_size: int | None = None,
) -> ChannelRealization:
    """Draw one fading realization; doppler 0 gives a block-fading constant.

    ``cfo_fraction`` is normalized to the subcarrier spacing and needs
    ``fft_size`` to resolve it into Hz.
    """
    if doppler_hz < 0:
        raise ConfigurationError("doppler_hz must be non-negative")
    rng = np.random.default_rng(seed)
    delays = np.rint(profile.tap_delays * sample_rate).astype(int)
    amps = np.sqrt(profile.tap_powers_linear / N_SINUSOIDS)
    n_taps = len(delays)
    coeffs = np.empty((n_taps, n_samples), dtype=np.complex128)
    for tap in range(n_taps):
        angles = rng.uniform(0.0, 2.0 * np.pi, N_SINUSOIDS)
        phases = rng.uniform(0.0, 2.0 * np.pi, N_SINUSOIDS)
        if doppler_hz == 0.0:
            coeffs[tap, :] = amps[tap] * np.sum(np.exp(1j * phases))
            continue
        omega = 2.0 * np.pi * doppler_hz * np.cos(angles) / sample_rate
        grid = np.arange(0, n_samples, COHERENCE_STRIDE, dtype=float)
        held = amps[tap] * np.exp(
            1j * (grid[:, None] * omega[None, :] + phases[None, :])
        ).sum(axis=1)
        coeffs[tap, :] = np.repeat(held, COHERENCE_STRIDE)[:n_samples]
    cfo_hz = 0.0
    if cfo_fraction:
        if not fft_size:
            raise ConfigurationError("cfo_fraction needs fft_size to resolve to Hz")
        cfo_hz = cfo_fraction * sample_rate / fft_size
    return ChannelRealization(
        tap_delays_samples=delays,
        coefficients=coeffs,
        cfo_hz=cfo_hz,
        sample_rate=sample_rate,
        doppler_hz=doppler_hz,
        seed=seed,
    )


def apply_channel(sig: ComplexSignal, realization: ChannelRealization) -> ComplexSignal:
    """Time-varying tapped-delay-line convolution followed by CFO rotation."""
    x = sig.samples
    out_len = len(x) + realization.max_delay
    if realization.n_samples < out_len:
        raise ConfigurationError(
            f"realization spans {realization.n_samples} samples, signal needs {out_len}"
        )
    y = np.zeros(out_len, dtype=np.complex128)
    for tap, d in enumerate(realization.tap_delays_samples):
        y[d : d + len(x)] += realization.coefficients[tap, d : d + len(x)] * x
    if realization.cfo_hz:
        n = np.arange(out_len)
        y *= np.exp(2j * np.pi * realization.cfo_hz * n / realization.sample_rate)
    return ComplexSignal(samples=y, sample_rate=sig.sample_rate)


@dataclass(frozen=True)
class PaModel:
    kind: str = "ideal"  # "ideal" | "rapp"
    smoothness: float = 3.0
    output_power_dbm: float = 20.0
    saturation_power_dbm: float = 30.0

    def __post_init__(self):
        if self.kind not in ("ideal", "rapp"):
            raise ConfigurationError(f"unknown PA kind {self.kind!r}")
        if self.kind == "rapp" and self.saturation_power_dbm < self.output_power_dbm:
            raise ConfigurationError("saturation power below output power")


def apply_pa(sig: ComplexSignal, model: PaModel) -> ComplexSignal:
    """Scale to the configured output power, then AM/AM compression.

    The ideal kind passes the signal through untouched. For the rapp kind
    the amplitude maps to A / (1 + (A/A_sat)^(2p))^(1/(2p)); phase is kept.
    """
    if model.kind == "ideal":
        return sig
    p_out = 10.0 ** ((model.output_power_dbm - 30.0) / 10.0)
    p_sat = 10.0 ** ((model.saturation_power_dbm - 30.0) / 10.0)
    if p_sat <= 0:
        raise ConfigurationError("saturation power must be positive")
    power = sig.power
    if power == 0:
        return sig
    x = sig.samples * np.sqrt(p_out / power)
    a_sat = np.sqrt(p_sat)
    amp = np.abs(x)
    p2 = 2.0 * model.smoothness
    comp = (1.0 + (amp / a_sat) ** p2) ** (1.0 / p2)
    return ComplexSignal(samples=x / comp, sample_rate=sig.sample_rate)


def awgn_variance(sig: ComplexSignal, noise_var: float, seed: int) -> ComplexSignal:
    """Add circularly-symmetric Gaussian noise of a given complex variance."""
    if noise_var == 0:
        return sig
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(len(sig)) + 1j * rng.standard_normal(len(sig))
    noise *= np.sqrt(noise_var / 2.0)
    return ComplexSignal(samples=sig.samples + noise, sample_rate=sig.sample_rate)


def awgn(sig: ComplexSignal, snr_db: float, seed: int) -> ComplexSignal:
    """Add circularly-symmetric Gaussian noise at the given SNR.

    SNR is referenced to the measured mean power over the occupied (nonzero)
    samples of the input. ``snr_db=inf`` passes the signal through.
    """
    if np.isinf(snr_db) and snr_db > 0:
        return sig
    power = sig.power
    if power == 0:
        return sig
    return awgn_variance(sig, power / 10.0 ** (snr_db / 10.0), seed)
