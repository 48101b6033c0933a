import numpy as np
import pytest
from scipy.special import j0

from wavebench.channel import (
    ChannelProfile,
    PaModel,
    apply_channel,
    apply_pa,
    awgn,
    awgn_profile,
    doppler_from_speed,
    etu_profile,
    sample_fading,
)
from wavebench.dsp import ComplexSignal
from wavebench.errors import ConfigurationError

FS = 15.36e6


class TestEtuProfile:
    def test_nine_taps_5us_spread(self):
        prof = etu_profile()
        assert len(prof.tap_delays) == 9
        assert prof.tap_delays.max() == pytest.approx(5e-6)

    def test_unit_total_power(self):
        assert abs(etu_profile().tap_powers_linear.sum() - 1.0) < 1e-12

    def test_delay_quantization_at_lte_rate(self):
        delays = np.rint(etu_profile().tap_delays * FS).astype(int)
        assert delays.tolist() == [0, 1, 2, 3, 4, 8, 25, 35, 77]

    def test_rejects_bad_profile(self):
        with pytest.raises(ConfigurationError):
            ChannelProfile(tap_delays=np.array([0.0, 0.0]), tap_powers_db=np.zeros(2))


class TestDoppler:
    def test_reference_conversion(self):
        assert doppler_from_speed(120, 2e9) == pytest.approx(222.4, abs=0.1)

    def test_zero_speed(self):
        assert doppler_from_speed(0, 2e9) == 0.0

    def test_linearity(self):
        assert doppler_from_speed(60, 2e9) == pytest.approx(111.2, abs=0.05)


class TestFading:
    def test_zero_doppler_is_constant(self):
        real = sample_fading(etu_profile(), 0.0, FS, 5000, seed=1)
        assert np.all(real.coefficients == real.coefficients[:, :1])

    def test_determinism(self):
        a = sample_fading(etu_profile(), 100.0, FS, 4000, seed=7)
        b = sample_fading(etu_profile(), 100.0, FS, 4000, seed=7)
        assert np.array_equal(a.coefficients, b.coefficients)
        c = sample_fading(etu_profile(), 100.0, FS, 4000, seed=8)
        assert not np.array_equal(a.coefficients, c.coefficients)

    def test_per_tap_power(self):
        prof = etu_profile()
        acc = np.zeros(9)
        n_seeds = 12000
        for s in range(n_seeds):
            r = sample_fading(prof, 0.0, FS, 1, seed=s)
            acc += np.abs(r.coefficients[:, 0]) ** 2 / n_seeds
        err_db = 10 * np.log10(acc / prof.tap_powers_linear)
        assert np.max(np.abs(err_db)) < 0.2

    def test_autocorrelation_matches_bessel(self):
        # Ensemble correlation over independent realizations at lags up to
        # f_d * tau = 1.
        prof = awgn_profile()
        fd = 300.0
        fs = 1e6
        lags = np.array([0, 400, 1000, 2000, 3333], dtype=int)
        n_real = 10_000
        acc = np.zeros(len(lags), dtype=complex)
        for s in range(n_real):
            r = sample_fading(prof, fd, fs, int(lags.max()) + 1, seed=s)
            h = r.coefficients[0]
            acc += h[0] * np.conj(h[lags])
        measured = (acc / n_real).real
        expected = j0(2 * np.pi * fd * lags / fs)
        assert np.max(np.abs(measured - expected)) < 0.05


class TestApplyChannel:
    def test_identity_tap(self):
        sig = ComplexSignal(np.arange(10, dtype=complex), FS)
        real = sample_fading(
            ChannelProfile(np.array([0.0]), np.array([0.0])), 0.0, FS, 16, seed=3
        )
        # Normalize the random draw to a unit tap for the identity check.
        real.coefficients[:] = 1.0
        out = apply_channel(sig, real)
        assert np.allclose(out.samples[:10], sig.samples)

    def test_static_two_tap_matches_convolution(self):
        rng = np.random.default_rng(4)
        x = rng.standard_normal(200) + 1j * rng.standard_normal(200)
        prof = ChannelProfile(
            tap_delays=np.array([0.0, 3.0 / FS]), tap_powers_db=np.array([0.0, -3.0])
        )
        real = sample_fading(prof, 0.0, FS, 210, seed=5)
        out = apply_channel(ComplexSignal(x, FS), real)
        h = np.zeros(4, dtype=complex)
        h[0] = real.coefficients[0, 0]
        h[3] = real.coefficients[1, 0]
        ref = np.convolve(x, h)
        assert np.max(np.abs(out.samples - ref)) < 1e-10

    def test_cfo_shifts_tone(self):
        n = np.arange(4096)
        k0 = 100
        fft_size = 1024
        tone = np.exp(2j * np.pi * k0 * n / fft_size)
        prof = awgn_profile()
        real = sample_fading(
            prof, 0.0, FS, 5000, seed=6, cfo_fraction=0.5, fft_size=fft_size
        )
        real.coefficients[:] = 1.0
        out = apply_channel(ComplexSignal(tone, FS), real).samples[:4096]
        spec = np.abs(np.fft.fft(out))
        peak_bin = np.argmax(spec)
        expected = (k0 + 0.5) * 4096 / fft_size
        assert abs(peak_bin - expected) <= 2.0  # half-spacing shift

    def test_cfo_preserves_magnitude(self):
        rng = np.random.default_rng(8)
        x = rng.standard_normal(500) + 1j * rng.standard_normal(500)
        real = sample_fading(
            awgn_profile(), 0.0, FS, 600, seed=9, cfo_fraction=0.3, fft_size=1024
        )
        real.coefficients[:] = 1.0
        out = apply_channel(ComplexSignal(x, FS), real)
        assert np.allclose(np.abs(out.samples[:500]), np.abs(x))

    def test_energy_conserved_in_expectation(self):
        rng = np.random.default_rng(10)
        x = rng.standard_normal(300) + 1j * rng.standard_normal(300)
        e_in = float(np.sum(np.abs(x) ** 2))
        acc = 0.0
        n_seeds = 1500
        for s in range(n_seeds):
            real = sample_fading(etu_profile(), 0.0, FS, 400, seed=s)
            acc += apply_channel(ComplexSignal(x, FS), real).energy / n_seeds
        assert abs(acc / e_in - 1.0) < 0.02

    def test_short_realization_rejected(self):
        sig = ComplexSignal(np.ones(100, dtype=complex), FS)
        real = sample_fading(etu_profile(), 0.0, FS, 50, seed=1)
        with pytest.raises(ConfigurationError):
            apply_channel(sig, real)


class TestPa:
    def test_ideal_passthrough(self):
        sig = ComplexSignal(np.ones(10, dtype=complex), FS)
        assert apply_pa(sig, PaModel(kind="ideal")) is sig

    def test_small_signal_linear(self):
        # 40 dB backoff: gain within 1e-6 of unity after output scaling.
        model = PaModel(kind="rapp", output_power_dbm=-10.0, saturation_power_dbm=30.0)
        x = np.full(100, 1.0 + 0j)
        out = apply_pa(ComplexSignal(x, FS), model).samples
        expected_amp = np.sqrt(10 ** ((-10.0 - 30.0) / 10.0))
        assert np.allclose(np.abs(out), expected_amp, rtol=1e-6)

    def test_saturation_limit(self):
        # 30 dBm saturation = 1 W, so the output amplitude caps at 1.
        model = PaModel(kind="rapp", output_power_dbm=30.0, saturation_power_dbm=30.0)
        x = np.ones(64, dtype=complex)
        x[0] = 1000.0  # deep into saturation after output scaling
        out = apply_pa(ComplexSignal(x, FS), model).samples
        assert np.abs(out[0]) <= 1.0001

    def test_am_am_monotone_and_bounded(self):
        model = PaModel(kind="rapp", output_power_dbm=30.0, saturation_power_dbm=30.0)
        amps = np.linspace(0, 50, 500)
        out = apply_pa(ComplexSignal(amps.astype(complex), FS), model).samples
        mags = np.abs(out)
        assert np.all(np.diff(mags) >= -1e-12)
        assert mags.max() <= 1.0

    def test_phase_preserved(self):
        model = PaModel(kind="rapp", output_power_dbm=20.0, saturation_power_dbm=25.0)
        x = np.exp(1j * np.linspace(0, 6, 50)) * np.linspace(0.1, 4.0, 50)
        out = apply_pa(ComplexSignal(x, FS), model).samples
        assert np.allclose(np.angle(out), np.angle(x))


class TestAwgn:
    def test_infinite_snr_passthrough(self):
        sig = ComplexSignal(np.ones(10, dtype=complex), FS)
        assert awgn(sig, float("inf"), seed=1) is sig

    def test_noise_power_calibrated(self):
        x = np.ones(200_000, dtype=complex)
        out = awgn(ComplexSignal(x, FS), 0.0, seed=2)
        noise_power = np.mean(np.abs(out.samples - x) ** 2)
        assert abs(noise_power - 1.0) < 0.02

    def test_same_seed_identical(self):
        x = ComplexSignal(np.ones(100, dtype=complex), FS)
        a = awgn(x, 10.0, seed=3)
        b = awgn(x, 10.0, seed=3)
        assert np.array_equal(a.samples, b.samples)
