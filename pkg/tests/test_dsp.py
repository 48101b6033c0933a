import numpy as np
import pytest

from wavebench.dsp import (
    ComplexSignal,
    FilterTaps,
    PSD_FLOOR_DB,
    convolve,
    design_chebyshev_window,
    design_phydyas_prototype,
    design_windowed_sinc,
    dft,
    idft,
    resample,
    welch_psd,
)
from wavebench.errors import ConfigurationError, MeasurementError


def direct_dft(x, size):
    n = np.arange(size)
    x = np.concatenate([x, np.zeros(size - len(x))])
    return np.array([np.sum(x * np.exp(-2j * np.pi * k * n / size)) for k in range(size)])


class TestDft:
    def test_impulse(self):
        spec = dft(np.array([1.0]), 8)
        assert np.allclose(spec, np.ones(8))

    def test_dc(self):
        spec = dft(np.ones(8), 8)
        assert abs(spec[0] - 8) < 1e-12
        assert np.max(np.abs(spec[1:])) < 1e-12

    def test_matches_direct_oracle(self):
        rng = np.random.default_rng(1)
        x = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        assert np.max(np.abs(dft(x, 64) - direct_dft(x, 64))) < 1e-10

    def test_parseval_against_oracle(self):
        rng = np.random.default_rng(2)
        for n in (8, 64, 1024):
            x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            spec = dft(x, n)
            t_energy = np.sum(np.abs(x) ** 2)
            f_energy = np.sum(np.abs(spec) ** 2) / n
            assert abs(t_energy - f_energy) / t_energy < 1e-10

    def test_round_trip_identity(self):
        rng = np.random.default_rng(3)
        for n in (8, 64, 1024):
            x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            assert np.max(np.abs(idft(dft(x, n), n) - x)) < 1e-10

    @pytest.mark.parametrize("size", [0, 3, 12, 1000])
    def test_rejects_bad_sizes(self, size):
        with pytest.raises(ConfigurationError):
            dft(np.ones(2), size)


class TestPhydyasPrototype:
    def test_frequency_sampling_identity(self):
        # The two outer frequency-domain coefficients are a Nyquist pair.
        h1, h3 = 0.971960, 0.235147
        assert abs(h1**2 + h3**2 - 1.0) < 1e-6

    def test_length_and_symmetry(self):
        taps = design_phydyas_prototype(4, 64)
        assert len(taps) == 4 * 64 - 1
        assert taps.is_symmetric

    def test_energy_normalization(self):
        taps = design_phydyas_prototype(4, 64)
        assert abs(np.sum(taps.taps**2) - 64) < 1e-9

    def test_adjacent_subcarrier_overlap(self):
        # Shifted copies one subcarrier apart keep a nonzero inner product.
        taps = design_phydyas_prototype(4, 64).taps
        n = np.arange(len(taps))
        shifted = taps * np.exp(2j * np.pi * n / 64)
        overlap = abs(np.vdot(shifted, taps)) / np.vdot(taps, taps).real
        assert overlap > 0.1

    def test_rejects_other_overlap(self):
        with pytest.raises(ConfigurationError):
            design_phydyas_prototype(2, 64)


class TestChebyshevWindow:
    def test_degenerate_length_one(self):
        assert design_chebyshev_window(1, 40.0).taps.tolist() == [1.0]

    def test_sidelobe_level(self):
        taps = design_chebyshev_window(73, 40.0).taps
        spec = np.abs(np.fft.fft(taps, 8192))
        spec /= spec.max()
        # Mainlobe ends at the first local minimum; everything past it must
        # sit at the designed equiripple level.
        db = 20 * np.log10(spec[:4096] + 1e-12)
        first_null = np.argmax((db[1:] > db[:-1])[10:]) + 10
        sidelobe = db[first_null:].max()
        assert -40.5 < sidelobe < -39.5

    def test_symmetry(self):
        taps = design_chebyshev_window(72, 60.0)
        assert taps.is_symmetric

    @pytest.mark.parametrize("atten", [10.0, 150.0])
    def test_rejects_attenuation(self, atten):
        with pytest.raises(ConfigurationError):
            design_chebyshev_window(64, atten)


class TestWindowedSinc:
    def test_dc_gain(self):
        taps = design_windowed_sinc(0.2e6, 129, 2e6, "hamming")
        assert abs(np.sum(taps.taps) - 1.0) < 1e-9

    def test_minus_6db_at_cutoff(self):
        fs = 4e6
        taps = design_windowed_sinc(1e6, 129, fs, "hann").taps
        freqs = np.linspace(0, fs / 2, 4096)
        resp = np.abs(
            np.exp(-2j * np.pi * np.outer(freqs, np.arange(129)) / fs) @ taps
        )
        f6 = freqs[np.argmin(np.abs(20 * np.log10(resp) + 6.02))]
        assert abs(f6 - 1e6) / 1e6 < 0.02

    def test_passthrough(self):
        taps = design_windowed_sinc(0.5e6, 1, 2e6, "rectangular")
        assert np.allclose(taps.taps, [1.0])

    def test_rejects_even_length_and_bad_cutoff(self):
        with pytest.raises(ConfigurationError):
            design_windowed_sinc(0.2e6, 128, 2e6, "hann")
        with pytest.raises(ConfigurationError):
            design_windowed_sinc(1.5e6, 129, 2e6, "hann")


class TestConvolve:
    def test_identity_and_impulse(self):
        rng = np.random.default_rng(4)
        x = ComplexSignal(rng.standard_normal(20) + 0j, 1e6)
        out = convolve(x, FilterTaps(np.array([1.0]), 0))
        assert np.allclose(out.samples, x.samples)
        imp = ComplexSignal(np.array([1.0 + 0j]), 1e6)
        taps = rng.standard_normal(7)
        assert np.allclose(convolve(imp, FilterTaps(taps, 3)).samples, taps)

    def test_direct_sum_oracle(self):
        rng = np.random.default_rng(5)
        x = rng.standard_normal(50) + 1j * rng.standard_normal(50)
        h = rng.standard_normal(7) + 1j * rng.standard_normal(7)
        ref = np.zeros(56, dtype=complex)
        for n in range(56):
            for m in range(7):
                if 0 <= n - m < 50:
                    ref[n] += h[m] * x[n - m]
        out = convolve(ComplexSignal(x, 1.0), FilterTaps(h, 3))
        assert np.max(np.abs(out.samples - ref)) < 1e-10

    def test_linearity(self):
        rng = np.random.default_rng(6)
        x = rng.standard_normal(40) + 1j * rng.standard_normal(40)
        y = rng.standard_normal(40) + 1j * rng.standard_normal(40)
        h = FilterTaps(rng.standard_normal(9), 4)
        a, b = rng.standard_normal(2)
        lhs = convolve(ComplexSignal(a * x + b * y, 1.0), h).samples
        rhs = a * convolve(ComplexSignal(x, 1.0), h).samples + b * convolve(
            ComplexSignal(y, 1.0), h
        ).samples
        assert np.max(np.abs(lhs - rhs)) < 1e-10


class TestResample:
    def test_unity(self):
        x = ComplexSignal(np.arange(10, dtype=complex), 1e6)
        out = resample(x, 1, 1, FilterTaps(np.array([1.0]), 0))
        assert np.allclose(out.samples, x.samples)
        assert out.sample_rate == 1e6

    def test_tone_preserved_through_upsampling(self):
        fs, f0, up = 1e6, 37e3, 32
        n = np.arange(256)
        tone = ComplexSignal(np.exp(2j * np.pi * f0 * n / fs), fs)
        taps = design_windowed_sinc(fs / 2 * 0.8, 511, fs * up, "hann")
        out = resample(tone, up, 1, taps)
        assert out.sample_rate == fs * up
        spec = np.fft.fft(out.samples[2048:6144])
        freqs = np.fft.fftfreq(4096, 1 / out.sample_rate)
        peak = freqs[np.argmax(np.abs(spec))]
        assert abs(peak - f0) < out.sample_rate / 4096
        # Exact DTFT correlation at f0 avoids FFT scalloping.
        seg = out.samples[2048:6144]
        m = np.arange(len(seg))
        amp = abs(np.sum(seg * np.exp(-2j * np.pi * f0 * m / out.sample_rate))) / len(seg)
        assert abs(20 * np.log10(amp)) < 0.1

    def test_round_trip(self):
        rng = np.random.default_rng(7)
        fs, up = 1e6, 8
        taps = design_windowed_sinc(fs * 0.4, 255, fs * up, "hann")
        x = rng.standard_normal(128) + 1j * rng.standard_normal(128)
        # Bandlimit the test signal first so the round trip is meaningful.
        lp = design_windowed_sinc(fs * 0.3, 63, fs, "hann")
        xs = np.convolve(x, lp.taps)[31:-31]
        sig = ComplexSignal(xs, fs)
        upsig = resample(sig, up, 1, taps)
        back = resample(upsig, 1, up, taps)
        inner = slice(16, len(xs) - 16)
        err = back.samples[inner] - xs[inner]
        evm = 10 * np.log10(np.sum(np.abs(err) ** 2) / np.sum(np.abs(xs[inner]) ** 2))
        assert evm < -50


class TestWelchPsd:
    def test_tone_localization(self):
        fs = 1e6
        n = np.arange(65536)
        f0 = fs * 100 / 1024
        sig = ComplexSignal(np.exp(2j * np.pi * f0 * n / fs), fs)
        psd = welch_psd(sig, 1024)
        peak = psd.frequencies[np.argmax(psd.power_db)]
        assert abs(peak - f0) <= psd.resolution_bw
        assert psd.power_db.max() - np.median(psd.power_db) > 30

    def test_white_noise_flat(self):
        rng = np.random.default_rng(8)
        x = (rng.standard_normal(120 * 1024) + 1j * rng.standard_normal(120 * 1024)) / np.sqrt(2)
        psd = welch_psd(ComplexSignal(x, 1e6), 1024, 0.5)
        assert psd.power_db.max() - psd.power_db.min() < 3.0
        assert np.all(np.abs(psd.power_db - np.mean(psd.power_db)) < 1.5)

    def test_zero_signal_clamps_to_floor(self):
        psd = welch_psd(ComplexSignal(np.zeros(4096, dtype=complex), 1e6), 256)
        assert np.all(psd.power_db == PSD_FLOOR_DB)

    def test_scale_invariance(self):
        rng = np.random.default_rng(9)
        x = rng.standard_normal(32768) + 1j * rng.standard_normal(32768)
        a = welch_psd(ComplexSignal(x, 1e6), 512)
        b = welch_psd(ComplexSignal(x * (3.0 - 4.0j), 1e6), 512)
        assert np.allclose(a.power_db, b.power_db, atol=1e-9)

    def test_too_short_signal(self):
        with pytest.raises(MeasurementError):
            welch_psd(ComplexSignal(np.ones(100, dtype=complex), 1e6), 1024)
