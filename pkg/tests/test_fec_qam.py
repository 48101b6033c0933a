import itertools

import numpy as np
import pytest
from scipy.stats import norm

from wavebench._kernels import viterbi_decode_py
from wavebench._kernels._tables import output_symbols
from wavebench.errors import ConfigurationError, FramingError
from wavebench.link.fec import coded_len, fec_decode, fec_encode, info_len_for_coded
from wavebench.link.qam import hard_decisions, qam_demap_llr, qam_map


class TestFec:
    def test_all_zero_input(self):
        cb = fec_encode(np.zeros(50, dtype=np.uint8))
        assert len(cb.coded_bits) == 3 * 56
        assert not cb.coded_bits.any()

    def test_coded_length(self):
        assert coded_len(100) == 318
        assert info_len_for_coded(318) == 100
        with pytest.raises(FramingError):
            info_len_for_coded(317)

    @pytest.mark.parametrize("n_info", [100, 1000, 6000])
    def test_noiseless_round_trip(self, n_info):
        rng = np.random.default_rng(n_info)
        bits = rng.integers(0, 2, n_info, dtype=np.uint8)
        llrs = (1.0 - 2.0 * fec_encode(bits).coded_bits) * 8.0
        assert np.array_equal(fec_decode(llrs), bits)

    def test_single_flip_corrected(self):
        rng = np.random.default_rng(11)
        bits = rng.integers(0, 2, 200, dtype=np.uint8)
        llrs = (1.0 - 2.0 * fec_encode(bits).coded_bits) * 8.0
        for pos in (0, 100, 300, len(llrs) - 1):
            corrupted = llrs.copy()
            corrupted[pos] = -corrupted[pos]
            assert np.array_equal(fec_decode(corrupted), bits)

    def test_free_distance_is_15(self):
        best = 99
        for k in range(1, 11):
            for bits in itertools.product((0, 1), repeat=k):
                if not any(bits):
                    continue
                w = int(fec_encode(np.array(bits, dtype=np.uint8)).coded_bits.sum())
                best = min(best, w)
        assert best == 15

    def test_backends_agree(self):
        from wavebench._kernels import viterbi_decode

        rng = np.random.default_rng(12)
        for _ in range(5):
            llrs = rng.standard_normal((rng.integers(10, 400), 3))
            llrs = np.ascontiguousarray(llrs)
            assert np.array_equal(viterbi_decode(llrs), viterbi_decode_py(llrs))

    def test_trellis_table_shape(self):
        table = output_symbols()
        assert table.shape == (64, 2)
        assert table.min() >= 0 and table.max() <= 7


class TestQamMap:
    def test_qpsk_reference_point(self):
        sym = qam_map(np.array([0, 0], dtype=np.uint8), "qpsk")
        assert np.allclose(sym, (1 + 1j) / np.sqrt(2))

    def test_unit_average_power(self):
        for order, bps in (("qpsk", 2), ("qam16", 4)):
            bits = np.array(
                list(itertools.product((0, 1), repeat=bps)), dtype=np.uint8
            ).reshape(-1)
            sym = qam_map(bits, order)
            assert abs(np.mean(np.abs(sym) ** 2) - 1.0) < 1e-12

    def test_qam16_levels(self):
        bits = np.array(list(itertools.product((0, 1), repeat=4)), dtype=np.uint8)
        sym = qam_map(bits.reshape(-1), "qam16")
        levels = np.unique(np.round(sym.real * np.sqrt(10)))
        assert np.allclose(levels, [-3, -1, 1, 3])

    @pytest.mark.parametrize("order", ["qpsk", "qam16"])
    def test_map_demap_round_trip(self, order):
        rng = np.random.default_rng(13)
        bits = rng.integers(0, 2, 4000, dtype=np.uint8)
        sym = qam_map(bits, order)
        llrs = qam_demap_llr(sym, 1.0, order)
        assert np.array_equal(hard_decisions(llrs), bits)

    def test_rejects_indivisible_length(self):
        with pytest.raises(FramingError):
            qam_map(np.array([0, 1, 0], dtype=np.uint8), "qpsk")


class TestDemapLlr:
    def test_noiseless_qpsk_signs(self):
        llrs = qam_demap_llr(np.array([(1 + 1j) / np.sqrt(2)]), 1.0, "qpsk")
        assert np.all(llrs > 0)  # decodes to bits 00

    def test_origin_gives_zero_llrs(self):
        llrs = qam_demap_llr(np.array([0.0 + 0.0j]), 1.0, "qpsk")
        assert np.allclose(llrs, 0.0, atol=1e-12)
        # 16QAM: the sign bits are balanced at the origin; the magnitude
        # bits are not (origin is closer to the +-1 levels than +-3).
        llrs16 = qam_demap_llr(np.array([0.0 + 0.0j]), 1.0, "qam16")
        assert np.allclose(llrs16[[0, 1]], 0.0, atol=1e-12)
        assert np.all(llrs16[[2, 3]] != 0.0)

    def test_rejects_nonpositive_variance(self):
        with pytest.raises(ConfigurationError):
            qam_demap_llr(np.array([1.0 + 0j]), 0.0, "qpsk")

    def test_qpsk_ber_matches_q_function(self):
        # Hard-decision BER at Eb/N0 = 4 dB against the closed form.
        rng = np.random.default_rng(14)
        n = 400_000
        bits = rng.integers(0, 2, 2 * n, dtype=np.uint8)
        sym = qam_map(bits, "qpsk")
        ebn0 = 10 ** (4 / 10)
        noise_var = 1.0 / (2 * ebn0)  # Es = 2 Eb
        noise = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) * np.sqrt(
            noise_var / 2
        )
        llrs = qam_demap_llr(sym + noise, noise_var, "qpsk")
        ber = np.mean(hard_decisions(llrs) != bits)
        ber_ref = norm.sf(np.sqrt(2 * ebn0))
        assert abs(ber - ber_ref) / ber_ref < 0.05
