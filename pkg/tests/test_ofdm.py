"""Tests for the radix-2 transform and OFDM block processing."""

import numpy as np
import pytest

from voicelink.modem import qpsk_map
from voicelink.ofdm import OfdmParams, dft, ofdm_demodulate, ofdm_modulate


def dft_oracle(x, inverse=False):
    """Direct O(N^2) summation, independent of the radix-2 path."""
    x = np.asarray(x, dtype=np.complex128)
    n = x.size
    k = np.arange(n)
    sign = 1.0 if inverse else -1.0
    kernel = np.exp(sign * 2j * np.pi * np.outer(k, k) / n)
    out = kernel @ x
    return out / n if inverse else out


class TestParams:
    def test_defaults(self):
        p = OfdmParams()
        assert p.n_subcarriers == 8 and p.cp_len == 1 and p.block_len == 9

    @pytest.mark.parametrize("n", [0, 1, 3, 6, 12])
    def test_non_power_of_two_rejected(self, n):
        with pytest.raises(ValueError):
            OfdmParams(n_subcarriers=n)

    def test_cp_bound(self):
        with pytest.raises(ValueError):
            OfdmParams(n_subcarriers=8, cp_len=8)
        with pytest.raises(ValueError):
            OfdmParams(n_subcarriers=8, cp_len=-1)


class TestDft:
    def test_impulse(self):
        x = np.zeros(8, dtype=complex)
        x[0] = 1.0
        np.testing.assert_allclose(dft(x), np.ones(8), atol=1e-12)

    def test_constant(self):
        expected = np.zeros(8, dtype=complex)
        expected[0] = 8.0
        np.testing.assert_allclose(dft(np.ones(8)), expected, atol=1e-12)

    @pytest.mark.parametrize("n", [2, 4, 8, 16])
    def test_matches_direct_oracle(self, n):
        rng = np.random.default_rng(n)
        for _ in range(20):
            x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            np.testing.assert_allclose(dft(x), dft_oracle(x), atol=1e-10)
            np.testing.assert_allclose(
                dft(x, inverse=True), dft_oracle(x, inverse=True), atol=1e-10
            )

    def test_parseval_100_vectors(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            x = rng.standard_normal(16) + 1j * rng.standard_normal(16)
            spectrum = dft_oracle(x)  # direct-summation oracle side
            time_power = np.sum(np.abs(x) ** 2)
            freq_power = np.sum(np.abs(spectrum) ** 2) / x.size
            assert abs(time_power - freq_power) <= 1e-12 * time_power
            np.testing.assert_allclose(dft(x), spectrum, atol=1e-12)

    def test_roundtrip(self):
        rng = np.random.default_rng(9)
        x = rng.standard_normal(32) + 1j * rng.standard_normal(32)
        back = dft(dft(x), inverse=True)
        assert np.abs(back - x).max() <= 1e-12

    def test_bad_length_rejected(self):
        with pytest.raises(ValueError):
            dft(np.ones(6))

    def test_input_not_mutated(self):
        x = np.ones(8, dtype=complex)
        dft(x)
        np.testing.assert_array_equal(x, np.ones(8))


class TestModulate:
    def test_cp_property(self):
        rng = np.random.default_rng(0)
        syms = np.exp(2j * np.pi * rng.random(8))
        blocks = ofdm_modulate(syms, OfdmParams(8, 1))
        assert blocks.shape == (1, 9)
        assert blocks[0, 0] == pytest.approx(blocks[0, 8])

    def test_cp_property_general(self):
        rng = np.random.default_rng(1)
        params = OfdmParams(16, 5)
        syms = rng.standard_normal(32) + 1j * rng.standard_normal(32)
        blocks = ofdm_modulate(syms, params)
        np.testing.assert_allclose(blocks[:, :5], blocks[:, 16:], atol=1e-12)

    def test_subcarrier_zero_impulse(self):
        syms = np.zeros(8, dtype=complex)
        syms[0] = 1.0
        blocks = ofdm_modulate(syms, OfdmParams(8, 1))
        np.testing.assert_allclose(blocks[0, 1:], np.full(8, 1 / 8), atol=1e-12)

    def test_grouping_law(self):
        blocks = ofdm_modulate(np.ones(16, dtype=complex), OfdmParams(8, 1))
        assert blocks.shape == (2, 9)

    def test_partial_group_padded(self):
        blocks = ofdm_modulate(np.ones(9, dtype=complex), OfdmParams(8, 1))
        assert blocks.shape == (2, 9)


class TestDemodulate:
    def test_roundtrip_80_qpsk_symbols(self):
        rng = np.random.default_rng(2)
        syms = qpsk_map(rng.integers(0, 2, 160).astype(np.uint8))
        params = OfdmParams(8, 1)
        back = ofdm_demodulate(ofdm_modulate(syms, params), params, syms.size)
        assert np.abs(back - syms).max() <= 1e-12

    def test_roundtrip_without_cp(self):
        rng = np.random.default_rng(3)
        syms = qpsk_map(rng.integers(0, 2, 160).astype(np.uint8))
        params = OfdmParams(8, 0)
        back = ofdm_demodulate(ofdm_modulate(syms, params), params, syms.size)
        assert np.abs(back - syms).max() <= 1e-12

    def test_wrong_block_length_rejected(self):
        with pytest.raises(ValueError):
            ofdm_demodulate(np.ones((1, 8), dtype=complex), OfdmParams(8, 1))

    def test_truncation_bound(self):
        params = OfdmParams(8, 1)
        blocks = ofdm_modulate(np.ones(8, dtype=complex), params)
        with pytest.raises(ValueError):
            ofdm_demodulate(blocks, params, 9)

    def test_rotation_within_cp_gives_phase_ramp(self):
        rng = np.random.default_rng(4)
        params = OfdmParams(8, 1)
        syms = np.exp(2j * np.pi * rng.random(8))
        time = ofdm_modulate(syms, params)[0, 1:]  # useful part
        delayed = np.roll(time, 1)  # one-sample delay, still cyclic
        block = np.concatenate([delayed[-1:], delayed])
        got = ofdm_demodulate(block, params, 8)
        ramp = np.exp(-2j * np.pi * np.arange(8) / 8)
        np.testing.assert_allclose(got, syms * ramp, atol=1e-12)
