"""Tests for QPSK mapping and hard demapping."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from voicelink.modem import qpsk_demap, qpsk_map

HALF_SQRT2 = 1.0 / math.sqrt(2.0)

CONSTELLATION = {
    (0, 0): (+HALF_SQRT2, +HALF_SQRT2),
    (0, 1): (+HALF_SQRT2, -HALF_SQRT2),
    (1, 0): (-HALF_SQRT2, +HALF_SQRT2),
    (1, 1): (-HALF_SQRT2, -HALF_SQRT2),
}


class TestMap:
    @pytest.mark.parametrize("pair,point", sorted(CONSTELLATION.items()))
    def test_mapping_table(self, pair, point):
        sym = qpsk_map(list(pair))[0]
        assert sym.real == pytest.approx(point[0], abs=1e-12)
        assert sym.imag == pytest.approx(point[1], abs=1e-12)

    def test_unit_energy(self):
        rng = np.random.default_rng(0)
        syms = qpsk_map(rng.integers(0, 2, 512).astype(np.uint8))
        np.testing.assert_allclose(np.abs(syms) ** 2, 1.0, atol=1e-12)

    def test_gray_property(self):
        # points at minimum distance differ in exactly one bit
        pairs = list(CONSTELLATION)
        points = np.array([complex(*CONSTELLATION[p]) for p in pairs])
        for i, p in enumerate(pairs):
            dist = np.abs(points - points[i])
            dist[i] = np.inf
            for j in np.flatnonzero(dist == dist.min()):
                assert sum(a != b for a, b in zip(p, pairs[j])) == 1

    def test_odd_length_padded(self):
        syms = qpsk_map([1])
        assert syms.size == 1
        assert syms[0] == pytest.approx(complex(-HALF_SQRT2, HALF_SQRT2))

    def test_output_length(self):
        assert qpsk_map(np.zeros(10, dtype=np.uint8)).size == 5


class TestDemap:
    def test_roundtrip(self):
        rng = np.random.default_rng(1)
        bits = rng.integers(0, 2, 400).astype(np.uint8)
        np.testing.assert_array_equal(qpsk_demap(qpsk_map(bits)), bits)

    def test_sign_decision(self):
        np.testing.assert_array_equal(qpsk_demap([0.9 - 0.1j]), [0, 1])

    def test_exact_constellation_point(self):
        np.testing.assert_array_equal(
            qpsk_demap([complex(-HALF_SQRT2, HALF_SQRT2)]), [1, 0]
        )

    def test_axis_ties_decide_zero(self):
        np.testing.assert_array_equal(qpsk_demap([0j]), [0, 0])
        np.testing.assert_array_equal(qpsk_demap([0.0 - 0.3j]), [0, 1])
        np.testing.assert_array_equal(qpsk_demap([-0.3 + 0.0j]), [1, 0])

    def test_nearest_neighbor_rule_on_grid(self):
        # brute-force minimum distance (ties toward bit 0) must match
        pairs = sorted(CONSTELLATION)
        points = np.array([complex(*CONSTELLATION[p]) for p in pairs])
        axis = np.linspace(-1.5, 1.5, 13)  # includes 0.0 ties
        for re in axis:
            for im in axis:
                r = complex(re, im)
                best = min(range(4), key=lambda i: (abs(r - points[i]), pairs[i]))
                np.testing.assert_array_equal(qpsk_demap([r]), pairs[best])

    @given(st.lists(st.integers(0, 1), min_size=0, max_size=100))
    def test_roundtrip_property(self, bits):
        data = np.array(bits, dtype=np.uint8)
        if data.size % 2:
            data = np.append(data, 0)
        np.testing.assert_array_equal(qpsk_demap(qpsk_map(data)), data)
