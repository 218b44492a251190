"""Gray-coded QPSK mapping and minimum-distance hard demapping."""

from __future__ import annotations

import math

import numpy as np

from .bitio import as_bits

_SCALE = 1.0 / math.sqrt(2.0)


def qpsk_map(bits) -> np.ndarray:
    """Map bit pairs (b0, b1) to ((1-2*b0) + j*(1-2*b1)) / sqrt(2).

    Every constellation point has unit energy; an odd trailing bit is
    zero-padded (the caller tracks the original bit count).
    """
    x = as_bits(bits)
    if x.size % 2:
        x = np.append(x, np.uint8(0))
    b0 = x[0::2].astype(np.float64)
    b1 = x[1::2].astype(np.float64)
    return ((1.0 - 2.0 * b0) + 1j * (1.0 - 2.0 * b1)) * _SCALE


def qpsk_demap(symbols) -> np.ndarray:
    """Per-axis sign decision; ties on an axis decide bit 0.

    This is the minimum-Euclidean-distance rule for the Gray-coded
    constellation, and the exact inverse of :func:`qpsk_map` on noiseless
    input.
    """
    s = np.asarray(symbols, dtype=np.complex128).ravel()
    bits = np.empty(2 * s.size, dtype=np.uint8)
    bits[0::2] = s.real < 0
    bits[1::2] = s.imag < 0
    return bits
