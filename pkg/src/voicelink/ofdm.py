"""OFDM modulation: subcarrier grouping, radix-2 (I)FFT, cyclic prefix.

The transform is a hand-rolled in-place radix-2 decimation-in-time FFT
with bit-reversal reordering; the 1/N normalization sits on the inverse
only, so an impulse on one subcarrier yields constant time samples 1/N.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class OfdmParams:
    n_subcarriers: int = 8
    cp_len: int = 1

    def __post_init__(self):
        n = self.n_subcarriers
        if n < 2 or n & (n - 1):
            raise ValueError("n_subcarriers must be a power of two >= 2")
        if not 0 <= self.cp_len < n:
            raise ValueError("cp_len must satisfy 0 <= cp_len < N")

    @property
    def block_len(self) -> int:
        return self.n_subcarriers + self.cp_len


DEFAULT_OFDM = OfdmParams()


@lru_cache(maxsize=None)
def _bit_reversed(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    rev = np.zeros(n, dtype=np.int64)
    for i in range(n):
        v = i
        r = 0
        for _ in range(bits):
            r = (r << 1) | (v & 1)
            v >>= 1
        rev[i] = r
    return rev


def _fft_inplace(a: np.ndarray, inverse: bool) -> np.ndarray:
    """Radix-2 DIT butterflies along the last axis of ``a``."""
    n = a.shape[-1]
    a[...] = a[..., _bit_reversed(n)]
    sign = 1.0 if inverse else -1.0
    size = 2
    while size <= n:
        half = size // 2
        twiddle = np.exp(sign * 2j * np.pi * np.arange(half) / size)
        view = a.reshape(a.shape[:-1] + (n // size, size))
        spun = view[..., half:] * twiddle
        view[..., half:] = view[..., :half] - spun
        view[..., :half] += spun
        size *= 2
    if inverse:
        a *= 1.0 / n
    return a


def dft(x, inverse: bool = False) -> np.ndarray:
    """Unnormalized forward DFT / (1/N)-normalized inverse DFT.

    ``dft(dft(x), inverse=True)`` reconstructs ``x`` to ~1e-15.
    """
    a = np.array(x, dtype=np.complex128)
    if a.ndim != 1:
        raise ValueError("dft operates on one-dimensional inputs")
    n = a.size
    if n < 2 or n & (n - 1):
        raise ValueError("length must be a power of two >= 2")
    return _fft_inplace(a, inverse)


def ofdm_modulate(symbols, params: OfdmParams = DEFAULT_OFDM) -> np.ndarray:
    """Group symbols N per block, inverse-transform, prepend the CP.

    A partial final group is padded with zero symbols; the caller tracks
    the original symbol count.  Returns an (n_blocks, N + cp_len) array.
    """
    s = np.asarray(symbols, dtype=np.complex128).ravel()
    n = params.n_subcarriers
    n_blocks = -(-s.size // n)
    freq = np.zeros((n_blocks, n), dtype=np.complex128)
    freq.reshape(-1)[: s.size] = s
    time = _fft_inplace(freq, inverse=True)
    if params.cp_len:
        return np.concatenate([time[:, n - params.cp_len :], time], axis=1)
    return time


def ofdm_demodulate(
    blocks, params: OfdmParams = DEFAULT_OFDM, original_count: int | None = None
) -> np.ndarray:
    """Strip the CP, forward-transform, concatenate, truncate.

    ``original_count`` defaults to every carried symbol (n_blocks * N).
    """
    b = np.asarray(blocks, dtype=np.complex128)
    if b.ndim == 1:
        b = b.reshape(1, -1)
    if b.size and b.shape[-1] != params.block_len:
        raise ValueError(
            f"blocks must hold N + cp_len = {params.block_len} samples each"
        )
    useful = b[:, params.cp_len :].copy()
    freq = _fft_inplace(useful, inverse=False).reshape(-1)
    if original_count is None:
        return freq
    if original_count > freq.size:
        raise ValueError("original_count exceeds the carried symbol count")
    return freq[:original_count]
