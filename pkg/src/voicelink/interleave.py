"""Block interleaving: write bits row by row, read them column by column.

A burst of up to ``rows`` consecutive channel errors lands on positions at
least ``cols`` apart after deinterleaving.  The 35x1 default is the
degenerate single-column grid (an identity permutation).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bitio import as_bits


@dataclass(frozen=True)
class InterleaverConfig:
    rows: int = 35
    cols: int = 1

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("rows and cols must be at least 1")

    @property
    def block(self) -> int:
        return self.rows * self.cols


DEFAULT_INTERLEAVER = InterleaverConfig()


def interleave(bits, cfg: InterleaverConfig = DEFAULT_INTERLEAVER) -> np.ndarray:
    """Permute per block; a partial final block is zero-padded to full size.

    The caller keeps the original length to strip the pad after
    :func:`deinterleave`.
    """
    x = as_bits(bits)
    block = cfg.block
    n_blocks = -(-x.size // block)
    padded = np.zeros(n_blocks * block, dtype=np.uint8)
    padded[: x.size] = x
    grid = padded.reshape(n_blocks, cfg.rows, cfg.cols)
    return grid.transpose(0, 2, 1).reshape(-1)


def deinterleave(
    bits, original_length: int, cfg: InterleaverConfig = DEFAULT_INTERLEAVER
) -> np.ndarray:
    """Exact inverse permutation, truncated back to ``original_length``."""
    y = as_bits(bits)
    block = cfg.block
    if y.size % block:
        raise ValueError("interleaved length must be a multiple of rows*cols")
    if original_length > y.size:
        raise ValueError("original_length exceeds the interleaved stream")
    grid = y.reshape(-1, cfg.cols, cfg.rows)
    return grid.transpose(0, 2, 1).reshape(-1)[:original_length].copy()
