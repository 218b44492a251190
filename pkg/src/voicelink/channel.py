"""AWGN and flat block-fading channels, plus the perfect-CSI equalizer.

SNR is Es/N0 per transmitted time-domain complex sample, with the signal
power measured from the actual waveform (cyclic prefix included).  Fading
draws one gain per OFDM block, i.i.d. across blocks; ``snr_db = inf``
disables noise entirely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

CHANNEL_KINDS = ("awgn", "rayleigh", "rician")

# below this gain modulus the equalizer passes the block through uninverted
DEEP_FADE_FLOOR = 1e-12


@dataclass(frozen=True)
class ChannelConfig:
    kind: str = "awgn"
    snr_db: float = math.inf
    rician_k: float = 1.0
    seed: int = 0

    def __post_init__(self):
        kind = str(self.kind).lower()
        if kind not in CHANNEL_KINDS:
            raise ValueError(f"kind must be one of {CHANNEL_KINDS}")
        object.__setattr__(self, "kind", kind)
        if math.isnan(self.snr_db):
            raise ValueError("snr_db must be a number or +inf")
        if self.rician_k < 0:
            raise ValueError("rician_k must be nonnegative")


@dataclass(frozen=True)
class FadingRealization:
    """Per-block complex gains actually drawn (all ones for AWGN)."""

    gains: np.ndarray


def gaussian_pair(rng) -> tuple[float, float]:
    """Two independent standard normals from one Box-Muller transform."""
    u1 = 1.0 - rng.random()  # (0, 1], keeps the log finite
    u2 = rng.random()
    radius = math.sqrt(-2.0 * math.log(u1))
    angle = 2.0 * math.pi * u2
    return radius * math.cos(angle), radius * math.sin(angle)


def _normal_pairs(rng, shape) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized Box-Muller; same transform as :func:`gaussian_pair`."""
    u1 = 1.0 - rng.random(shape)
    u2 = rng.random(shape)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    return radius * np.cos(angle), radius * np.sin(angle)


def _draw_gains(rng, cfg: ChannelConfig, n_blocks: int) -> np.ndarray:
    if cfg.kind == "awgn":
        return np.ones(n_blocks, dtype=np.complex128)
    re, im = _normal_pairs(rng, n_blocks)
    scatter = (re + 1j * im) / math.sqrt(2.0)  # CN(0, 1)
    if cfg.kind == "rayleigh":
        return scatter
    k = cfg.rician_k
    return math.sqrt(k / (k + 1.0)) + math.sqrt(1.0 / (k + 1.0)) * scatter


def apply_channel(blocks, cfg: ChannelConfig) -> tuple[np.ndarray, FadingRealization]:
    """Multiply each block by its gain and add calibrated complex noise.

    Noise variance per complex sample is ``measured_power / 10^(snr/10)``.
    Gains are drawn first, then the noise, from one generator seeded with
    ``cfg.seed``, so outputs are bit-identical for identical inputs.
    """
    x = np.asarray(blocks, dtype=np.complex128)
    if x.ndim == 1:
        x = x.reshape(1, -1)
    rng = np.random.default_rng(cfg.seed)
    gains = _draw_gains(rng, cfg, x.shape[0])
    y = x * gains[:, None]
    if not math.isinf(cfg.snr_db) and x.size:
        p_sig = float(np.mean(np.abs(x) ** 2))
        n0 = p_sig / 10.0 ** (cfg.snr_db / 10.0)
        re, im = _normal_pairs(rng, x.shape)
        y = y + math.sqrt(n0 / 2.0) * (re + 1j * im)
    return y, FadingRealization(gains)


def equalize(freq_symbols, realization: FadingRealization) -> tuple[np.ndarray, int]:
    """Zero-forcing: divide each block's symbols by its known gain.

    Blocks whose gain modulus falls below ``DEEP_FADE_FLOOR`` pass through
    unequalized; the count of such blocks is returned as a diagnostic.
    """
    s = np.asarray(freq_symbols, dtype=np.complex128)
    if s.ndim == 1:
        s = s.reshape(1, -1)
    h = np.asarray(realization.gains, dtype=np.complex128)
    if s.shape[0] != h.size:
        raise ValueError("symbol group count must match the gain count")
    usable = np.abs(h) >= DEEP_FADE_FLOOR
    inverse = np.where(usable, 1.0 / np.where(usable, h, 1.0), 1.0)
    return s * inverse[:, None], int(np.count_nonzero(~usable))
