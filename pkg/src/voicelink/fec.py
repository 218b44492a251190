"""Forward error correction: a systematic cyclic block code with syndrome
correction and a rate-1/2 convolutional code with hard-decision Viterbi
decoding.

Polynomials over GF(2) are coefficient sequences indexed by degree, i.e.
``p[0]`` is the constant term.  Convolutional tap masks are integers whose
most significant of ``K`` bits taps the newest input, so the octal literals
``0o171``/``0o133`` carry their conventional meaning.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bitio import as_bits

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is an install-time extra
    njit = None

# x^6 + x^4 + x^2 + 1 = (x + 1)^6, the unique (8,2) cyclic generator
DEFAULT_CYCLIC_GENERATOR = (1, 0, 1, 0, 1, 0, 1)


# ---------------------------------------------------------------------------
# GF(2) polynomial arithmetic


def gf2_mod(dividend, divisor) -> np.ndarray:
    """Remainder of GF(2) polynomial long division.

    Both arguments are coefficient sequences with index = degree.  The
    remainder is returned padded to exactly ``degree(divisor)`` entries.
    """
    div = as_bits(divisor)
    nz = np.flatnonzero(div)
    if nz.size == 0:
        raise ValueError("divisor polynomial must be nonzero")
    deg = int(nz[-1])
    rem = as_bits(dividend).copy()
    taps = div[: deg + 1]
    for i in range(rem.size - 1, deg - 1, -1):
        if rem[i]:
            rem[i - deg : i + 1] ^= taps
    out = np.zeros(deg, dtype=np.uint8)
    out[: min(deg, rem.size)] = rem[: min(deg, rem.size)]
    return out


# ---------------------------------------------------------------------------
# Cyclic block code


@dataclass(frozen=True)
class CyclicCodeConfig:
    """(n, k) systematic cyclic code defined by its generator polynomial."""

    n: int = 8
    k: int = 2
    generator: tuple[int, ...] = DEFAULT_CYCLIC_GENERATOR

    def __post_init__(self):
        if not self.n > self.k >= 1:
            raise ValueError("need n > k >= 1")
        gen = tuple(int(b) for b in self.generator)
        if any(b not in (0, 1) for b in gen):
            raise ValueError("generator coefficients must be 0 or 1")
        if len(gen) != self.n - self.k + 1:
            raise ValueError("generator degree must equal n - k")
        if gen[0] != 1 or gen[-1] != 1:
            raise ValueError("generator needs constant and leading terms set")
        object.__setattr__(self, "generator", gen)
        xn_1 = np.zeros(self.n + 1, dtype=np.uint8)
        xn_1[0] = xn_1[-1] = 1
        if gf2_mod(xn_1, gen).any():
            raise ValueError("generator does not divide x^n - 1 (not cyclic)")

    @property
    def parity_bits(self) -> int:
        return self.n - self.k


DEFAULT_CYCLIC = CyclicCodeConfig()


@dataclass(frozen=True)
class DecodeReport:
    """Outcome of decoding one received word."""

    message: np.ndarray
    corrected: int
    detected_uncorrectable: bool


def _stream_degrees(cfg: CyclicCodeConfig) -> list[int]:
    # Codewords are serialized message-first; message bit i is the
    # coefficient of x^(n-k+i), parity bit j the coefficient of x^j.
    r = cfg.parity_bits
    return [r + i for i in range(cfg.k)] + list(range(r))


@lru_cache(maxsize=None)
def _cyclic_tables(cfg: CyclicCodeConfig):
    """Per-position syndrome rows and the single-error correction map."""
    r = cfg.parity_bits
    rows = np.zeros((cfg.n, r), dtype=np.uint8)
    for pos, deg in enumerate(_stream_degrees(cfg)):
        unit = np.zeros(deg + 1, dtype=np.uint8)
        unit[deg] = 1
        rows[pos] = gf2_mod(unit, cfg.generator)
    weights = (1 << np.arange(r)).astype(np.int64)
    flip_for = np.full(1 << r, -1, dtype=np.int64)
    seen = set()
    for pos in range(cfg.n):
        s = int(rows[pos] @ weights)
        if s in seen:
            flip_for[s] = -1  # ambiguous syndrome: detect only
        else:
            flip_for[s] = pos
            seen.add(s)
    return rows, weights, flip_for


@lru_cache(maxsize=None)
def _parity_table(cfg: CyclicCodeConfig) -> np.ndarray:
    """Parity bits of x^(n-k) * m(x) mod g(x) for every k-bit message."""
    r = cfg.parity_bits
    table = np.zeros((1 << cfg.k, r), dtype=np.uint8)
    for idx in range(1, 1 << cfg.k):
        shifted = np.zeros(cfg.n, dtype=np.uint8)
        for i in range(cfg.k):
            shifted[r + i] = (idx >> i) & 1
        table[idx] = gf2_mod(shifted, cfg.generator)
    return table


def cyclic_encode(msg, cfg: CyclicCodeConfig = DEFAULT_CYCLIC) -> np.ndarray:
    """Systematic codeword: the message followed by its parity bits."""
    m = as_bits(msg)
    if m.size != cfg.k:
        raise ValueError(f"message must hold exactly {cfg.k} bits")
    return cyclic_encode_stream(m, cfg)


def cyclic_encode_stream(bits, cfg: CyclicCodeConfig = DEFAULT_CYCLIC) -> np.ndarray:
    """Encode a stream whose length is a multiple of k, word by word."""
    m = as_bits(bits)
    if m.size % cfg.k:
        raise ValueError("stream length must be a multiple of k")
    words = m.reshape(-1, cfg.k)
    pow2 = (1 << np.arange(cfg.k)).astype(np.int64)
    parity = _parity_table(cfg)[words @ pow2]
    return np.hstack([words, parity]).ravel()


def cyclic_decode(word, cfg: CyclicCodeConfig = DEFAULT_CYCLIC) -> DecodeReport:
    """Syndrome decoding with single-error correction.

    A zero syndrome extracts the message directly; a syndrome matching a
    single-bit error pattern flips that bit; anything else is flagged
    ``detected_uncorrectable`` with the systematic bits extracted as-is.
    """
    w = as_bits(word)
    if w.size != cfg.n:
        raise ValueError(f"received word must hold exactly {cfg.n} bits")
    msg, corrected, bad = cyclic_decode_stream(w, cfg)
    return DecodeReport(msg, int(corrected), bool(bad))


def cyclic_decode_stream(
    bits, cfg: CyclicCodeConfig = DEFAULT_CYCLIC
) -> tuple[np.ndarray, int, int]:
    """Decode a stream of received words.

    Returns ``(message_bits, corrected_bits, uncorrectable_words)``.
    """
    w = as_bits(bits)
    if w.size % cfg.n:
        raise ValueError("stream length must be a multiple of n")
    words = w.reshape(-1, cfg.n).copy()
    rows, weights, flip_for = _cyclic_tables(cfg)
    syndromes = (words @ rows % 2).astype(np.int64) @ weights
    flips = flip_for[syndromes]
    correctable = flips >= 0
    idx = np.flatnonzero((syndromes != 0) & correctable)
    words[idx, flips[idx]] ^= 1
    uncorrectable = int(np.count_nonzero((syndromes != 0) & ~correctable))
    return words[:, : cfg.k].ravel(), int(idx.size), uncorrectable


# ---------------------------------------------------------------------------
# Convolutional code


@dataclass(frozen=True)
class ConvCodeConfig:
    """Rate-1/2 feedforward convolutional code with constraint length K."""

    constraint_length: int = 7
    generators: tuple[int, int] = (0o171, 0o133)

    def __post_init__(self):
        k = self.constraint_length
        if k < 2:
            raise ValueError("constraint length must be at least 2")
        gens = tuple(int(g) for g in self.generators)
        if len(gens) != 2:
            raise ValueError("rate-1/2 code needs exactly two tap masks")
        for g in gens:
            if not 0 < g < (1 << k):
                raise ValueError("tap mask must fit in K bits")
            if not (g >> (k - 1)) & 1:
                raise ValueError("tap mask must tap the newest input")
        object.__setattr__(self, "generators", gens)

    @property
    def n_states(self) -> int:
        return 1 << (self.constraint_length - 1)

    @property
    def tail_bits(self) -> int:
        return self.constraint_length - 1

    def impulse_response(self, mask: int) -> np.ndarray:
        """Tap coefficients ordered newest input first."""
        k = self.constraint_length
        return np.array([(mask >> (k - 1 - j)) & 1 for j in range(k)], np.uint8)


DEFAULT_CONV = ConvCodeConfig()


def conv_encode(bits, cfg: ConvCodeConfig = DEFAULT_CONV) -> np.ndarray:
    """Encode from the all-zero state, appending K-1 zero flush bits.

    Output interleaves the two parity streams first-generator first, so
    ``len(out) == 2 * (len(bits) + K - 1)``.
    """
    x = as_bits(bits)
    k = cfg.constraint_length
    if x.size == 0:
        return np.zeros(2 * (k - 1), dtype=np.uint8)
    out = np.empty(2 * (x.size + k - 1), dtype=np.uint8)
    for lane, mask in enumerate(cfg.generators):
        # full convolution with the taps == shift register flushed by zeros
        out[lane::2] = np.convolve(x, cfg.impulse_response(mask)) % 2
    return out


@lru_cache(maxsize=None)
def _branch_metric_table(cfg: ConvCodeConfig) -> np.ndarray:
    """Hamming metric bm[rx_pair, next_state, predecessor_parity].

    Transitions into state ``ns`` all consume the input bit stored in the
    MSB of ``ns``; the two predecessors differ in the register bit being
    shifted out (their own LSB).
    """
    k = cfg.constraint_length
    states = cfg.n_states
    g0, g1 = cfg.generators
    expected = np.zeros((states, 2), dtype=np.uint8)
    for ns in range(states):
        bit = ns >> (k - 2)
        low = ns & ((states >> 1) - 1)
        for parity in (0, 1):
            window = (bit << (k - 1)) | (low << 1) | parity
            c0 = bin(window & g0).count("1") & 1
            c1 = bin(window & g1).count("1") & 1
            expected[ns, parity] = (c0 << 1) | c1
    pair_distance = np.array([[0, 1, 1, 2], [1, 0, 2, 1], [1, 2, 0, 1], [2, 1, 1, 0]])
    bm = np.empty((4, states, 2), dtype=np.int64)
    for rx in range(4):
        bm[rx] = pair_distance[rx][expected]
    return bm


def _viterbi_kernel_py(pair_idx, bm, k):
    """Add-compare-select over the full trellis, numpy per step."""
    steps = pair_idx.size
    states = bm.shape[1]
    half_mask = (states >> 1) - 1
    pred0 = ((np.arange(states) & half_mask) << 1).astype(np.int64)
    pred1 = pred0 | 1
    metrics = np.full(states, 1 << 40, dtype=np.int64)
    metrics[0] = 0
    back = np.empty((steps, states), dtype=np.uint8)
    for t in range(steps):
        table = bm[pair_idx[t]]
        cand0 = metrics[pred0] + table[:, 0]
        cand1 = metrics[pred1] + table[:, 1]
        take1 = cand1 < cand0  # ties keep the even predecessor
        back[t] = take1
        metrics = np.where(take1, cand1, cand0)
    bits = np.empty(steps, dtype=np.uint8)
    state = 0
    for t in range(steps - 1, -1, -1):
        bits[t] = state >> (k - 2)
        state = ((state & half_mask) << 1) | back[t, state]
    return bits


def _viterbi_kernel_loops(pair_idx, bm, k):  # pragma: no cover - jit twin
    steps = pair_idx.size
    states = bm.shape[1]
    half_mask = (states >> 1) - 1
    big = np.int64(1 << 40)
    metrics = np.full(states, big, dtype=np.int64)
    metrics[0] = 0
    fresh = np.empty(states, dtype=np.int64)
    back = np.empty((steps, states), dtype=np.uint8)
    for t in range(steps):
        rx = pair_idx[t]
        for ns in range(states):
            low = (ns & half_mask) << 1
            cand0 = metrics[low] + bm[rx, ns, 0]
            cand1 = metrics[low | 1] + bm[rx, ns, 1]
            if cand1 < cand0:  # ties keep the even predecessor
                fresh[ns] = cand1
                back[t, ns] = 1
            else:
                fresh[ns] = cand0
                back[t, ns] = 0
        metrics, fresh = fresh, metrics
    bits = np.empty(steps, dtype=np.uint8)
    state = 0
    for t in range(steps - 1, -1, -1):
        bits[t] = state >> (k - 2)
        state = ((state & half_mask) << 1) | back[t, state]
    return bits


if njit is not None:
    _viterbi_kernel = njit(cache=True)(_viterbi_kernel_loops)
else:  # pragma: no cover
    _viterbi_kernel = _viterbi_kernel_py


def viterbi_decode(coded, cfg: ConvCodeConfig = DEFAULT_CONV) -> np.ndarray:
    """Maximum-likelihood hard-decision decoding of a flushed codeword.

    The trellis starts and ends in state 0; the K-1 flush bits are
    stripped from the returned message.
    """
    y = as_bits(coded)
    if y.size % 2:
        raise ValueError("coded stream must hold an even number of bits")
    steps = y.size // 2
    tail = cfg.tail_bits
    if steps < tail:
        raise ValueError("coded stream shorter than the flush tail")
    pair_idx = (y[0::2] << 1) | y[1::2]
    bits = _viterbi_kernel(pair_idx, _branch_metric_table(cfg), cfg.constraint_length)
    return np.asarray(bits[: steps - tail], dtype=np.uint8)
