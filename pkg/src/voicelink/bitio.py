"""PCM voice segments and lossless conversion between samples and bits.

A bit stream is represented throughout the package as a 1-D numpy array of
uint8 values 0/1; :func:`as_bits` is the validating coercion used by every
codec entry point.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

PCM_OFFSET = 128  # unsigned WAV byte <-> signed sample
BITS_PER_SAMPLE = 8
DEFAULT_SAMPLE_RATE = 8000


class WavFormatError(ValueError):
    """Raised when a WAV file is not uncompressed mono 8-bit PCM."""


def as_bits(bits) -> np.ndarray:
    """Coerce a sequence to a uint8 array, rejecting anything but 0/1."""
    arr = np.asarray(bits)
    if arr.ndim != 1:
        arr = arr.ravel()
    if arr.dtype != np.uint8:
        arr = arr.astype(np.uint8)
    if arr.size and arr.max(initial=0) > 1:
        raise ValueError("bit stream may only contain 0 and 1")
    return arr


@dataclass(frozen=True)
class AudioSegment:
    """Mono PCM audio with signed 8-bit sample values."""

    samples: np.ndarray
    sample_rate: int = DEFAULT_SAMPLE_RATE

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.int16).ravel()
        if samples.size and (samples.min() < -128 or samples.max() > 127):
            raise ValueError("samples must lie in -128..127")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return self.samples.size


def load_wav(path) -> AudioSegment:
    """Read a RIFF/WAVE file containing mono 8-bit PCM.

    Anything else (compressed audio, multiple channels, other sample
    widths) raises :class:`WavFormatError` naming the offending header
    field.
    """
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < 12 or raw[:4] != b"RIFF":
        raise WavFormatError("missing 'RIFF' chunk id; not a RIFF container")
    if raw[8:12] != b"WAVE":
        raise WavFormatError("RIFF form type is not 'WAVE'")

    fmt_chunk = None
    data_chunk = None
    pos = 12
    while pos + 8 <= len(raw):
        chunk_id = raw[pos:pos + 4]
        size = struct.unpack_from("<I", raw, pos + 4)[0]
        body = raw[pos + 8:pos + 8 + size]
        if chunk_id == b"fmt " and fmt_chunk is None:
            fmt_chunk = body
        elif chunk_id == b"data" and data_chunk is None:
            data_chunk = body
        pos += 8 + size + (size & 1)  # chunks are word aligned

    if fmt_chunk is None:
        raise WavFormatError("missing 'fmt ' chunk")
    if len(fmt_chunk) < 16:
        raise WavFormatError("'fmt ' chunk shorter than 16 bytes")
    if data_chunk is None:
        raise WavFormatError("missing 'data' chunk")

    audio_format, channels, sample_rate, _, _, bits = struct.unpack_from(
        "<HHIIHH", fmt_chunk
    )
    if audio_format != 1:
        raise WavFormatError(f"AudioFormat is {audio_format}, expected 1 (PCM)")
    if channels != 1:
        raise WavFormatError(f"NumChannels is {channels}, expected 1 (mono)")
    if bits != 8:
        raise WavFormatError(f"BitsPerSample is {bits}, expected 8")

    samples = np.frombuffer(data_chunk, dtype=np.uint8).astype(np.int16) - PCM_OFFSET
    return AudioSegment(samples, sample_rate)


def write_wav(path, segment: AudioSegment) -> None:
    """Write a segment as mono 8-bit PCM, mirroring :func:`load_wav`."""
    payload = (segment.samples.astype(np.int16) + PCM_OFFSET).astype(np.uint8).tobytes()
    fmt = struct.pack(
        "<HHIIHH", 1, 1, segment.sample_rate, segment.sample_rate, 1, 8
    )
    body = b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt
    body += b"data" + struct.pack("<I", len(payload)) + payload
    if len(payload) & 1:
        body += b"\x00"
    with open(path, "wb") as fh:
        fh.write(b"RIFF" + struct.pack("<I", len(body)) + body)


def synth_segment(seed: int, n: int) -> AudioSegment:
    """Deterministic pseudorandom stand-in for a recorded voice segment.

    Samples are uniform over -128..127 and fully determined by ``seed``;
    the sample rate is fixed at 8 kHz.
    """
    if n <= 0:
        raise ValueError("sample count must be positive")
    rng = np.random.default_rng(seed)
    samples = rng.integers(-128, 128, size=n, dtype=np.int16)
    return AudioSegment(samples, DEFAULT_SAMPLE_RATE)


def pcm_to_bits(segment: AudioSegment) -> np.ndarray:
    """Serialize each sample as 8 bits, MSB first, of sample + 128."""
    unsigned = (segment.samples.astype(np.int16) + PCM_OFFSET).astype(np.uint8)
    return np.unpackbits(unsigned)


def bits_to_pcm(bits, sample_rate: int = DEFAULT_SAMPLE_RATE) -> AudioSegment:
    """Exact inverse of :func:`pcm_to_bits`."""
    arr = as_bits(bits)
    if arr.size % BITS_PER_SAMPLE:
        raise ValueError("bit count must be divisible by 8")
    samples = np.packbits(arr).astype(np.int16) - PCM_OFFSET
    return AudioSegment(samples, sample_rate)
