"""Tests for PCM ingestion and sample<->bit conversion."""

import struct

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from voicelink.bitio import (
    AudioSegment,
    WavFormatError,
    as_bits,
    bits_to_pcm,
    load_wav,
    pcm_to_bits,
    synth_segment,
    write_wav,
)


def make_wav(payload: bytes, audio_format=1, channels=1, bits=8, rate=8000) -> bytes:
    """Build a minimal RIFF/WAVE byte string for parser tests."""
    block_align = channels * bits // 8
    fmt = struct.pack(
        "<HHIIHH", audio_format, channels, rate, rate * block_align, block_align, bits
    )
    body = b"WAVE"
    body += b"fmt " + struct.pack("<I", len(fmt)) + fmt
    body += b"data" + struct.pack("<I", len(payload)) + payload
    if len(payload) & 1:
        body += b"\x00"
    return b"RIFF" + struct.pack("<I", len(body)) + body


class TestLoadWav:
    def test_valid_8k_mono_8bit(self, tmp_path):
        payload = bytes(range(256)) * 32  # 8192 bytes
        path = tmp_path / "voice.wav"
        path.write_bytes(make_wav(payload[:8000]))
        seg = load_wav(path)
        assert len(seg) == 8000
        assert seg.sample_rate == 8000

    def test_midscale_bytes_become_zero(self, tmp_path):
        path = tmp_path / "flat.wav"
        path.write_bytes(make_wav(bytes([128] * 64)))
        seg = load_wav(path)
        assert np.all(seg.samples == 0)

    def test_recentering_extremes(self, tmp_path):
        path = tmp_path / "edges.wav"
        path.write_bytes(make_wav(bytes([0, 255, 128])))
        np.testing.assert_array_equal(load_wav(path).samples, [-128, 127, 0])

    def test_16bit_rejected_naming_field(self, tmp_path):
        path = tmp_path / "wide.wav"
        path.write_bytes(make_wav(b"\x00\x00" * 4, bits=16))
        with pytest.raises(WavFormatError, match="BitsPerSample"):
            load_wav(path)

    def test_stereo_rejected_naming_field(self, tmp_path):
        path = tmp_path / "stereo.wav"
        path.write_bytes(make_wav(b"\x80" * 8, channels=2))
        with pytest.raises(WavFormatError, match="NumChannels"):
            load_wav(path)

    def test_compressed_rejected_naming_field(self, tmp_path):
        path = tmp_path / "alaw.wav"
        path.write_bytes(make_wav(b"\x80" * 8, audio_format=6))
        with pytest.raises(WavFormatError, match="AudioFormat"):
            load_wav(path)

    def test_not_riff(self, tmp_path):
        path = tmp_path / "noise.bin"
        path.write_bytes(b"OggS" + b"\x00" * 40)
        with pytest.raises(WavFormatError, match="RIFF"):
            load_wav(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_wav(tmp_path / "absent.wav")

    def test_extra_chunks_skipped(self, tmp_path):
        raw = make_wav(bytes([128, 129, 130]))
        # splice a LIST chunk between fmt and data
        head, data = raw.split(b"data", 1)
        extra = b"LIST" + struct.pack("<I", 4) + b"INFO"
        path = tmp_path / "listy.wav"
        path.write_bytes(head + extra + b"data" + data)
        np.testing.assert_array_equal(load_wav(path).samples, [0, 1, 2])

    def test_writer_mirrors_reader(self, tmp_path):
        seg = synth_segment(3, 777)
        path = tmp_path / "mirror.wav"
        write_wav(path, seg)
        back = load_wav(path)
        np.testing.assert_array_equal(back.samples, seg.samples)
        assert back.sample_rate == seg.sample_rate


class TestSynthSegment:
    def test_deterministic(self):
        a = synth_segment(5, 8000)
        b = synth_segment(5, 8000)
        np.testing.assert_array_equal(a.samples, b.samples)
        assert a.sample_rate == 8000

    def test_different_seeds_differ(self):
        a = synth_segment(5, 8000)
        b = synth_segment(6, 8000)
        assert np.any(a.samples != b.samples)

    def test_single_sample_in_range(self):
        seg = synth_segment(5, 1)
        assert len(seg) == 1
        assert -128 <= seg.samples[0] <= 127

    def test_zero_length_rejected(self):
        with pytest.raises(ValueError):
            synth_segment(5, 0)

    def test_full_range_exercised(self):
        samples = synth_segment(0, 100_000).samples
        assert samples.min() == -128
        assert samples.max() == 127


class TestBitConversion:
    @pytest.mark.parametrize(
        "sample,expected",
        [
            (-128, [0, 0, 0, 0, 0, 0, 0, 0]),
            (127, [1, 1, 1, 1, 1, 1, 1, 1]),
            (0, [1, 0, 0, 0, 0, 0, 0, 0]),
        ],
    )
    def test_msb_first_patterns(self, sample, expected):
        seg = AudioSegment(np.array([sample]))
        np.testing.assert_array_equal(pcm_to_bits(seg), expected)

    def test_length_law(self):
        seg = synth_segment(1, 123)
        assert pcm_to_bits(seg).size == 8 * 123

    def test_inverse_single_sample(self):
        seg = bits_to_pcm([1, 0, 0, 0, 0, 0, 0, 0])
        np.testing.assert_array_equal(seg.samples, [0])

    def test_empty_stream(self):
        assert len(bits_to_pcm([])) == 0

    def test_roundtrip_synth(self):
        seg = synth_segment(11, 8000)
        back = bits_to_pcm(pcm_to_bits(seg), seg.sample_rate)
        np.testing.assert_array_equal(back.samples, seg.samples)

    def test_non_multiple_of_8_rejected(self):
        with pytest.raises(ValueError):
            bits_to_pcm([1, 0, 1])

    @given(st.lists(st.integers(-128, 127), min_size=0, max_size=300))
    def test_roundtrip_property(self, values):
        seg = AudioSegment(np.array(values, dtype=np.int16))
        back = bits_to_pcm(pcm_to_bits(seg))
        np.testing.assert_array_equal(back.samples, seg.samples)


class TestValidation:
    def test_sample_range_enforced(self):
        with pytest.raises(ValueError):
            AudioSegment(np.array([200]))

    def test_sample_rate_positive(self):
        with pytest.raises(ValueError):
            AudioSegment(np.array([0]), sample_rate=0)

    def test_samples_immutable(self):
        seg = synth_segment(1, 16)
        with pytest.raises(ValueError):
            seg.samples[0] = 1

    def test_as_bits_rejects_nonbinary(self):
        with pytest.raises(ValueError):
            as_bits([0, 1, 2])
