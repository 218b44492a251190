"""voicelink: link-level simulator for FEC-coded OFDM voice transmission.

The package follows the transmit chain stage by stage: :mod:`bitio` turns
PCM audio into bits, :mod:`fec` encodes them with a cyclic block code or a
rate-1/2 convolutional code, :mod:`interleave` permutes, :mod:`modem` maps
to QPSK, :mod:`ofdm` modulates onto subcarriers, :mod:`channel` applies
AWGN or flat fading, and :mod:`simrun` runs the whole loop to sweep BER
against SNR with closed-form oracles for validation.
"""

from .bitio import (
    AudioSegment,
    WavFormatError,
    as_bits,
    bits_to_pcm,
    load_wav,
    pcm_to_bits,
    synth_segment,
    write_wav,
)
from .channel import (
    ChannelConfig,
    FadingRealization,
    apply_channel,
    equalize,
    gaussian_pair,
)
from .fec import (
    ConvCodeConfig,
    CyclicCodeConfig,
    DecodeReport,
    conv_encode,
    cyclic_decode,
    cyclic_decode_stream,
    cyclic_encode,
    cyclic_encode_stream,
    gf2_mod,
    viterbi_decode,
)
from .interleave import InterleaverConfig, deinterleave, interleave
from .modem import qpsk_demap, qpsk_map
from .ofdm import OfdmParams, dft, ofdm_demodulate, ofdm_modulate
from .simrun import (
    BerPoint,
    SweepConfig,
    count_errors,
    derive_seed,
    eb_n0_offset_db,
    emit_plot,
    oracle_sweep_config,
    read_csv,
    run_link,
    run_rep,
    run_sweep,
    theoretical_ber,
    transmit_audio,
    validate_oracles,
    write_csv,
    write_csv_groups,
)

__version__ = "0.1.0"

__all__ = [
    "AudioSegment",
    "BerPoint",
    "ChannelConfig",
    "ConvCodeConfig",
    "CyclicCodeConfig",
    "DecodeReport",
    "FadingRealization",
    "InterleaverConfig",
    "OfdmParams",
    "SweepConfig",
    "WavFormatError",
    "apply_channel",
    "as_bits",
    "bits_to_pcm",
    "conv_encode",
    "count_errors",
    "cyclic_decode",
    "cyclic_decode_stream",
    "cyclic_encode",
    "cyclic_encode_stream",
    "deinterleave",
    "derive_seed",
    "dft",
    "eb_n0_offset_db",
    "emit_plot",
    "equalize",
    "gaussian_pair",
    "gf2_mod",
    "interleave",
    "load_wav",
    "ofdm_demodulate",
    "ofdm_modulate",
    "oracle_sweep_config",
    "pcm_to_bits",
    "qpsk_demap",
    "qpsk_map",
    "read_csv",
    "run_link",
    "run_rep",
    "run_sweep",
    "synth_segment",
    "theoretical_ber",
    "transmit_audio",
    "validate_oracles",
    "write_csv",
    "write_csv_groups",
    "write_wav",
]
