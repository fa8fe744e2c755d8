"""End-to-end FH-BFSK underwater acoustic link simulation."""

from .channel import (Hydrophone, LinkConfig, apply_channel, full_scale_amplitude,
                      thorp_absorption_db_per_km, transducer_gain)
from .framing import (build_frame, crc16, decode_image, encode_image,
                      frame_bit_count, parse_frame)
from .modem import DemodResult, HopPlan, ber, demodulate, find_preamble, modulate
from .spectral import Spectrogram, SnrEstimate, compute_spectrogram, estimate_snr

__all__ = [
    "Hydrophone", "LinkConfig", "apply_channel", "full_scale_amplitude",
    "thorp_absorption_db_per_km", "transducer_gain",
    "build_frame", "crc16", "decode_image", "encode_image",
    "frame_bit_count", "parse_frame", "DemodResult", "HopPlan", "ber",
    "demodulate", "find_preamble", "modulate", "Spectrogram", "SnrEstimate",
    "compute_spectrogram", "estimate_snr",
]
