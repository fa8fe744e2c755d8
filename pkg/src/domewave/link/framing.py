"""Bit framing for image payloads: sync word, 16-bit length, CRC-16/CCITT.

Frame layout: 32-bit preamble || 16-bit big-endian payload byte count ||
payload bytes MSB-first || CRC-16 (poly 0x1021, init 0xFFFF) over the
length field plus payload. Image dimensions are not framed; the receiver
supplies them out of band.
"""

import numpy as np

from ..errors import CrcMismatch, LengthMismatch, PayloadTooLarge, PreambleNotFound

#: 32-bit attached sync marker (strong autocorrelation).
PREAMBLE_WORD = 0x1ACFFC1D
PREAMBLE_BITS = np.unpackbits(
    np.frombuffer(PREAMBLE_WORD.to_bytes(4, "big"), dtype=np.uint8))
PREAMBLE_LENGTH = 32
LENGTH_BITS = 16
CRC_BITS = 16
MAX_PAYLOAD_BYTES = 0xFFFF

CRC_POLY = 0x1021
CRC_INIT = 0xFFFF


def crc16(data):
    """CRC-16/CCITT-FALSE over ``data`` bytes."""
    crc = CRC_INIT
    for byte in data:
        crc ^= byte << 8
        for _ in range(8):
            if crc & 0x8000:
                crc = ((crc << 1) ^ CRC_POLY) & 0xFFFF
            else:
                crc = (crc << 1) & 0xFFFF
    return crc


def bytes_to_bits(data):
    return np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8))


def bits_to_bytes(bits):
    return np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes()


def build_frame(payload):
    """Frame a byte payload; returns a uint8 0/1 bit array."""
    payload = bytes(payload)
    if len(payload) > MAX_PAYLOAD_BYTES:
        raise PayloadTooLarge(
            f"{len(payload)} bytes exceeds the {MAX_PAYLOAD_BYTES}-byte length field")
    length = len(payload).to_bytes(2, "big")
    crc = crc16(length + payload).to_bytes(2, "big")
    return np.concatenate([
        PREAMBLE_BITS, bytes_to_bits(length),
        bytes_to_bits(payload) if payload else np.empty(0, dtype=np.uint8),
        bytes_to_bits(crc)])


def parse_frame(bits, max_preamble_errors=4):
    """Recover the payload from a bit stream starting at the preamble.

    Tolerates up to ``max_preamble_errors`` flipped sync bits; raises
    :class:`PreambleNotFound` beyond that, :class:`CrcMismatch` (with the
    damaged payload attached) on checksum failure.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.size < PREAMBLE_LENGTH + LENGTH_BITS + CRC_BITS:
        raise PreambleNotFound(f"stream of {bits.size} bits shorter than an empty frame")
    sync_errors = int(np.sum(bits[:PREAMBLE_LENGTH] != PREAMBLE_BITS))
    if sync_errors > max_preamble_errors:
        raise PreambleNotFound(f"{sync_errors} sync-word bit errors")
    length_bits = bits[PREAMBLE_LENGTH:PREAMBLE_LENGTH + LENGTH_BITS]
    length = int.from_bytes(bits_to_bytes(length_bits), "big")
    end = PREAMBLE_LENGTH + LENGTH_BITS + 8 * length
    if bits.size < end + CRC_BITS:
        raise CrcMismatch(f"frame truncated: length field says {length} bytes")
    payload = bits_to_bytes(bits[PREAMBLE_LENGTH + LENGTH_BITS:end])
    received_crc = int.from_bytes(bits_to_bytes(bits[end:end + CRC_BITS]), "big")
    expected_crc = crc16(length.to_bytes(2, "big") + payload)
    if received_crc != expected_crc:
        raise CrcMismatch(
            f"CRC 0x{received_crc:04X} != expected 0x{expected_crc:04X}", payload)
    return payload


def frame_bit_count(payload_bytes):
    """Total frame length in bits for a payload of the given byte count."""
    return PREAMBLE_LENGTH + LENGTH_BITS + 8 * payload_bytes + CRC_BITS


def encode_image(image):
    """Frame a grayscale raster (2-D uint8 array) as row-major pixel bytes."""
    image = np.asarray(image)
    if image.ndim != 2 or image.dtype != np.uint8:
        raise ValueError("expected a 2-D uint8 grayscale raster")
    return build_frame(image.tobytes())


def decode_image(bits, width, height):
    """Inverse of :func:`encode_image`; dimensions come from out of band."""
    payload = parse_frame(bits)
    if len(payload) != width * height:
        raise LengthMismatch(
            f"payload of {len(payload)} bytes does not match {width}x{height}")
    return np.frombuffer(payload, dtype=np.uint8).reshape(height, width)
