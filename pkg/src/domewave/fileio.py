"""File formats: PGM (P5, 8-bit) rasters and 32-bit float mono WAV."""

import numpy as np
from scipy.io import wavfile

from .errors import ValidationError


def read_pgm(path):
    """Read a binary PGM (P5) image into a (H, W) uint8 array."""
    with open(path, "rb") as fh:
        data = fh.read()
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos])
    if tokens[0] != b"P5":
        raise ValidationError(f"not a binary PGM (magic {tokens[0]!r})", str(path))
    width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    if not 0 < maxval <= 255:
        raise ValidationError(f"unsupported maxval {maxval}", str(path))
    pos += 1  # single whitespace after maxval
    pixels = np.frombuffer(data[pos:pos + width * height], dtype=np.uint8)
    if pixels.size != width * height:
        raise ValidationError("truncated pixel data", str(path))
    return pixels.reshape(height, width).copy()


def write_pgm(path, image):
    """Write a (H, W) uint8 array as binary PGM (P5)."""
    image = np.asarray(image)
    if image.ndim != 2 or image.dtype != np.uint8:
        raise ValidationError("expected a 2-D uint8 array", str(path))
    header = f"P5\n{image.shape[1]} {image.shape[0]}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(image.tobytes())


def write_wav(path, waveform, sample_rate):
    """Write a mono 32-bit float little-endian WAV."""
    wavfile.write(path, int(sample_rate), np.asarray(waveform, dtype=np.float32))


def read_wav(path):
    """Read a mono WAV; returns (waveform as float64, sample_rate)."""
    sample_rate, data = wavfile.read(path)
    if data.ndim != 1:
        raise ValidationError("expected a mono WAV", str(path))
    if data.dtype.kind == "i":
        data = data / float(np.iinfo(data.dtype).max)
    return np.asarray(data, dtype=np.float64), int(sample_rate)
