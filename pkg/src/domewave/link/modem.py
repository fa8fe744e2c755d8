"""FH-BFSK modulator and noncoherent demodulator.

Symbols carry one bit each. The carrier hops over ``num_channels`` centres
per a seed-derived pattern; within a symbol the emitted tone is the hop
centre plus or minus half the tone separation (bit 1 -> mark above the
centre). Phase is continuous across symbol boundaries. Channel centres are
inset from the band edges by a guard margin so the hop-tone spectral
skirts stay inside the band.

Detection is symbol-synchronous and noncoherent: per symbol, the energies
in single-frequency bins at the two expected tones (given the known hop
pattern) are compared and the bit is the argmax. Symbol timing comes from
correlating against the known preamble waveform, or from an explicit
``start_sample``.
"""

import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.signal import fftconvolve

from ..errors import LengthMismatch, PreambleNotFound, ValidationError
from .framing import PREAMBLE_BITS

MAX_BIT_RATE = 15_000.0  # [bit/s], 1 bit per symbol


@dataclass(frozen=True)
class HopPlan:
    """Hop channels, tone placement and symbol timing of the FH-BFSK link."""

    num_channels: int = 8
    band: tuple = (20e3, 30e3)           # [Hz]
    tone_separation: float = 500.0       # [Hz] mark/space split
    symbol_rate: float = 1000.0          # [symbols/s]
    pattern_seed: int = 0
    edge_margin: float = 1500.0          # [Hz] channel inset from band edges
    pattern: tuple = None                # channel indices; derived from seed if None

    def __post_init__(self):
        if self.num_channels < 1:
            raise ValidationError("must be >= 1", "num_channels")
        if not self.band[0] < self.band[1]:
            raise ValidationError("band must be (low, high) with low < high", "band")
        if not self.tone_separation > 0:
            raise ValidationError("must be > 0", "tone_separation")
        if not 0 < self.symbol_rate <= MAX_BIT_RATE:
            raise ValidationError(
                f"must be in (0, {MAX_BIT_RATE:.0f}] symbols/s", "symbol_rate")
        if self.pattern is None:
            rng = np.random.default_rng(self.pattern_seed)
            object.__setattr__(self, "pattern",
                               tuple(int(c) for c in rng.permutation(self.num_channels)))
        else:
            object.__setattr__(self, "pattern", tuple(int(c) for c in self.pattern))
            if any(not 0 <= c < self.num_channels for c in self.pattern):
                raise ValidationError("pattern indices outside channel range", "pattern")
        centers = self.channel_centers
        lo = centers[0] - self.tone_separation / 2
        hi = centers[-1] + self.tone_separation / 2
        if lo < self.band[0] or hi > self.band[1]:
            raise ValidationError(
                f"tones [{lo:.0f}, {hi:.0f}] Hz spill outside the band", "tone_separation")

    @property
    def channel_centers(self):
        """Hop carrier centres, evenly spaced inside the guarded band."""
        lo = self.band[0] + self.edge_margin
        hi = self.band[1] - self.edge_margin
        if self.num_channels == 1:
            return np.asarray([(lo + hi) / 2])
        return np.linspace(lo, hi, self.num_channels)

    def tone(self, channel, bit):
        """Emitted frequency for a bit on one hop channel."""
        return self.channel_centers[channel] + (0.5 if bit else -0.5) * self.tone_separation

    def channel_for_symbol(self, k):
        return self.pattern[k % len(self.pattern)]

    @property
    def all_tones(self):
        """Sorted unique mark/space frequencies across all channels."""
        tones = [self.tone(c, b) for c in range(self.num_channels) for b in (0, 1)]
        return np.unique(np.asarray(tones))


def samples_per_symbol(plan, sample_rate):
    """Integer samples per symbol; the ratio must divide exactly."""
    sps = sample_rate / plan.symbol_rate
    if abs(sps - round(sps)) > 1e-9 or round(sps) < 2:
        raise ValidationError(
            f"sample rate {sample_rate} not an integer multiple of "
            f"symbol rate {plan.symbol_rate}", "sample_rate")
    return int(round(sps))


def symbol_tones(bits, plan):
    """Per-symbol emitted tone frequencies for a bit sequence."""
    bits = np.asarray(bits, dtype=np.uint8)
    centers = plan.channel_centers
    pattern = np.asarray(plan.pattern)
    channels = pattern[np.arange(bits.size) % pattern.size]
    return centers[channels] + (bits * 2.0 - 1.0) * (plan.tone_separation / 2.0)


def modulate(bits, plan, sample_rate, amplitude=1.0):
    """Continuous-phase FH-BFSK waveform [same unit as ``amplitude``]."""
    sps = samples_per_symbol(plan, sample_rate)
    tones = symbol_tones(bits, plan)
    instantaneous = np.repeat(tones, sps)
    phase = 2.0 * math.pi * np.cumsum(instantaneous) / sample_rate
    return amplitude * np.sin(phase)


def tone_bin_power(block, frequency, sample_rate):
    """Single-bin noncoherent energy metric |<x, e^{-i w n}>|^2 * (2/N)^2 / 2.

    Normalised so a full-block tone of amplitude A at ``frequency`` scores
    approximately A^2/2 (its mean-square power).
    """
    n = np.arange(block.size)
    probe = np.exp(-2j * math.pi * frequency * n / sample_rate)
    amp = 2.0 / block.size * np.dot(block, probe)
    return float(np.abs(amp) ** 2 / 2.0)


def _reference_preamble(plan, sample_rate):
    return modulate(PREAMBLE_BITS, plan, sample_rate, amplitude=1.0)


def find_preamble(waveform, plan, sample_rate, threshold=0.25):
    """Start sample of the preamble via normalised cross-correlation.

    Raises :class:`PreambleNotFound` when the best normalised correlation
    falls below ``threshold``.
    """
    ref = _reference_preamble(plan, sample_rate)
    if waveform.size < ref.size:
        raise PreambleNotFound("waveform shorter than the preamble")
    corr = fftconvolve(waveform, ref[::-1], mode="valid")
    energy = np.convolve(waveform ** 2, np.ones(ref.size), mode="valid")
    norm = np.sqrt(np.maximum(energy, 1e-300) * np.dot(ref, ref))
    score = np.abs(corr) / norm
    best = int(np.argmax(score))
    if score[best] < threshold:
        raise PreambleNotFound(
            f"best preamble correlation {score[best]:.3f} below {threshold}")
    return best


@dataclass(frozen=True)
class DemodResult:
    """Detected bits, per-symbol (space, mark) bin energies, and timing."""

    bits: np.ndarray
    soft_metrics: np.ndarray  # shape (n_symbols, 2): space/mark energies
    start_sample: int


def demodulate(waveform, plan, sample_rate, start_sample=None):
    """Symbol-synchronous noncoherent detection with the known hop pattern.

    ``start_sample=None`` locates the preamble first; pass 0 (or any
    integer) for raw aligned streams.
    """
    waveform = np.asarray(waveform, dtype=np.float64)
    sps = samples_per_symbol(plan, sample_rate)
    if start_sample is None:
        start_sample = find_preamble(waveform, plan, sample_rate)
    usable = waveform.size - start_sample
    n_symbols = usable // sps
    if n_symbols < 1:
        raise PreambleNotFound("no complete symbol after the synchronisation point")
    blocks = waveform[start_sample:start_sample + n_symbols * sps].reshape(n_symbols, sps)

    n = np.arange(sps)
    pattern = np.asarray(plan.pattern)
    channels = pattern[np.arange(n_symbols) % pattern.size]
    energies = np.empty((n_symbols, 2))
    for ch in np.unique(channels):
        rows = channels == ch
        for bit in (0, 1):
            probe = np.exp(-2j * math.pi * plan.tone(int(ch), bit) * n / sample_rate)
            amp = (2.0 / sps) * (blocks[rows] @ probe)
            energies[rows, bit] = np.abs(amp) ** 2 / 2.0
    bits = (energies[:, 1] > energies[:, 0]).astype(np.uint8)
    return DemodResult(bits, energies, int(start_sample))


def ber(sent, received):
    """Bit error ratio: Hamming distance over length."""
    sent = np.asarray(sent, dtype=np.uint8)
    received = np.asarray(received, dtype=np.uint8)
    if sent.size != received.size:
        raise LengthMismatch(f"{sent.size} sent bits vs {received.size} received")
    if sent.size == 0:
        raise LengthMismatch("empty bit sequences")
    return float(np.mean(sent != received))
