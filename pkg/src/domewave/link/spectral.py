"""STFT spectrograms and tone-bin SNR estimation.

The spectrogram is a magnitude-squared STFT on a Hann (or rectangular)
window, stored in dB relative to its maximum bin, with
frames = floor((N - window) / hop) + 1 and no padding.

The SNR estimator is symbol-synchronous: per symbol it fits the two
expected hop tones by least squares (a two-component cosine/sine fit,
exact for a real tone of any non-integer bin frequency), takes the larger
fitted power as the occupied-bin signal power, subtracts the fitted tone,
and measures noise as the mean fitted power of the residual at in-band
guard frequencies at least three fine-grid bins away from every hop tone.
Subtracting the detected tone first removes the burst-gating leakage that
would otherwise swamp guards of a densely packed plan. The noise estimate
is floored at 1e-6 of the signal power, so a noise-free input reports
exactly 60 dB and is flagged floor-limited.
"""

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError, WaveformTooShort
from .modem import samples_per_symbol

DB_FLOOR = -300.0
SNR_FLOOR_RATIO = 1e-6  # noise floored at this fraction of signal power


@dataclass(frozen=True)
class Spectrogram:
    """STFT power map: frame times [s], bin frequencies [Hz], dB re max bin."""

    times: np.ndarray
    freqs: np.ndarray
    power_db: np.ndarray     # shape (num_frames, num_bins)
    window_length: int
    hop_length: int
    peak_power: float        # linear power of the 0 dB reference bin

    @property
    def power_linear(self):
        return self.peak_power * 10.0 ** (self.power_db / 10.0)

    def to_csv(self):
        """Times across the header row, frequencies down the first column."""
        lines = ["freq_hz\\time_s," + ",".join(repr(t) for t in self.times)]
        for i, f in enumerate(self.freqs):
            lines.append(repr(float(f)) + "," +
                         ",".join(repr(float(v)) for v in self.power_db[:, i]))
        return "\n".join(lines) + "\n"


def compute_spectrogram(waveform, window_length, hop_length, sample_rate,
                        window="hann"):
    """Magnitude-squared STFT in dB re the maximum bin."""
    waveform = np.asarray(waveform, dtype=np.float64)
    if window_length < 2 or hop_length < 1:
        raise ValidationError("window must be >= 2 and hop >= 1", "window_length")
    if waveform.size < window_length:
        raise WaveformTooShort(
            f"{waveform.size} samples shorter than window {window_length}")
    if window == "hann":
        taper = np.hanning(window_length)
    elif window == "rect":
        taper = np.ones(window_length)
    else:
        raise ValidationError(f"unknown window {window!r}", "window")

    num_frames = (waveform.size - window_length) // hop_length + 1
    starts = np.arange(num_frames) * hop_length
    frames = waveform[starts[:, None] + np.arange(window_length)] * taper
    spectrum = np.fft.rfft(frames, axis=1)
    power = np.abs(spectrum) ** 2
    peak = float(power.max())
    if peak == 0.0:
        power_db = np.full(power.shape, DB_FLOOR)
        peak = 1.0
    else:
        with np.errstate(divide="ignore"):
            power_db = 10.0 * np.log10(power / peak)
        power_db = np.maximum(power_db, DB_FLOOR)
    times = (starts + window_length / 2.0) / sample_rate
    freqs = np.fft.rfftfreq(window_length, 1.0 / sample_rate)
    return Spectrogram(times, freqs, power_db, window_length, hop_length, peak)


def frame_energies(spec):
    """Per-frame linear signal energy via the one-sided Parseval weights."""
    power = spec.power_linear
    weights = np.full(power.shape[1], 2.0)
    weights[0] = 1.0
    if spec.window_length % 2 == 0:
        weights[-1] = 1.0
    return power @ weights / spec.window_length


def _tone_basis(frequency, sps, sample_rate):
    n = np.arange(sps)
    w = 2.0 * math.pi * frequency / sample_rate
    return np.cos(w * n), np.sin(w * n)


def _fit_tone(blocks, frequency, sample_rate):
    """Least-squares fit of a real tone to each row of ``blocks``.

    Returns (power, residual): the fitted tone's mean-square power a^2/2
    per row, and the rows with the fitted tone removed. Exact (to machine
    precision) for rows that are pure tones at ``frequency``.
    """
    sps = blocks.shape[1]
    c, s = _tone_basis(frequency, sps, sample_rate)
    gram = np.array([[np.dot(c, c), np.dot(c, s)],
                     [np.dot(c, s), np.dot(s, s)]])
    rhs = np.stack([blocks @ c, blocks @ s], axis=1)
    coef = np.linalg.solve(gram, rhs.T).T  # (rows, 2): cos/sin amplitudes
    power = 0.5 * np.sum(coef ** 2, axis=1)
    residual = blocks - coef[:, :1] * c[None, :] - coef[:, 1:] * s[None, :]
    return power, residual


def guard_frequencies(plan, margin_bins=3):
    """In-band probe frequencies >= ``margin_bins`` fine bins from any tone.

    The fine grid steps at symbol_rate/8 (the natural sub-bin resolution of
    the default plan); candidates are laid every half symbol rate across
    the band and filtered by the margin.
    """
    fine_bin = plan.symbol_rate / 8.0
    margin = margin_bins * fine_bin
    tones = plan.all_tones
    step = plan.symbol_rate / 2.0
    lo, hi = plan.band
    candidates = np.arange(lo + step / 2, hi, step)
    keep = np.array([np.min(np.abs(tones - f)) >= margin for f in candidates])
    guards = candidates[keep]
    if guards.size == 0:
        raise ValidationError(
            "no guard frequencies at the required margin; plan too dense", "plan")
    return guards


@dataclass(frozen=True)
class SnrEstimate:
    """Tone-bin SNR with its components; ``floor_limited`` marks a clamp."""

    snr_db: float
    signal_power: float
    noise_power: float
    floor_limited: bool


def estimate_snr(waveform, plan, sample_rate, start_sample=0):
    """Hop-tone signal power over guard-bin noise power, in dB.

    See the module docstring for the estimator construction.
    """
    waveform = np.asarray(waveform, dtype=np.float64)
    sps = samples_per_symbol(plan, sample_rate)
    usable = waveform.size - start_sample
    n_symbols = usable // sps
    if n_symbols < 1:
        raise WaveformTooShort("waveform shorter than one symbol")
    blocks = waveform[start_sample:start_sample + n_symbols * sps].reshape(n_symbols, sps)

    pattern = np.asarray(plan.pattern)
    channels = pattern[np.arange(n_symbols) % pattern.size]
    guards = guard_frequencies(plan)

    signal_power = np.empty(n_symbols)
    residual = np.empty_like(blocks)
    for ch in np.unique(channels):
        rows = np.flatnonzero(channels == ch)
        p0, r0 = _fit_tone(blocks[rows], plan.tone(int(ch), 0), sample_rate)
        p1, r1 = _fit_tone(blocks[rows], plan.tone(int(ch), 1), sample_rate)
        take_mark = p1 > p0
        signal_power[rows] = np.where(take_mark, p1, p0)
        residual[rows] = np.where(take_mark[:, None], r1, r0)

    noise_powers = np.empty((n_symbols, guards.size))
    for gi, gf in enumerate(guards):
        noise_powers[:, gi] = _fit_tone(residual, gf, sample_rate)[0]

    ps = float(np.mean(signal_power))
    pn = float(np.mean(noise_powers))
    if ps <= 0.0:
        return SnrEstimate(-math.inf, ps, pn, False)
    floor = ps * SNR_FLOOR_RATIO
    floor_limited = pn < floor
    pn_effective = max(pn, floor)
    return SnrEstimate(10.0 * math.log10(ps / pn_effective), ps, pn, floor_limited)
