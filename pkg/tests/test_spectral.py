import math

import numpy as np
import pytest

from domewave.errors import ValidationError, WaveformTooShort
from domewave.link import HopPlan, compute_spectrogram, estimate_snr, modulate
from domewave.link.spectral import frame_energies, guard_frequencies

FS = 192_000


def test_frame_count_formula():
    wave = np.zeros(4096)
    spec = compute_spectrogram(wave, 1024, 256, FS)
    assert spec.power_db.shape[0] == 13
    assert spec.power_db.shape[1] == 513
    assert spec.freqs[0] == 0.0
    assert spec.freqs[-1] == FS / 2


def test_pure_tone_lands_in_the_right_bin():
    t = np.arange(48_000) / FS
    wave = np.sin(2 * math.pi * 25e3 * t)
    spec = compute_spectrogram(wave, 2048, 512, FS)
    bin_hz = FS / 2048
    for frame in spec.power_db:
        assert abs(spec.freqs[int(np.argmax(frame))] - 25e3) <= bin_hz


def test_power_db_is_relative_to_max():
    rng = np.random.default_rng(2)
    spec = compute_spectrogram(rng.normal(0, 1, 8192), 512, 128, FS)
    assert spec.power_db.max() == 0.0


def test_parseval_rectangular_window():
    rng = np.random.default_rng(31)
    wave = rng.normal(0, 1, 8 * 1024)
    spec = compute_spectrogram(wave, 1024, 1024, FS, window="rect")
    total = frame_energies(spec).sum()
    assert total == pytest.approx(np.sum(wave ** 2), rel=1e-6)


def test_waveform_too_short():
    with pytest.raises(WaveformTooShort):
        compute_spectrogram(np.zeros(100), 1024, 256, FS)


def test_unknown_window_rejected():
    with pytest.raises(ValidationError):
        compute_spectrogram(np.zeros(4096), 1024, 256, FS, window="kaiser")


def test_spectrogram_csv_layout():
    spec = compute_spectrogram(np.sin(np.arange(4096) * 0.3), 1024, 512, FS)
    lines = spec.to_csv().splitlines()
    assert lines[0].startswith("freq_hz\\time_s,")
    assert len(lines) == 1 + spec.freqs.size
    assert len(lines[1].split(",")) == 1 + spec.times.size


def test_guard_frequencies_keep_margin():
    plan = HopPlan()
    guards = guard_frequencies(plan)
    assert guards.size > 0
    fine_bin = plan.symbol_rate / 8
    for g in guards:
        assert np.min(np.abs(plan.all_tones - g)) >= 3 * fine_bin
        assert plan.band[0] < g < plan.band[1]


def test_noise_free_estimate_is_floor_limited():
    plan = HopPlan()
    rng = np.random.default_rng(1)
    wave = modulate(rng.integers(0, 2, 500), plan, FS)
    est = estimate_snr(wave, plan, FS)
    assert est.floor_limited
    assert est.snr_db >= 60.0


def test_synthetic_tone_snr_matches_analytic():
    # single channel, all-space symbols: tone amplitude a in white noise of
    # variance sigma^2. With the per-symbol tone fit, signal power -> a^2/2
    # and fitted noise-bin power -> 2 sigma^2 / N, so
    # SNR = N a^2 / (4 sigma^2).
    plan = HopPlan(num_channels=1)
    n_sym = 4000
    sps = FS // int(plan.symbol_rate)
    amplitude, sigma = 1.0, 0.05
    rng = np.random.default_rng(77)
    wave = modulate(np.zeros(n_sym, dtype=np.uint8), plan, FS, amplitude)
    noisy = wave + rng.normal(0, sigma, wave.size)
    expected = 10 * math.log10(sps * amplitude ** 2 / (4 * sigma ** 2))
    est = estimate_snr(noisy, plan, FS)
    assert est.snr_db == pytest.approx(expected, abs=1.0)


def test_snr_monotone_in_drive_with_unit_slope():
    # 5 noise seeds x 7 drive levels: monotone non-increasing as the drive
    # drops, slope -> 1 dB per dB at high SNR
    plan = HopPlan()
    bits = np.random.default_rng(5).integers(0, 2, 1000)
    clean = modulate(bits, plan, FS, amplitude=1.0)
    levels = (0.0, -5.0, -10.0, -15.0, -20.0, -25.0, -30.0)
    for seed in range(5):
        noise = np.random.default_rng(seed).normal(0, 1.5e-2, clean.size)
        estimates = [estimate_snr(clean * 10 ** (db / 20) + noise, plan, FS).snr_db
                     for db in levels]
        assert all(b < a for a, b in zip(estimates, estimates[1:]))
        assert estimates[0] - estimates[1] == pytest.approx(5.0, abs=1.0)


def test_estimate_requires_a_symbol():
    with pytest.raises(WaveformTooShort):
        estimate_snr(np.zeros(10), HopPlan(), FS)
