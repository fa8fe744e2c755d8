import numpy as np
import pytest

from domewave.errors import LengthMismatch, PreambleNotFound, ValidationError
from domewave.link import HopPlan, ber, demodulate, find_preamble, modulate
from domewave.link.modem import samples_per_symbol, symbol_tones

FS = 192_000


def test_plan_defaults_and_pattern_determinism():
    a, b = HopPlan(), HopPlan()
    assert a.pattern == b.pattern
    assert sorted(a.pattern) == list(range(8))
    assert HopPlan(pattern_seed=1).pattern != a.pattern
    np.testing.assert_allclose(a.channel_centers, np.linspace(21500, 28500, 8))


def test_plan_tones_stay_in_band():
    # margins smaller than half the separation push edge tones out of band
    with pytest.raises(ValidationError):
        HopPlan(edge_margin=100.0, tone_separation=500.0)
    with pytest.raises(ValidationError):
        HopPlan(edge_margin=0.0, tone_separation=500.0)
    HopPlan(edge_margin=250.0, tone_separation=500.0)  # exactly at the edge is legal


def test_plan_symbol_rate_cap():
    with pytest.raises(ValidationError):
        HopPlan(symbol_rate=16_000.0)


def test_samples_per_symbol_divisibility():
    assert samples_per_symbol(HopPlan(), FS) == 192
    with pytest.raises(ValidationError):
        samples_per_symbol(HopPlan(symbol_rate=999.0), FS)


def test_single_channel_all_zero_bits_is_pure_tone():
    plan = HopPlan(num_channels=1, tone_separation=500.0)
    assert plan.channel_centers[0] == 25e3
    wave = modulate(np.zeros(64, dtype=np.uint8), plan, FS)
    spectrum = np.abs(np.fft.rfft(wave)) ** 2
    freqs = np.fft.rfftfreq(wave.size, 1 / FS)
    peak = freqs[np.argmax(spectrum)]
    assert peak == pytest.approx(24_750.0, abs=freqs[1])
    assert spectrum.max() / spectrum.sum() > 0.99  # essentially all energy in one line


def test_waveform_duration():
    plan = HopPlan()
    for n in (1, 7, 100):
        wave = modulate(np.zeros(n, dtype=np.uint8), plan, FS)
        assert abs(wave.size - n / plan.symbol_rate * FS) <= 1


def test_phase_continuity_at_symbol_boundaries():
    plan = HopPlan(pattern_seed=2)
    rng = np.random.default_rng(0)
    wave = modulate(rng.integers(0, 2, 50), plan, FS)
    # no sample-to-sample jump may exceed the steepest tone slope
    max_step = 2 * np.pi * 30e3 / FS
    assert np.max(np.abs(np.diff(wave))) <= max_step + 1e-9


def test_band_occupancy_any_seed():
    for seed in range(5):
        plan = HopPlan(pattern_seed=seed)
        rng = np.random.default_rng(seed + 100)
        wave = modulate(rng.integers(0, 2, 3000), plan, FS)
        power = np.abs(np.fft.rfft(wave)) ** 2
        freqs = np.fft.rfftfreq(wave.size, 1 / FS)
        in_band = (freqs >= 20e3) & (freqs <= 30e3)
        assert power[in_band].sum() / power.sum() >= 0.99


def test_loopback_zero_errors():
    plan = HopPlan(pattern_seed=7)
    rng = np.random.default_rng(42)
    bits = rng.integers(0, 2, 10_000).astype(np.uint8)
    result = demodulate(modulate(bits, plan, FS), plan, FS, start_sample=0)
    assert ber(bits, result.bits) == 0.0
    assert result.soft_metrics.shape == (10_000, 2)


def test_noise_only_gives_coin_flip_ber():
    plan = HopPlan()
    rng = np.random.default_rng(8)
    noise = rng.normal(0.0, 1.0, 10_000 * 192)
    result = demodulate(noise, plan, FS, start_sample=0)
    sent = rng.integers(0, 2, 10_000).astype(np.uint8)
    assert ber(sent, result.bits) == pytest.approx(0.5, abs=0.02)


def test_ber_at_10db_symbol_snr():
    # noncoherent orthogonal BFSK at Es/N0 = 10 dB: theory 3.4e-3 < 1e-2,
    # Monte-Carlo over 1e5 bits with a fixed seed
    plan = HopPlan(tone_separation=1000.0, pattern_seed=5)
    rng = np.random.default_rng(1234)
    bits = rng.integers(0, 2, 100_000).astype(np.uint8)
    wave = modulate(bits, plan, FS)
    es = 0.5 / plan.symbol_rate
    n0 = es / 10.0
    noisy = wave + rng.normal(0, np.sqrt(n0 * FS / 2), wave.size)
    result = demodulate(noisy, plan, FS, start_sample=0)
    assert ber(bits, result.bits) < 1e-2


def test_preamble_sync_finds_offset():
    from domewave.link.framing import PREAMBLE_BITS
    plan = HopPlan()
    rng = np.random.default_rng(3)
    payload = rng.integers(0, 2, 200).astype(np.uint8)
    frame = np.concatenate([PREAMBLE_BITS, payload])
    wave = modulate(frame, plan, FS)
    shifted = np.concatenate([np.zeros(1234), wave])
    assert find_preamble(shifted, plan, FS) == 1234
    result = demodulate(shifted, plan, FS)
    assert ber(frame, result.bits[:frame.size]) == 0.0


def test_preamble_not_found_in_noise():
    plan = HopPlan()
    noise = np.random.default_rng(9).normal(0, 1, 100_000)
    with pytest.raises(PreambleNotFound):
        find_preamble(noise, plan, FS)


def test_symbol_tones_follow_pattern():
    plan = HopPlan(num_channels=4, pattern=(2, 0, 3, 1))
    bits = np.array([0, 1, 0, 1, 0], dtype=np.uint8)
    tones = symbol_tones(bits, plan)
    centers = plan.channel_centers
    expected = [centers[2] - 250, centers[0] + 250, centers[3] - 250,
                centers[1] + 250, centers[2] - 250]
    np.testing.assert_allclose(tones, expected)


def test_ber_validation():
    with pytest.raises(LengthMismatch):
        ber([0, 1], [0, 1, 1])
    assert ber([0, 1, 1, 0, 1, 0, 1, 0], [0, 1, 1, 0, 1, 0, 1, 1]) == 0.125
    assert ber([1, 0], [0, 1]) == 1.0
    assert ber([1, 0], [1, 0]) == 0.0
