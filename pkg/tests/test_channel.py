import dataclasses

import numpy as np
import pytest

from domewave import DriveSignal, Medium, PiezoFilm, build_array
from domewave.errors import ValidationError
from domewave.link import (HopPlan, Hydrophone, LinkConfig, apply_channel,
                           full_scale_amplitude, modulate, transducer_gain)

FS = 192_000


@pytest.fixture
def link(geom, film, water, drive):
    layout = build_array((0.03, 0.03), 2e-3, geom, drive)
    return LinkConfig(layout=layout, film=film, medium=water, plan=HopPlan(),
                      hydrophone=Hydrophone(sensitivity_S=1e-3))


def test_link_validation(geom, film, water, drive):
    layout = build_array((0.03, 0.03), 2e-3, geom, drive)
    with pytest.raises(ValidationError):
        LinkConfig(layout=layout, film=film, medium=water, plan=HopPlan(),
                   tx_rx_distance=0.0)
    with pytest.raises(ValidationError):
        LinkConfig(layout=layout, film=film, medium=water, plan=HopPlan(),
                   sample_rate=96_000)  # < 4 x 30 kHz


def test_noise_free_single_tone_is_delayed_scaled_copy(geom, film, water, drive):
    # one hop channel -> one gain value -> the chain degenerates to
    # scale + delay; cross-correlation peaks at distance/c
    layout = build_array((0.03, 0.03), 2e-3, geom, drive)
    plan = HopPlan(num_channels=1)
    link = LinkConfig(layout=layout, film=film, medium=water, plan=plan,
                      tx_rx_distance=1.0)
    wave = modulate(np.zeros(40, dtype=np.uint8), plan, FS, amplitude=10.0)
    out = apply_channel(wave, link)
    delay = link.delay_samples
    assert delay == round(1.0 / water.sound_speed_c * FS)
    gain = abs(transducer_gain(link, plan.tone(0, 0))) * link.hydrophone.sensitivity_S
    np.testing.assert_allclose(out[delay:], wave * gain, rtol=1e-12)
    assert np.all(out[:delay] == 0.0)
    lags = np.arange(-5, delay + 6)
    xc = [np.dot(out[max(l, 0):max(l, 0) + wave.size], wave[:out.size - max(l, 0)])
          for l in lags]
    assert abs(lags[int(np.argmax(xc))] - delay) <= 1


def test_zero_drive_leaves_pure_noise_of_known_variance(link):
    quiet = dataclasses.replace(link, noise_psd=4e-6, seed=11)
    out = apply_channel(np.zeros(400_000), quiet)
    expected_var = 4e-6 * (FS / 2) * quiet.hydrophone.sensitivity_S ** 2
    assert np.var(out) == pytest.approx(expected_var, rel=0.05)
    assert abs(np.mean(out)) < 10 * np.sqrt(expected_var / out.size)


def test_drive_down_10db_drops_received_power_10db(link, geom, film, water, drive):
    rng = np.random.default_rng(6)
    bits = rng.integers(0, 2, 300).astype(np.uint8)
    plan = link.plan
    wave = modulate(bits, plan, FS, amplitude=10.0)
    hi = apply_channel(wave, link)
    lo = apply_channel(wave * 10 ** (-10 / 20), link)
    drop = 10 * np.log10(np.mean(hi ** 2) / np.mean(lo ** 2))
    assert drop == pytest.approx(10.0, abs=0.2)


def test_channel_is_seed_deterministic(link):
    noisy = dataclasses.replace(link, noise_psd=1e-4, seed=21)
    wave = modulate(np.zeros(50, dtype=np.uint8), noisy.plan, FS)
    a = apply_channel(wave, noisy)
    b = apply_channel(wave, noisy)
    assert np.array_equal(a, b)
    other = dataclasses.replace(noisy, seed=22)
    assert not np.array_equal(a, apply_channel(wave, other))


def test_gain_tracks_array_response(link):
    # per-tone gain equals the rayleigh response magnitude per volt
    g_low = abs(transducer_gain(link, 21e3))
    g_high = abs(transducer_gain(link, 29e3))
    assert g_high > g_low  # f^2 prefactor dominates over this band


def test_full_scale_amplitude(link):
    assert full_scale_amplitude(link, 10.0) == 10.0
    damped = dataclasses.replace(link, drive_level_db=-20.0)
    assert full_scale_amplitude(damped, 10.0) == pytest.approx(1.0, rel=1e-12)


def test_thorp_absorption_coefficient():
    from domewave.link import thorp_absorption_db_per_km
    # classic curve: ~6 dB/km at 25 kHz, negligible over a 1 m path
    mid_band = thorp_absorption_db_per_km(25e3)
    assert 5.0 < mid_band < 7.0
    assert mid_band * 1e-3 < 0.01  # dB over 1 m
    assert thorp_absorption_db_per_km(100e3) > mid_band


def test_thorp_option_attenuates_the_expected_amount(geom, film, water, drive):
    layout = build_array((0.03, 0.03), 2e-3, geom, drive)
    plan = HopPlan(num_channels=1)
    wave = modulate(np.zeros(20, dtype=np.uint8), plan, FS, amplitude=10.0)
    base = LinkConfig(layout=layout, film=film, medium=water, plan=plan,
                      tx_rx_distance=500.0)
    wet = dataclasses.replace(base, thorp_absorption=True)
    p_dry = np.mean(apply_channel(wave, base) ** 2)
    p_wet = np.mean(apply_channel(wave, wet) ** 2)
    from domewave.link import thorp_absorption_db_per_km
    expected_db = thorp_absorption_db_per_km(plan.tone(0, 0)) * 0.5
    assert 10 * np.log10(p_dry / p_wet) == pytest.approx(expected_db, abs=1e-9)
