import math

import mpmath as mp
import numpy as np
import pytest
from scipy.integrate import quad

from domewave import (DomeGeometry, PiezoFilm, average_deflection,
                      deflection_profile, dome_apex_height, peak_deflection)
from domewave.errors import NegativeRadicand, OutOfDome, ValidationError
from conftest import draw_valid_dome_params

mp.mp.dps = 40


def oracle_apex(d, v, r, h0, t):
    """High-precision scalar evaluation of the apex-height closed form."""
    d, v, r, h0, t = (mp.mpf(x) for x in (d, v, r, h0, t))
    return mp.sqrt(2 * d * v * (r ** 2 + h0 ** 2) / t + h0 ** 2)


def oracle_peak(d, vm, r, h0, t):
    return (oracle_apex(d, vm, r, h0, t) - oracle_apex(d, -vm, r, h0, t)) / 2


def test_apex_zero_voltage_is_exactly_h0(geom, film):
    assert dome_apex_height(geom, film, 0.0) == geom.apex_height_H0


def test_apex_zero_coefficient_is_exactly_h0(geom):
    dead = PiezoFilm(d_eff=0.0)
    assert dome_apex_height(geom, dead, 123.0) == geom.apex_height_H0


def test_apex_reference_values(geom, film):
    # d = 30 pm/V, V = +/-20 V, R = 1 mm, H0 = 100 um, T = 25 um
    up = dome_apex_height(geom, film, 20.0)
    down = dome_apex_height(geom, film, -20.0)
    assert up == pytest.approx(float(oracle_apex(30e-12, 20, 1e-3, 100e-6, 25e-6)), rel=1e-13)
    assert down == pytest.approx(float(oracle_apex(30e-12, -20, 1e-3, 100e-6, 25e-6)), rel=1e-13)
    assert up == pytest.approx(100.2421e-6, rel=1e-6)
    assert down == pytest.approx(99.7573e-6, rel=1e-6)


def test_apex_monotone_in_voltage(geom, film):
    heights = [dome_apex_height(geom, film, v) for v in np.linspace(-20, 20, 41)]
    assert all(b > a for a, b in zip(heights, heights[1:]))


def test_apex_negative_radicand():
    geom = DomeGeometry(1e-3, 5e-6, 25e-6)
    with pytest.raises(NegativeRadicand):
        dome_apex_height(geom, PiezoFilm(), -20.0)


def test_peak_reference_value(geom, film):
    peak = peak_deflection(geom, film, 20.0)
    assert peak == pytest.approx(float(oracle_peak(30e-12, 20, 1e-3, 100e-6, 25e-6)), rel=1e-13)
    assert peak == pytest.approx(242.4e-9, rel=1e-3)


def test_peak_trivial_zeros(geom, film):
    assert peak_deflection(geom, film, 0.0) == 0.0
    assert peak_deflection(geom, PiezoFilm(d_eff=0.0), 15.0) == 0.0


def test_peak_odd_in_coefficient_sign(geom):
    plus = peak_deflection(geom, PiezoFilm(d_eff=30e-12), 7.0)
    minus = peak_deflection(geom, PiezoFilm(d_eff=-30e-12), 7.0)
    assert plus == -minus


def test_peak_small_signal_limit(geom, film):
    # linearization d*Vm*(R^2+H0^2)/(T*H0); valid once the perturbation is
    # below 1e-6 * H0^2
    h0 = geom.apex_height_H0
    q = (geom.radius_R ** 2 + h0 ** 2) / geom.thickness_T
    vm = 1e-6 * h0 ** 2 / (2 * film.d_eff * q)
    linear = film.d_eff * vm * q / h0
    assert peak_deflection(geom, film, vm) == pytest.approx(linear, rel=1e-6)


def test_peak_propagates_negative_radicand():
    geom = DomeGeometry(1e-3, 5e-6, 25e-6)
    with pytest.raises(NegativeRadicand):
        peak_deflection(geom, PiezoFilm(), 20.0)


def test_profile_shape(geom, film):
    peak = peak_deflection(geom, film, 20.0)
    assert deflection_profile(geom, film, 20.0, geom.radius_R) == 0.0
    assert deflection_profile(geom, film, 20.0, 0.0) == peak
    mid = deflection_profile(geom, film, 20.0, geom.radius_R / math.sqrt(2))
    assert mid == pytest.approx(peak / 2, rel=1e-12)


def test_profile_out_of_dome(geom, film):
    with pytest.raises(OutOfDome):
        deflection_profile(geom, film, 20.0, geom.radius_R * 1.0001)


def test_average_reference_value(geom, film):
    assert average_deflection(geom, film, 20.0) == pytest.approx(121.2e-9, rel=1e-3)
    assert average_deflection(geom, film, 0.0) == 0.0


def test_average_matches_quadrature_oracle(geom, film):
    # (1/(pi R^2)) * integral of D(r) * 2 pi r dr, fully independent of the
    # closed-form peak/2 shortcut
    integral, _ = quad(
        lambda r: deflection_profile(geom, film, 20.0, r) * 2 * math.pi * r,
        0.0, geom.radius_R, epsabs=1e-22, epsrel=1e-13)
    expected = integral / (math.pi * geom.radius_R ** 2)
    assert average_deflection(geom, film, 20.0) == pytest.approx(expected, rel=1e-10)


def test_average_over_peak_ratio_random_draws():
    rng = np.random.default_rng(2024)
    for d, vm, r, h0, t in draw_valid_dome_params(rng, 300):
        geom = DomeGeometry(r, h0, t)
        film = PiezoFilm(d_eff=d)
        peak = peak_deflection(geom, film, vm)
        assert average_deflection(geom, film, vm) == pytest.approx(peak / 2, rel=1e-12)


def test_random_draws_match_oracle():
    rng = np.random.default_rng(99)
    for d, vm, r, h0, t in draw_valid_dome_params(rng, 200):
        geom = DomeGeometry(r, h0, t)
        film = PiezoFilm(d_eff=d)
        assert dome_apex_height(geom, film, vm) == pytest.approx(
            float(oracle_apex(d, vm, r, h0, t)), rel=1e-12)
        assert peak_deflection(geom, film, vm) == pytest.approx(
            float(oracle_peak(d, vm, r, h0, t)), rel=1e-12)


def test_geometry_validation():
    with pytest.raises(ValidationError):
        DomeGeometry(0.0, 100e-6, 25e-6)
    with pytest.raises(ValidationError):
        DomeGeometry(1e-3, -1e-6, 25e-6)
    with pytest.raises(ValidationError):
        DomeGeometry(1e-3, 100e-6, 0.0)


def test_shallow_dome_predicate():
    assert DomeGeometry(1e-3, 100e-6, 5e-6).is_shallow
    assert not DomeGeometry(1e-3, 100e-6, 25e-6).is_shallow  # R/T = 40


def test_film_validation():
    with pytest.raises(ValidationError):
        PiezoFilm(poisson_ratio_nu=0.5)
    with pytest.raises(ValidationError):
        PiezoFilm(youngs_modulus_E=-1.0)
    with pytest.raises(ValidationError):
        PiezoFilm(residual_tension_T0=-2.0)
