import json

import pytest

from domewave.config import build_config, default_config, parse_config
from domewave.errors import ParseError, ValidationError
from domewave.units import parse_quantity


def write_config(tmp_path, obj):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(obj))
    return str(path)


def test_minimal_config_applies_defaults(tmp_path):
    path = write_config(tmp_path, {"geometry": {
        "radius": "1mm", "apex_height": "100um", "thickness": "25um"}})
    cfg = parse_config(path)
    assert cfg.geometry.radius_R == pytest.approx(1e-3)
    assert cfg.geometry.thickness_T == pytest.approx(25e-6)
    assert cfg.film.d_eff == pytest.approx(30e-12)
    assert cfg.medium.sound_speed_c == 1480.0
    # provenance records every applied default, none for explicit fields
    assert any(line.startswith("film.d_eff") for line in cfg.defaults_applied)
    assert any(line.startswith("medium.density") for line in cfg.defaults_applied)
    assert not any(line.startswith("geometry.radius") for line in cfg.defaults_applied)
    assert "geometry.radius" in cfg.explicit_paths


def test_zero_thickness_rejected_with_path(tmp_path):
    path = write_config(tmp_path, {"geometry": {"thickness": "0um"}})
    with pytest.raises(ValidationError) as err:
        parse_config(path)
    assert err.value.field == "geometry.thickness_T"


def test_unknown_key_named(tmp_path):
    path = write_config(tmp_path, {"geometry": {"thikness": "25um"}})
    with pytest.raises(ValidationError) as err:
        parse_config(path)
    assert "thikness" in str(err.value)


def test_unknown_section_rejected():
    with pytest.raises(ValidationError):
        build_config({"geomtry": {}})


def test_parse_error_carries_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "geometry": { broken\n}')
    with pytest.raises(ParseError) as err:
        parse_config(str(path))
    assert err.value.line == 2


def test_default_config_builds_everything():
    cfg = default_config()
    assert len(cfg.link.layout) == 225
    assert cfg.link.sample_rate == 192_000
    assert cfg.plan.num_channels == 8
    assert cfg.drive.amplitude_Vm == 10.0  # 20 Vpp
    assert cfg.observation.position[2] == 1.0


def test_sweep_section_and_conflict():
    cfg = build_config({"sweep": {
        "parameter": "thickness", "from": "10um", "to": "100um", "steps": 5}})
    spec = cfg.sweep_spec()
    assert spec.swept_parameter == "thickness"
    assert spec.start == pytest.approx(10e-6)
    assert spec.steps == 5

    pinned = build_config({
        "geometry": {"thickness": "25um"},
        "sweep": {"parameter": "thickness", "from": "10um", "to": "100um", "steps": 5}})
    with pytest.raises(ValidationError):
        pinned.sweep_spec()


def test_link_section_round_trips():
    cfg = build_config({"link": {
        "num_channels": 4, "noise_psd": 1e-6, "seed": 9,
        "distance": "50cm", "sensitivity": "2mV/Pa"}})
    assert cfg.plan.num_channels == 4
    assert cfg.link.noise_psd == 1e-6
    assert cfg.link.seed == 9
    assert cfg.link.tx_rx_distance == pytest.approx(0.5)
    assert cfg.link.hydrophone.sensitivity_S == pytest.approx(2e-3)


def test_unit_parsing():
    assert parse_quantity("25um", "length") == pytest.approx(25e-6)
    assert parse_quantity("20kHz", "frequency") == 20e3
    assert parse_quantity("10V", "voltage") == 10.0
    assert parse_quantity("2.5GPa", "pressure") == 2.5e9
    assert parse_quantity("30pm/V", "piezo") == pytest.approx(30e-12)
    assert parse_quantity("1mV/Pa", "sensitivity") == pytest.approx(1e-3)
    assert parse_quantity(0.001, "length") == 0.001
    assert parse_quantity("0.001", "length") == 0.001
    with pytest.raises(ValidationError):
        parse_quantity("25lightyears", "length")
    with pytest.raises(ValidationError):
        parse_quantity("fast", "speed")
    with pytest.raises(ValidationError):
        parse_quantity(True, "length")


def test_invalid_film_field_path():
    with pytest.raises(ValidationError) as err:
        build_config({"film": {"poisson_ratio": 0.7}})
    assert err.value.field == "film.poisson_ratio_nu"
