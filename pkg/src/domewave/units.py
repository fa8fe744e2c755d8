"""Parsing of unit-suffixed scalars ("25um", "20kHz", "10V") to SI floats."""

import math
import re

from .errors import ValidationError

_UNIT_TABLES = {
    "length": {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "µm": 1e-6,
               "nm": 1e-9, "pm": 1e-12},
    "frequency": {"Hz": 1.0, "kHz": 1e3, "MHz": 1e6},
    "voltage": {"V": 1.0, "mV": 1e-3, "kV": 1e3},
    "pressure": {"Pa": 1.0, "uPa": 1e-6, "µPa": 1e-6, "kPa": 1e3,
                 "MPa": 1e6, "GPa": 1e9},
    "density": {"kg/m3": 1.0, "g/cm3": 1e3},
    "speed": {"m/s": 1.0, "km/s": 1e3},
    "tension": {"N/m": 1.0},
    "piezo": {"m/V": 1.0, "nm/V": 1e-9, "pm/V": 1e-12},
    "sensitivity": {"V/Pa": 1.0, "mV/Pa": 1e-3, "uV/Pa": 1e-6},
    "psd": {"Pa2/Hz": 1.0, "Pa^2/Hz": 1.0},
    "angle": {"rad": 1.0, "deg": math.pi / 180.0},
    "db": {"dB": 1.0},
    "dimensionless": {},
    "count": {},
}

_NUMBER = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*(.*?)\s*$")


def parse_quantity(value, kind, field=""):
    """Convert a number or unit-suffixed string to an SI float.

    Bare numbers (and bare numeric strings) are taken as already SI.
    """
    if kind not in _UNIT_TABLES:
        raise ValueError(f"unknown quantity kind {kind!r}")
    if isinstance(value, bool):
        raise ValidationError(f"expected a {kind}, got a boolean", field)
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise ValidationError(f"expected a number or '<number><unit>' string, got {type(value).__name__}", field)
    m = _NUMBER.match(value)
    if not m or not m.group(1):
        raise ValidationError(f"cannot parse {value!r} as a {kind}", field)
    number, unit = float(m.group(1)), m.group(2)
    if unit == "":
        return number
    table = _UNIT_TABLES[kind]
    if unit not in table:
        known = ", ".join(sorted(table)) or "none (bare numbers only)"
        raise ValidationError(f"unknown {kind} unit {unit!r} (accepted: {known})", field)
    return number * table[unit]


def parse_count(value, field=""):
    """Parse a non-negative integer (no unit suffixes)."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"expected an integer, got {value!r}", field)
    if value < 0:
        raise ValidationError("must be >= 0", field)
    return value
