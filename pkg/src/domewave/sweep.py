"""Parametric study engine: geometry/frequency sweeps and SPL frequency response.

Rows are independent and may be evaluated in parallel (capped by
DOMEWAVE_THREADS); output order is fixed by the parameter grid, so tables
are bit-identical across runs and thread counts. Points that violate a
model precondition become error rows carrying the exception class name,
never silently dropped.

Note on trends: the analytic deflection model (no electrode stiffening)
predicts deflection monotone decreasing in thickness, while published FEM
studies of such domes show a rise-then-fall; only the trends the reduced
model genuinely implies are asserted by the test suite.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import dome, field, resonance
from ._threads import thread_count
from .errors import DomewaveError, ValidationError

SWEEP_CSV_HEADER = "param,value,peak_deflection_m,avg_deflection_m,first_resonance_hz,spl_db,error"

PARAMETERS = ("thickness", "apex_height", "radius", "frequency")
OUTPUTS = ("peak_deflection", "average_deflection", "first_resonance", "spl_at_point")

MAX_RESPONSE_FREQUENCY = 500e3  # [Hz]


@dataclass(frozen=True)
class Scenario:
    """Full fixed model configuration a sweep varies one parameter of."""

    geometry: dome.DomeGeometry
    film: dome.PiezoFilm
    medium: field.Medium
    panel_extent: tuple      # (x, y) [m]
    pitch: float             # [m]
    drive: dome.DriveSignal
    observation: field.FieldPoint
    frequency: float         # [Hz] used for spl_at_point


@dataclass(frozen=True)
class SweepSpec:
    """One swept parameter over a linear grid, everything else fixed."""

    swept_parameter: str
    start: float
    stop: float
    steps: int
    fixed: Scenario
    outputs: tuple = OUTPUTS

    def __post_init__(self):
        if self.swept_parameter not in PARAMETERS:
            raise ValidationError(f"unknown parameter {self.swept_parameter!r} "
                                  f"(one of {', '.join(PARAMETERS)})", "swept_parameter")
        if not self.start < self.stop:
            raise ValidationError("sweep range needs min < max", "start")
        if self.steps < 2:
            raise ValidationError("must be >= 2", "steps")
        unknown = set(self.outputs) - set(OUTPUTS)
        if unknown:
            raise ValidationError(f"unknown outputs {sorted(unknown)}", "outputs")


@dataclass(frozen=True)
class SweepRow:
    """One evaluated grid point; unset outputs are None, errors carry a code."""

    parameter: str
    value: float
    peak_deflection_m: float = None
    avg_deflection_m: float = None
    first_resonance_hz: float = None
    spl_db: float = None
    error: str = None


def _apply_parameter(scenario, name, value):
    geom = scenario.geometry
    if name == "thickness":
        geom = replace(geom, thickness_T=value)
    elif name == "apex_height":
        geom = replace(geom, apex_height_H0=value)
    elif name == "radius":
        geom = replace(geom, radius_R=value)
    elif name == "frequency":
        return replace(scenario, frequency=value)
    return replace(scenario, geometry=geom)


def _evaluate(spec, value):
    try:
        sc = _apply_parameter(spec.fixed, spec.swept_parameter, value)
        row = {}
        if "peak_deflection" in spec.outputs:
            row["peak_deflection_m"] = dome.peak_deflection(
                sc.geometry, sc.film, sc.drive.amplitude_Vm)
        if "average_deflection" in spec.outputs:
            row["avg_deflection_m"] = dome.average_deflection(
                sc.geometry, sc.film, sc.drive.amplitude_Vm)
        if "first_resonance" in spec.outputs:
            row["first_resonance_hz"] = resonance.first_resonance(sc.geometry, sc.film)
        if "spl_at_point" in spec.outputs:
            layout = field.build_array(sc.panel_extent, sc.pitch, sc.geometry, sc.drive)
            pressure = field.rayleigh_pressure(
                layout, sc.film, sc.medium, sc.observation, sc.frequency)
            row["spl_db"] = field.spl(pressure, sc.medium)
        return SweepRow(spec.swept_parameter, value, **row)
    except DomewaveError as exc:
        return SweepRow(spec.swept_parameter, value, error=type(exc).__name__)


def run_sweep(spec):
    """Evaluate the grid; one row per step, ordered by parameter value."""
    values = np.linspace(spec.start, spec.stop, spec.steps)
    workers = thread_count()
    if workers > 1 and spec.steps > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda v: _evaluate(spec, float(v)), values))
    return [_evaluate(spec, float(v)) for v in values]


def _cell(x):
    return "" if x is None else repr(x)


def rows_to_csv(rows):
    """Render sweep rows under the fixed header; deterministic formatting."""
    lines = [SWEEP_CSV_HEADER]
    for r in rows:
        lines.append(",".join([
            r.parameter, repr(r.value), _cell(r.peak_deflection_m),
            _cell(r.avg_deflection_m), _cell(r.first_resonance_hz),
            _cell(r.spl_db), r.error or ""]))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class FrequencyResponse:
    """SPL-vs-frequency table with the location of its maximum."""

    rows: tuple                # of (frequency_hz, spl_db)
    peak_frequency_hz: float
    peak_spl_db: float

    def to_csv(self):
        lines = [f"# peak_frequency_hz={self.peak_frequency_hz!r}", "frequency_hz,spl_db"]
        lines += [f"{repr(f)},{repr(s)}" for f, s in self.rows]
        return "\n".join(lines) + "\n"


def frequency_response(layout, film, medium, point, f_range, steps):
    """SPL at one field point across a frequency range.

    ``f_range`` is (f_min, f_max) inside (0, 500 kHz]; a zero-length range
    yields a single row at f_min.
    """
    f_min, f_max = float(f_range[0]), float(f_range[1])
    if not 0 < f_min <= f_max or f_max > MAX_RESPONSE_FREQUENCY:
        raise ValidationError(
            f"range must lie within (0, {MAX_RESPONSE_FREQUENCY:.0f}] Hz", "f_range")
    if f_min == f_max:
        freqs = np.asarray([f_min])
    else:
        if steps < 2:
            raise ValidationError("must be >= 2 for a non-degenerate range", "steps")
        freqs = np.linspace(f_min, f_max, steps)
    rows = []
    for f in freqs:
        pressure = field.rayleigh_pressure(layout, film, medium, point, float(f))
        rows.append((float(f), field.spl(pressure, medium)))
    peak = max(rows, key=lambda r: r[1])
    return FrequencyResponse(tuple(rows), peak[0], peak[1])
