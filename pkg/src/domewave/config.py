"""JSON configuration: unit-suffixed scalars, strict keys, default provenance.

Sections mirror the model types; scalar fields accept either bare SI
numbers or unit-suffixed strings ("25um", "20kHz", "10V"). Unknown keys
are rejected with their dotted path. Every omitted optional field gets its
default applied and recorded in ``Config.defaults_applied`` so callers can
echo the provenance.
"""

import json
from dataclasses import dataclass

from . import sweep as sweep_mod
from .dome import DomeGeometry, DriveSignal, PiezoFilm
from .errors import ParseError, ValidationError
from .field import FieldPoint, Medium, build_array
from .link import Hydrophone, HopPlan, LinkConfig
from .units import parse_count, parse_quantity

# section -> field -> (kind, default); defaults are rendered verbatim in the
# provenance log, so they stay in display units.
_SCHEMA = {
    "geometry": {
        "radius": ("length", "1mm"),
        "apex_height": ("length", "100um"),
        "thickness": ("length", "25um"),
    },
    "film": {
        "d_eff": ("piezo", "30pm/V"),
        "youngs_modulus": ("pressure", "2.5GPa"),
        "poisson_ratio": ("dimensionless", 0.34),
        "density": ("density", "1780kg/m3"),
        "residual_tension": ("tension", "0N/m"),
    },
    "medium": {
        "density": ("density", "1000kg/m3"),
        "sound_speed": ("speed", "1480m/s"),
        "ref_pressure": ("pressure", "1uPa"),
    },
    "array": {
        "panel_width": ("length", "3cm"),
        "panel_height": ("length", "3cm"),
        "pitch": ("length", "2mm"),
    },
    "drive": {
        "amplitude": ("voltage", "10V"),   # 20 Vpp drive
        "frequency": ("frequency", "20kHz"),
        "phase": ("angle", "0rad"),
    },
    "observation": {
        "x": ("length", "0m"),
        "y": ("length", "0m"),
        "z": ("length", "1m"),
    },
    "link": {
        "num_channels": ("count", 8),
        "band_low": ("frequency", "20kHz"),
        "band_high": ("frequency", "30kHz"),
        "tone_separation": ("frequency", "500Hz"),
        "symbol_rate": ("frequency", "1000Hz"),
        "pattern_seed": ("count", 0),
        "edge_margin": ("frequency", "1.5kHz"),
        "distance": ("length", "1m"),
        "sensitivity": ("sensitivity", "1mV/Pa"),
        "hydrophone_max_frequency": ("frequency", "200kHz"),
        "noise_psd": ("psd", 0.0),
        "drive_level_db": ("db", 0.0),
        "sample_rate": ("frequency", "192kHz"),
        "seed": ("count", 0),
        "thorp_absorption": ("flag", False),
    },
}

_SWEEP_PARAM_KIND = {
    "thickness": "length",
    "apex_height": "length",
    "radius": "length",
    "frequency": "frequency",
}

# sweep parameter -> the fixed field it would shadow
_SWEEP_CONFLICTS = {
    "thickness": "geometry.thickness",
    "apex_height": "geometry.apex_height",
    "radius": "geometry.radius",
    "frequency": "drive.frequency",
}


@dataclass(frozen=True)
class SweepSettings:
    """Raw sweep section; combined with the scenario by :meth:`Config.sweep_spec`."""

    parameter: str
    start: float
    stop: float
    steps: int
    outputs: tuple


@dataclass(frozen=True)
class Config:
    """Fully validated configuration with provenance of applied defaults."""

    geometry: DomeGeometry
    film: PiezoFilm
    medium: Medium
    panel_extent: tuple
    pitch: float
    drive: DriveSignal
    observation: FieldPoint
    plan: HopPlan
    link: LinkConfig
    sweep: SweepSettings
    defaults_applied: tuple
    explicit_paths: frozenset

    def scenario(self):
        return sweep_mod.Scenario(
            geometry=self.geometry, film=self.film, medium=self.medium,
            panel_extent=self.panel_extent, pitch=self.pitch, drive=self.drive,
            observation=self.observation, frequency=self.drive.frequency_f)

    def sweep_spec(self, parameter=None, start=None, stop=None, steps=None):
        """Sweep specification from the config section and/or CLI overrides."""
        settings = self.sweep
        parameter = parameter or (settings.parameter if settings else None)
        if parameter is None:
            raise ValidationError("no sweep section and no --param given", "sweep")
        if parameter not in _SWEEP_PARAM_KIND:
            raise ValidationError(
                f"unknown parameter {parameter!r}", "sweep.parameter")
        conflict = _SWEEP_CONFLICTS[parameter]
        if conflict in self.explicit_paths:
            raise ValidationError(
                f"swept parameter {parameter!r} is pinned by explicit {conflict}",
                "sweep.parameter")
        pick = lambda override, field: override if override is not None else \
            (getattr(settings, field) if settings else None)
        start, stop, steps = pick(start, "start"), pick(stop, "stop"), pick(steps, "steps")
        if start is None or stop is None or steps is None:
            raise ValidationError("sweep needs from/to/steps", "sweep")
        outputs = settings.outputs if settings else sweep_mod.OUTPUTS
        return sweep_mod.SweepSpec(parameter, float(start), float(stop), int(steps),
                                   self.scenario(), outputs)


def _reject_unknown(mapping, allowed, path):
    for key in mapping:
        if key not in allowed:
            raise ValidationError(f"unknown key {key!r}", f"{path}.{key}" if path else key)


def _parse_section(raw, section, explicit, defaults):
    schema = _SCHEMA[section]
    data = raw.get(section, {})
    if not isinstance(data, dict):
        raise ValidationError("section must be an object", section)
    _reject_unknown(data, schema, section)
    values = {}
    for name, (kind, default) in schema.items():
        path = f"{section}.{name}"
        if name in data:
            explicit.add(path)
            source = data[name]
        else:
            defaults.append(f"{path} = {default}")
            source = default
        if kind == "count":
            values[name] = parse_count(source, path)
        elif kind == "flag":
            if not isinstance(source, bool):
                raise ValidationError(f"expected true/false, got {source!r}", path)
            values[name] = source
        else:
            values[name] = parse_quantity(source, kind, path)
    return values


def _parse_sweep_section(raw, explicit, defaults):
    if "sweep" not in raw:
        return None
    data = raw["sweep"]
    if not isinstance(data, dict):
        raise ValidationError("section must be an object", "sweep")
    allowed = ("parameter", "from", "to", "steps", "outputs")
    _reject_unknown(data, allowed, "sweep")
    if "parameter" not in data:
        raise ValidationError("sweep section needs 'parameter'", "sweep.parameter")
    parameter = data["parameter"]
    if parameter not in _SWEEP_PARAM_KIND:
        raise ValidationError(f"unknown parameter {parameter!r}", "sweep.parameter")
    explicit.add("sweep.parameter")
    kind = _SWEEP_PARAM_KIND[parameter]
    start = parse_quantity(data["from"], kind, "sweep.from") if "from" in data else None
    stop = parse_quantity(data["to"], kind, "sweep.to") if "to" in data else None
    steps = parse_count(data["steps"], "sweep.steps") if "steps" in data else None
    if "outputs" in data:
        outputs = data["outputs"]
        if not isinstance(outputs, list) or not outputs:
            raise ValidationError("must be a non-empty list", "sweep.outputs")
        unknown = set(outputs) - set(sweep_mod.OUTPUTS)
        if unknown:
            raise ValidationError(f"unknown outputs {sorted(unknown)}", "sweep.outputs")
        outputs = tuple(outputs)
    else:
        outputs = sweep_mod.OUTPUTS
        defaults.append("sweep.outputs = all")
    return SweepSettings(parameter, start, stop, steps, outputs)


def _rewrap(section, exc):
    """Qualify a model-type validation error with its config section."""
    field = exc.field if getattr(exc, "field", "") else "?"
    return ValidationError(str(exc).split(": ", 1)[-1], f"{section}.{field}")


def build_config(raw):
    """Validate a parsed JSON object into a :class:`Config`."""
    if not isinstance(raw, dict):
        raise ValidationError("top level must be an object", "")
    _reject_unknown(raw, tuple(_SCHEMA) + ("sweep",), "")
    explicit, defaults = set(), []
    sections = {s: _parse_section(raw, s, explicit, defaults) for s in _SCHEMA}
    sweep_settings = _parse_sweep_section(raw, explicit, defaults)

    try:
        geometry = DomeGeometry(sections["geometry"]["radius"],
                                sections["geometry"]["apex_height"],
                                sections["geometry"]["thickness"])
    except ValidationError as exc:
        raise _rewrap("geometry", exc) from exc
    try:
        film = PiezoFilm(sections["film"]["d_eff"], sections["film"]["youngs_modulus"],
                         sections["film"]["poisson_ratio"], sections["film"]["density"],
                         sections["film"]["residual_tension"])
    except ValidationError as exc:
        raise _rewrap("film", exc) from exc
    try:
        medium = Medium(sections["medium"]["density"], sections["medium"]["sound_speed"],
                        sections["medium"]["ref_pressure"])
    except ValidationError as exc:
        raise _rewrap("medium", exc) from exc
    try:
        drive = DriveSignal(sections["drive"]["amplitude"], sections["drive"]["frequency"],
                            sections["drive"]["phase"])
    except ValidationError as exc:
        raise _rewrap("drive", exc) from exc
    obs = sections["observation"]
    try:
        observation = FieldPoint((obs["x"], obs["y"], obs["z"]))
    except ValidationError as exc:
        raise _rewrap("observation", exc) from exc

    panel_extent = (sections["array"]["panel_width"], sections["array"]["panel_height"])
    pitch = sections["array"]["pitch"]
    lk = sections["link"]
    try:
        plan = HopPlan(num_channels=lk["num_channels"],
                       band=(lk["band_low"], lk["band_high"]),
                       tone_separation=lk["tone_separation"],
                       symbol_rate=lk["symbol_rate"],
                       pattern_seed=lk["pattern_seed"],
                       edge_margin=lk["edge_margin"])
        hydrophone = Hydrophone(lk["sensitivity"], lk["hydrophone_max_frequency"])
        layout = build_array(panel_extent, pitch, geometry, drive)
        link = LinkConfig(layout=layout, film=film, medium=medium, plan=plan,
                          hydrophone=hydrophone, tx_rx_distance=lk["distance"],
                          noise_psd=lk["noise_psd"], drive_level_db=lk["drive_level_db"],
                          sample_rate=int(round(lk["sample_rate"])), seed=lk["seed"],
                          thorp_absorption=lk["thorp_absorption"])
    except ValidationError as exc:
        raise _rewrap("link", exc) from exc

    return Config(geometry=geometry, film=film, medium=medium,
                  panel_extent=panel_extent, pitch=pitch, drive=drive,
                  observation=observation, plan=plan, link=link,
                  sweep=sweep_settings, defaults_applied=tuple(defaults),
                  explicit_paths=frozenset(explicit))


def parse_config(path):
    """Load, parse and validate a JSON configuration file."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
    return build_config(raw)


def default_config():
    """Configuration with every field at its default."""
    return build_config({})
