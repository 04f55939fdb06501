"""Scenario files: flat ``key = value`` text with dotted keys and unit tokens.

Example::

    channel = environment_induces_crystal
    crystal.radius = 1 um
    crystal.relative_permittivity = 5.7
    environment.species = He
    environment.T = 1 K
    environment.n = 1e8 m-3
    superposition.delta_x = 1e-5 m

Bare numbers are SI.  ``#`` starts a comment.  Unknown keys, duplicate keys
and dimension mismatches are rejected with the offending line and column.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError, DomainError, UnitError
from .qgem import (
    CrystalSpec,
    GasSpecies,
    induced_crystal_dipole,
    induced_environment_dipole,
    permanent_dipole_field,
    species_by_name,
)
from .quantities import (
    DENSITY,
    DIMENSIONLESS,
    DIPOLE,
    FREQUENCY,
    LENGTH,
    MASS,
    NUMBER_DENSITY,
    PRESSURE,
    TEMPERATURE,
    TIME,
    VOLUME,
    parse_quantity,
    pressure_to_number_density,
)
from .rates import EnvironmentSpec, SuperpositionSpec
from .scattering import DipolePair, ScatteringContext
from .special import DistributionKind, MomentumDistribution

__all__ = [
    "Channel",
    "Model",
    "ScenarioConfig",
    "SweepSpec",
    "SCENARIO_KEYS",
    "parse_config",
    "load_config",
    "PRESETS",
    "preset_text",
]


class Channel(enum.Enum):
    PERMANENT_PERMANENT = "permanent_permanent"
    ENVIRONMENT_INDUCES_CRYSTAL = "environment_induces_crystal"
    CRYSTAL_INDUCES_ENVIRONMENT = "crystal_induces_environment"


class Model(enum.Enum):
    AUTO = "auto"
    SHORT = "short"
    SHORT_APPROX = "short_approx"
    LONG = "long"
    GENERIC = "generic"


def _choice(enum_cls):
    def parse(text):
        try:
            return enum_cls(text).value
        except ValueError:
            allowed = ", ".join(e.value for e in enum_cls)
            raise ConfigError(f"expected one of {allowed}, got {text!r}") from None

    return parse


def _token(text):
    if not text or any(c.isspace() for c in text):
        raise ConfigError(f"expected a single token, got {text!r}")
    return text


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise ConfigError(f"expected an integer, got {text!r}") from None
    return value


# key -> parser for the value text.  Dimensioned keys map to a Dimension.
SCENARIO_KEYS = {
    "channel": _choice(Channel),
    "model": _choice(Model),
    "distribution": _choice(DistributionKind),
    "budget": FREQUENCY,
    "crystal.radius": LENGTH,
    "crystal.density": DENSITY,
    "crystal.mass": MASS,
    "crystal.relative_permittivity": DIMENSIONLESS,
    "crystal.dipole": DIPOLE,
    "crystal.interaction_distance": LENGTH,
    "environment.species": _token,
    "environment.mass": MASS,
    "environment.dipole": DIPOLE,
    "environment.polarizability_volume": VOLUME,
    "environment.T": TEMPERATURE,
    "environment.n": NUMBER_DENSITY,
    "environment.p": PRESSURE,
    "environment.density_reference_temperature": TEMPERATURE,
    "superposition.delta_x": LENGTH,
    "superposition.hold_time": TIME,
}

SWEEP_KEYS = {
    "sweep.variable": _token,
    "sweep.scale": _choice(enum.Enum("Scale", {"LINEAR": "linear", "LOG": "log"})),
    "sweep.lo": None,
    "sweep.hi": None,
    "sweep.points": _positive_int,
    "sweep.overlay": _token,
    "sweep.overlay_values": None,
    "sweep.output": _choice(enum.Enum("Output", {"RATE": "rate", "DIPOLE_BOUND": "dipole_bound"})),
}

DEFAULTS = {
    "channel": "permanent_permanent",
    "model": "auto",
    "distribution": "delta",
    "budget": 1e-2,
    "crystal.relative_permittivity": 5.7,
    "crystal.density": 3.5e3,
    "superposition.delta_x": 1e-5,
    "superposition.hold_time": 1.0,
}


def parse_value(key, text):
    """Convert the value text of ``key`` to its internal representation."""
    spec = SCENARIO_KEYS[key]
    if callable(spec):
        return spec(text)
    return parse_quantity(text, spec)


@dataclass(frozen=True)
class SweepSpec:
    """Grid over one scenario key, optionally repeated for overlay values."""

    variable: str
    lo: float
    hi: float
    points: int
    scale: str = "log"
    overlay: Optional[str] = None
    overlay_values: tuple = ()
    output: str = "rate"

    def __post_init__(self):
        if self.variable not in SCENARIO_KEYS or callable(SCENARIO_KEYS[self.variable]):
            raise ConfigError(f"cannot sweep non-numeric or unknown key {self.variable!r}", field="sweep.variable")
        if not self.lo < self.hi:
            raise ConfigError("sweep.lo must be below sweep.hi", field="sweep.lo")
        if self.points < 2:
            raise ConfigError("sweep.points must be at least 2", field="sweep.points")
        if self.scale == "log" and not self.lo > 0:
            raise ConfigError("log sweep requires sweep.lo > 0", field="sweep.lo")
        if self.overlay is not None:
            if self.overlay not in SCENARIO_KEYS:
                raise ConfigError(f"unknown overlay key {self.overlay!r}", field="sweep.overlay")
            if not self.overlay_values:
                raise ConfigError("overlay given without values", field="sweep.overlay_values")

    def grid(self):
        if self.scale == "log":
            return np.logspace(math.log10(self.lo), math.log10(self.hi), self.points).tolist()
        return np.linspace(self.lo, self.hi, self.points).tolist()


@dataclass(frozen=True)
class ScenarioConfig:
    """A fully resolved scenario.

    ``fields`` keeps the parsed key values (SI floats or tokens) so that sweeps
    can override one key and re-resolve.
    """

    fields: dict
    crystal: CrystalSpec
    environment: EnvironmentSpec
    superposition: SuperpositionSpec
    channel: Channel
    distribution: DistributionKind
    model: Model
    budget: float
    pair: DipolePair
    sweep: Optional[SweepSpec] = None

    @property
    def context(self) -> ScatteringContext:
        return ScatteringContext(self.pair, self.environment.species.mass, self.crystal.radius)

    def momentum_distribution(self) -> MomentumDistribution:
        return MomentumDistribution(self.distribution, self.environment.species.mass, self.environment.T)

    def with_field(self, key, value) -> "ScenarioConfig":
        fields = dict(self.fields)
        fields[key] = value
        if key == "environment.n":
            fields.pop("environment.p", None)
        elif key == "environment.p":
            fields.pop("environment.n", None)
        return resolve(fields, sweep=self.sweep)


def _species(fields) -> GasSpecies:
    name = fields.get("environment.species", "custom")
    try:
        base = species_by_name(name)
    except DomainError:
        base = None
    if base is None and "environment.mass" not in fields:
        raise ConfigError(f"species {name!r} is not built in; give environment.mass", field="environment.species")
    kwargs = {}
    if "environment.mass" in fields:
        kwargs["mass"] = fields["environment.mass"]
    if "environment.dipole" in fields:
        kwargs["permanent_dipole"] = fields["environment.dipole"]
    if "environment.polarizability_volume" in fields:
        kwargs["polarizability_volume"] = fields["environment.polarizability_volume"]
    if base is None:
        return GasSpecies(name, **kwargs)
    return dataclasses.replace(base, **kwargs)


def _require(fields, key, why):
    if key not in fields:
        raise ConfigError(f"missing required key ({why})", field=key)
    return fields[key]


def resolve(fields, sweep=None) -> ScenarioConfig:
    """Validate parsed ``fields`` and build the :class:`ScenarioConfig`."""
    merged = {**DEFAULTS, **fields}
    try:
        crystal = CrystalSpec(
            radius=_require(merged, "crystal.radius", "crystal radius"),
            density=merged["crystal.density"],
            mass=merged.get("crystal.mass"),
            relative_permittivity=merged["crystal.relative_permittivity"],
            dipole=merged.get("crystal.dipole"),
        )
        species = _species(merged)
        T = _require(merged, "environment.T", "temperature")
        has_n, has_p = "environment.n" in merged, "environment.p" in merged
        if has_n == has_p:
            raise ConfigError("give exactly one of environment.n and environment.p", field="environment.n")
        if has_n:
            n = merged["environment.n"]
            if "environment.density_reference_temperature" in merged:
                raise ConfigError("reference temperature only applies with environment.p",
                                  field="environment.density_reference_temperature")
        else:
            t_ref = merged.get("environment.density_reference_temperature", T)
            n = pressure_to_number_density(merged["environment.p"], t_ref)
        environment = EnvironmentSpec(species, T, n)
        superposition = SuperpositionSpec(merged["superposition.delta_x"], merged["superposition.hold_time"])
        channel = Channel(merged["channel"])
        pair = _dipoles(channel, crystal, species, merged)
        if not merged["budget"] > 0:
            raise ConfigError("budget must be positive", field="budget")
    except ConfigError:
        raise
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    return ScenarioConfig(
        fields=dict(fields),
        crystal=crystal,
        environment=environment,
        superposition=superposition,
        channel=channel,
        distribution=DistributionKind(merged["distribution"]),
        model=Model(merged["model"]),
        budget=merged["budget"],
        pair=pair,
        sweep=sweep,
    )


def _dipoles(channel, crystal, species, fields) -> DipolePair:
    if channel is Channel.PERMANENT_PERMANENT:
        d1 = _require(fields, "crystal.dipole", "permanent_permanent needs the crystal dipole")
        if species.permanent_dipole is None:
            raise ConfigError("permanent_permanent needs a polar species", field="environment.dipole")
        return DipolePair(d1, species.permanent_dipole)
    if channel is Channel.ENVIRONMENT_INDUCES_CRYSTAL:
        if "crystal.dipole" in fields:
            raise ConfigError("crystal dipole is derived in this channel; remove it", field="crystal.dipole")
        if species.permanent_dipole is None:
            raise ConfigError("environment_induces_crystal needs a polar species", field="environment.dipole")
        d2 = species.permanent_dipole
        return DipolePair(induced_crystal_dipole(d2, crystal.relative_permittivity), d2)
    d1 = _require(fields, "crystal.dipole", "crystal_induces_environment needs the crystal dipole")
    if not species.polarizability_volume > 0:
        raise ConfigError("crystal_induces_environment needs a polarizable species",
                          field="environment.polarizability_volume")
    r_bar = fields.get("crystal.interaction_distance", crystal.radius)
    d2 = induced_environment_dipole(species, permanent_dipole_field(d1, r_bar))
    return DipolePair(d1, d2)


# --------------------------------------------------------------------------
# Text format
# --------------------------------------------------------------------------


def _split_lines(text):
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        if "=" not in body:
            col = len(body) - len(body.lstrip()) + 1
            raise ConfigError("expected 'key = value'", line=lineno, column=col)
        key_part, value_part = body.split("=", 1)
        key = key_part.strip()
        value = value_part.strip()
        key_col = len(key_part) - len(key_part.lstrip()) + 1
        value_col = len(key_part) + 2 + (len(value_part) - len(value_part.lstrip()))
        if not value:
            raise ConfigError("empty value", line=lineno, column=value_col, field=key)
        yield lineno, key, key_col, value, value_col


def _parse_sweep_number(key, variable, text, line, col):
    if variable not in SCENARIO_KEYS or callable(SCENARIO_KEYS[variable]):
        raise ConfigError(f"sweep.variable must name a numeric key before {key}", line=line, column=col, field=key)
    return parse_value(variable, text)


def parse_config(text) -> ScenarioConfig:
    """Parse scenario text (see module docstring)."""
    fields, sweep_raw, seen = {}, {}, set()
    for line, key, key_col, value, value_col in _split_lines(text):
        if key in seen:
            raise ConfigError("duplicate key", line=line, column=key_col, field=key)
        seen.add(key)
        if key in SWEEP_KEYS:
            sweep_raw[key] = (value, line, value_col)
            continue
        if key not in SCENARIO_KEYS:
            raise ConfigError("unknown key", line=line, column=key_col, field=key)
        try:
            fields[key] = parse_value(key, value)
        except UnitError as exc:
            raise UnitError(str(exc), line=line, column=value_col, field=key) from None
        except ConfigError as exc:
            raise ConfigError(str(exc), line=line, column=value_col, field=key) from None
    sweep = _build_sweep(sweep_raw) if sweep_raw else None
    return resolve(fields, sweep=sweep)


def _build_sweep(raw) -> SweepSpec:
    def get(key, required=True):
        if key not in raw:
            if required:
                raise ConfigError("missing sweep key", field=key)
            return None
        return raw[key]

    def convert(key, parser, entry):
        value, line, col = entry
        try:
            return parser(value)
        except ConfigError as exc:
            raise ConfigError(str(exc), line=line, column=col, field=key) from None

    variable = convert("sweep.variable", _token, get("sweep.variable"))
    out = {"variable": variable}
    for key in ("sweep.lo", "sweep.hi"):
        value, line, col = get(key)
        try:
            out[key[6:]] = _parse_sweep_number(key, variable, value, line, col)
        except ConfigError as exc:
            raise type(exc)(str(exc), line=line, column=col, field=key) from None
    out["points"] = convert("sweep.points", _positive_int, get("sweep.points"))
    if get("sweep.scale", False):
        out["scale"] = convert("sweep.scale", SWEEP_KEYS["sweep.scale"], raw["sweep.scale"])
    if get("sweep.output", False):
        out["output"] = convert("sweep.output", SWEEP_KEYS["sweep.output"], raw["sweep.output"])
    if get("sweep.overlay", False):
        overlay = convert("sweep.overlay", _token, raw["sweep.overlay"])
        if overlay not in SCENARIO_KEYS:
            _, line, col = raw["sweep.overlay"]
            raise ConfigError(f"unknown overlay key {overlay!r}", line=line, column=col, field="sweep.overlay")
        value, line, col = get("sweep.overlay_values")
        values = []
        for item in value.split(","):
            try:
                values.append(parse_value(overlay, item.strip()))
            except ConfigError as exc:
                raise type(exc)(str(exc), line=line, column=col, field="sweep.overlay_values") from None
        out["overlay"] = overlay
        out["overlay_values"] = tuple(values)
    elif "sweep.overlay_values" in raw:
        _, line, col = raw["sweep.overlay_values"]
        raise ConfigError("overlay values without sweep.overlay", line=line, column=col, field="sweep.overlay_values")
    return SweepSpec(**out)


def load_config(path) -> ScenarioConfig:
    """Read and resolve a scenario file (UTF-8)."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError as exc:
        raise ConfigError(f"{path} is not valid UTF-8 ({exc.reason})") from None
    return parse_config(text)


# --------------------------------------------------------------------------
# Built-in presets
# --------------------------------------------------------------------------

# Short-wavelength rate against temperature for four pressures.  The number
# density of each curve is fixed at its 1 K value.
_FIG2 = """\
channel = permanent_permanent
model = short_approx
crystal.radius = 1e-6 m
crystal.dipole = 1e-30 Cm
environment.species = generic
environment.mass = 1e-27 kg
environment.dipole = 1e-29 Cm
environment.T = 1 K
environment.p = 1e-15 Pa
environment.density_reference_temperature = 1 K
superposition.delta_x = 1e-5 m
sweep.variable = environment.T
sweep.scale = log
sweep.lo = 0.1 K
sweep.hi = 10 K
sweep.points = 21
sweep.overlay = environment.p
sweep.overlay_values = 1e-15 Pa, 1e-14 Pa, 1e-13 Pa, 1e-12 Pa
"""

# Largest crystal dipole against environmental dipole for four rate budgets.
_FIG3 = """\
channel = permanent_permanent
model = short_approx
crystal.radius = 1e-6 m
crystal.dipole = 1e-26 Cm
environment.species = generic
environment.mass = 1e-27 kg
environment.dipole = 1 Debye
environment.T = 1 K
environment.n = 1e8 m-3
superposition.delta_x = 1e-5 m
sweep.variable = environment.dipole
sweep.scale = log
sweep.lo = 1e-31 Cm
sweep.hi = 1e-28 Cm
sweep.points = 31
sweep.overlay = budget
sweep.overlay_values = 1e-5 Hz, 1e-4 Hz, 1e-3 Hz, 1e-2 Hz
sweep.output = dipole_bound
"""

# Rate from the dipole a permanent crystal dipole induces in air molecules.
_FIG4 = """\
channel = crystal_induces_environment
model = short_approx
crystal.radius = 1e-6 m
crystal.dipole = 1e-26 Cm
environment.species = N2
environment.T = 1 K
environment.n = 1e8 m-3
superposition.delta_x = 1e-5 m
sweep.variable = crystal.dipole
sweep.scale = log
sweep.lo = 1e-26 Cm
sweep.hi = 1e-23 Cm
sweep.points = 31
sweep.overlay = environment.species
sweep.overlay_values = N2, O2, Ar, CO2
"""

_TABLE1 = """\
channel = crystal_induces_environment
model = short_approx
crystal.radius = 1e-6 m
crystal.dipole = 1e-23 Cm
environment.species = N2
environment.T = 1 K
environment.n = 1e8 m-3
"""

PRESETS = {"fig2": _FIG2, "fig3": _FIG3, "fig4": _FIG4, "table1": _TABLE1}


def preset_text(name) -> str:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
