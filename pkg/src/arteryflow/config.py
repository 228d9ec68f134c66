"""Flat ``key = value`` configuration with dotted section keys.

Example::

    scenario = damped_wave
    grid.j_cells = 750
    physics.cf = 0.005053
    boundary.left.kind = imposed_discharge
    boundary.left.waveform = sine
    boundary.left.q_amp = 3.45e-7
    run.snapshots = 1.0, 2.5, 5.0

A ``scenario`` key expands the named preset first; every other key then
overrides it. Command-line overrides may use a unique key suffix
(``cf=0`` means ``physics.cf=0``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .analytic import dead_man_state
from .boundary import KINDS as BOUNDARY_KINDS
from .boundary import BoundaryDriver, make_waveform
from .core import (ConservedState, Grid1D, PhysicalParams, SimulationState,
                   VesselGeometry, area, radius)
from .errors import ConfigError
from .integrator import FLUX_KINDS, Problem
from .scenarios import (GEOMETRY_PROFILES, INITIAL_PROFILES, PRESETS, WAVEFORM_PARAMS,
                        geometry_profiles, preset_values, radius_bump)

FIXED_KEYS = {
    "scenario": str,
    "grid.j_cells": int,
    "grid.length": float,
    "physics.rho": float,
    "physics.cf": float,
    "physics.p0": float,
    "geometry.profile": str,
    "initial.profile": str,
    "boundary.left.kind": str,
    "boundary.left.waveform": str,
    "boundary.right.kind": str,
    "boundary.right.waveform": str,
    "run.t_end": float,
    "run.n_cfl": float,
    "run.flux": str,
    "run.snapshots": tuple,
}

ALIASES = {"J": "grid.j_cells", "L": "grid.length", "T_end": "run.t_end", "n_CFL": "run.n_cfl"}


@dataclass
class ProfileSpec:
    name: str
    params: dict = field(default_factory=dict)


@dataclass
class BoundarySpec:
    kind: str = "transmissive"
    waveform: str | None = None
    params: dict = field(default_factory=dict)


@dataclass
class SimulationConfig:
    """Validated description of one run."""

    j_cells: int
    length: float
    physics: PhysicalParams
    geometry: ProfileSpec
    initial: ProfileSpec
    left: BoundarySpec
    right: BoundarySpec
    t_end: float
    n_cfl: float = 1.0
    flux: str = "hll"
    snapshots: tuple = ()
    scenario: str = "custom"

    def __post_init__(self):
        self.validate()

    # -- validation -----------------------------------------------------------

    def validate(self):
        def need(ok, fld, msg):
            if not ok:
                raise ConfigError(msg, field=fld)

        need(isinstance(self.j_cells, int) and self.j_cells >= 2, "grid.j_cells",
             "must be an integer >= 2")
        need(_finite(self.length) and self.length > 0, "grid.length", "must be > 0")
        need(_finite(self.t_end) and self.t_end >= 0, "run.t_end", "must be >= 0")
        need(_finite(self.n_cfl) and 0 < self.n_cfl <= 1, "run.n_cfl", "must lie in (0, 1]")
        need(self.flux in FLUX_KINDS, "run.flux", f"must be one of {sorted(FLUX_KINDS)}")
        for t in self.snapshots:
            need(_finite(t) and 0 <= t <= self.t_end, "run.snapshots",
                 f"time {t!r} outside [0, t_end]")
        _check_profile("geometry", self.geometry, GEOMETRY_PROFILES)
        _check_profile("initial", self.initial, INITIAL_PROFILES)
        for side, spec in (("left", self.left), ("right", self.right)):
            prefix = f"boundary.{side}"
            need(spec.kind in BOUNDARY_KINDS, f"{prefix}.kind",
                 f"must be one of {BOUNDARY_KINDS}")
            if spec.kind == "imposed_discharge":
                need(spec.waveform in WAVEFORM_PARAMS, f"{prefix}.waveform",
                     f"must be one of {sorted(WAVEFORM_PARAMS)} for imposed_discharge")
                _check_params(prefix, spec.params, WAVEFORM_PARAMS[spec.waveform])
            else:
                need(not spec.params, prefix, f"{spec.kind} closure takes no parameters")

    # -- flat view ------------------------------------------------------------

    def to_flat(self) -> dict:
        flat = {
            "scenario": self.scenario,
            "grid.j_cells": self.j_cells,
            "grid.length": self.length,
            "physics.rho": self.physics.rho,
            "physics.cf": self.physics.cf,
            "physics.p0": self.physics.p0,
            "geometry.profile": self.geometry.name,
        }
        flat.update({f"geometry.{k}": v for k, v in self.geometry.params.items()})
        flat["initial.profile"] = self.initial.name
        flat.update({f"initial.{k}": v for k, v in self.initial.params.items()})
        for side, spec in (("left", self.left), ("right", self.right)):
            flat[f"boundary.{side}.kind"] = spec.kind
            if spec.waveform is not None:
                flat[f"boundary.{side}.waveform"] = spec.waveform
            flat.update({f"boundary.{side}.{k}": v for k, v in spec.params.items()})
        flat.update({"run.t_end": self.t_end, "run.n_cfl": self.n_cfl,
                     "run.flux": self.flux, "run.snapshots": tuple(self.snapshots)})
        return flat

    @classmethod
    def from_flat(cls, values: dict, *, line_of: dict | None = None) -> "SimulationConfig":
        """Build from flat keys; a ``scenario`` key pulls in its preset underneath."""
        line_of = line_of or {}
        values = dict(values)
        scenario = values.get("scenario", "custom")
        if scenario != "custom":
            if scenario not in PRESETS:
                raise ConfigError(f"unknown scenario {scenario!r}; expected one of {PRESETS}",
                                  field="scenario", line=line_of.get("scenario"))
            values = {**_preset_underlay(scenario, values), **values}
        flat = {key: _coerce(key, value, line_of.get(key)) for key, value in values.items()}

        def take(prefix, exclude=()):
            n = len(prefix)
            return {k[n:]: v for k, v in flat.items()
                    if k.startswith(prefix) and "." not in k[n:] and k[n:] not in exclude}

        for key in flat:
            if key not in FIXED_KEYS and not _is_param_key(key):
                raise ConfigError("unknown key", field=key, line=line_of.get(key))

        required = ("grid.j_cells", "grid.length", "run.t_end", "geometry.profile", "initial.profile")
        for key in required:
            if key not in flat:
                raise ConfigError("missing required key", field=key)

        def boundary(side):
            prefix = f"boundary.{side}."
            return BoundarySpec(flat.get(prefix + "kind", "transmissive"),
                                flat.get(prefix + "waveform"),
                                take(prefix, ("kind", "waveform")))

        try:
            physics = PhysicalParams(flat.get("physics.rho", 1060.0), flat.get("physics.cf", 0.0),
                                     flat.get("physics.p0", 0.0))
        except ValueError as exc:
            field_name = str(exc).split()[0]
            raise ConfigError(str(exc), field=f"physics.{field_name}") from None

        geometry = ProfileSpec(flat["geometry.profile"], take("geometry.", ("profile",)))
        initial = ProfileSpec(flat["initial.profile"], take("initial.", ("profile",)))
        _fill_defaults(geometry, GEOMETRY_PROFILES)
        _fill_defaults(initial, INITIAL_PROFILES)
        left, right = boundary("left"), boundary("right")
        if left.waveform in WAVEFORM_PARAMS:
            _fill_defaults(ProfileSpec(left.waveform, left.params), WAVEFORM_PARAMS)
        return cls(
            j_cells=flat["grid.j_cells"], length=flat["grid.length"], physics=physics,
            geometry=geometry, initial=initial, left=left, right=right,
            t_end=flat["run.t_end"], n_cfl=flat.get("run.n_cfl", 1.0),
            flux=flat.get("run.flux", "hll"), snapshots=tuple(flat.get("run.snapshots", ())),
            scenario=scenario,
        )

    def with_overrides(self, overrides: dict) -> "SimulationConfig":
        flat = self.to_flat()
        return SimulationConfig.from_flat({**flat, **resolve_keys(overrides, flat)})

    # -- text -------------------------------------------------------------------

    def dumps(self) -> str:
        lines = [f"{key} = {_format(value)}" for key, value in self.to_flat().items()]
        return "\n".join(lines) + "\n"

    # -- materialization ----------------------------------------------------

    def build(self) -> Problem:
        """Sample profiles on the grid and assemble a runnable :class:`Problem`."""
        grid = Grid1D(self.j_cells, self.length)
        k_of_x, a0_of_x = geometry_profiles(self.geometry.name, self.geometry.params)
        try:
            geometry = VesselGeometry.from_profiles(grid, k_of_x, a0_of_x)
        except ValueError as exc:
            raise ConfigError(str(exc), field="geometry.profile") from None
        initial = _initial_state(self.initial, geometry, grid)
        return Problem(
            grid=grid, geometry=geometry, params=self.physics, initial=initial,
            left=_driver("left", self.left), right=_driver("right", self.right),
            t_end=self.t_end, snapshots=self.snapshots, n_cfl=self.n_cfl, flux=self.flux,
        )


# -- helpers ---------------------------------------------------------------------


def _preset_underlay(scenario, values):
    """Preset values, minus sections whose profile/kind the caller replaces."""
    base = preset_values(scenario)
    sections = {"geometry.profile": "geometry.", "initial.profile": "initial.",
                "boundary.left.kind": "boundary.left.", "boundary.right.kind": "boundary.right."}
    for selector, prefix in sections.items():
        if selector in values and str(values[selector]).strip() != base.get(selector):
            base = {k: v for k, v in base.items() if not k.startswith(prefix)}
    return base


def _finite(v):
    return isinstance(v, (int, float)) and math.isfinite(v)


def _check_params(prefix, params, schema):
    for key in params:
        if key not in schema:
            raise ConfigError("unknown parameter", field=f"{prefix}.{key}")
    for key, (_, default) in schema.items():
        if key not in params and default is None:
            raise ConfigError("missing required parameter", field=f"{prefix}.{key}")
        value = params.get(key, default)
        if isinstance(value, float) and not math.isfinite(value):
            raise ConfigError("must be finite", field=f"{prefix}.{key}")


def _check_profile(section, spec, registry):
    if spec.name not in registry:
        raise ConfigError(f"must be one of {sorted(registry)}", field=f"{section}.profile")
    _check_params(section, spec.params, registry[spec.name])


def _fill_defaults(spec, registry):
    for key, (_, default) in registry.get(spec.name, {}).items():
        if default is not None:
            spec.params.setdefault(key, default)


def _param_type(key):
    parts = key.split(".")
    if parts[0] in ("geometry", "initial") and len(parts) == 2:
        for registry in (GEOMETRY_PROFILES, INITIAL_PROFILES):
            for schema in registry.values():
                if parts[1] in schema:
                    return schema[parts[1]][0]
    if parts[0] == "boundary" and len(parts) == 3 and parts[1] in ("left", "right"):
        for schema in WAVEFORM_PARAMS.values():
            if parts[2] in schema:
                return schema[parts[2]][0]
    return None


def _is_param_key(key):
    return _param_type(key) is not None


def _coerce(key, value, line=None):
    kind = FIXED_KEYS.get(key) or _param_type(key)
    if kind is None:
        raise ConfigError("unknown key", field=key, line=line)
    try:
        if kind is tuple:
            if isinstance(value, str):
                items = [v for v in value.replace(" ", "").split(",") if v]
                return tuple(float(v) for v in items)
            return tuple(float(v) for v in value)
        if kind is int:
            if isinstance(value, str):
                f = float(value)
                if f != int(f):
                    raise ValueError
                return int(f)
            if isinstance(value, float) and value != int(value):
                raise ValueError
            return int(value)
        if kind is float:
            return float(value)
        return str(value).strip()
    except (TypeError, ValueError):
        raise ConfigError(f"cannot read {value!r} as {kind.__name__}", field=key, line=line) from None


def _format(value):
    if isinstance(value, tuple):
        return ", ".join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def resolve_keys(overrides: dict, known) -> dict:
    """Map short override names to full dotted keys (unique suffix match)."""
    out = {}
    candidates = set(known) | set(FIXED_KEYS)
    for key, value in overrides.items():
        key = ALIASES.get(key, key)
        if key in candidates or _is_param_key(key):
            out[key] = value
            continue
        matches = sorted(c for c in candidates if c.split(".")[-1] == key)
        if len(matches) == 1:
            out[matches[0]] = value
        elif matches:
            raise ConfigError(f"ambiguous override, could be {matches}", field=key)
        else:
            raise ConfigError("unknown key", field=key)
    return out


def parse_text(text: str, overrides: dict | None = None) -> SimulationConfig:
    """Parse configuration text, then apply ``overrides`` (short keys allowed)."""
    values, line_of = {}, {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=number)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError("empty key", line=number)
        if key in values:
            raise ConfigError("duplicate key", field=key, line=number)
        values[key] = value
        line_of[key] = number
    if overrides:
        base = dict(values)
        if "scenario" in base and base["scenario"] in PRESETS:
            base = {**_preset_underlay(base["scenario"], base), **base}
        values.update(resolve_keys(overrides, base))
    return SimulationConfig.from_flat(values, line_of=line_of)


def parse_config(path=None, *, scenario=None, overrides=None) -> SimulationConfig:
    """Config from a file and/or a scenario preset plus overrides."""
    text = ""
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    if scenario is not None:
        text = f"scenario = {scenario}\n" + "\n".join(
            line for line in text.splitlines() if not line.strip().startswith("scenario"))
    if not text.strip():
        raise ConfigError("no configuration given (need a file or a scenario)")
    return parse_text(text, overrides)


def _driver(side, spec: BoundarySpec) -> BoundaryDriver:
    waveform = make_waveform(spec.waveform, spec.params) if spec.kind == "imposed_discharge" else None
    return BoundaryDriver(spec.kind, side, waveform)


def _initial_state(spec: ProfileSpec, geometry: VesselGeometry, grid: Grid1D) -> SimulationState:
    if spec.name == "dead_man":
        try:
            return dead_man_state(geometry, spec.params.get("cst", 0.0))
        except ValueError as exc:
            raise ConfigError(str(exc), field="initial.cst") from None
    if spec.name == "radius_bump":
        p = spec.params
        if not p["x_end"] > p["x_start"]:
            raise ConfigError("x_end must exceed x_start", field="initial.x_end")
        r = radius_bump(grid.x, radius(geometry.a0), p["eps"], p["x_start"], p["x_end"])
        inside = (grid.x >= p["x_start"]) & (grid.x <= p["x_end"])
        a = np.where(inside, area(r), geometry.a0)
        return SimulationState(0.0, ConservedState(a, np.zeros_like(a)))
    raise ConfigError(f"unknown initial profile {spec.name!r}", field="initial.profile")
