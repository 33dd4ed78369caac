"""Run configuration: JSON documents validated into a fully populated :class:`RunConfig`."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, ValidationError, model_validator

from .basis import MAX_DEGREE
from .scenarios import PRESET_VARIANTS, SCENARIO_NAMES, get_scenario
from .viscosity import DEFAULT_SHAPE, KINDS


class ConfigError(ValueError):
    pass


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class MeshSection(_Section):
    elements: Optional[PositiveInt] = None
    domain: Optional[tuple[float, float]] = None
    boundary: Optional[Literal["periodic", "dirichlet_outflow"]] = None

    @model_validator(mode="after")
    def _ordered(self):
        if self.domain is not None and not self.domain[0] < self.domain[1]:
            raise ValueError("domain must satisfy left < right")
        return self


class TimeSection(_Section):
    integrator: Literal["ssprk33", "ssprk54"] = "ssprk33"
    cfl: PositiveFloat = 0.38
    final_time: Optional[PositiveFloat] = None
    fixed_dt: Optional[PositiveFloat] = None
    mode: Literal["unsplit", "split_filter"] = "unsplit"


class SensorSection(_Section):
    mode: Literal["modified", "classic"] = "modified"
    c: Optional[PositiveFloat] = None
    kappa: PositiveFloat = 1.0
    eps_max_scale: PositiveFloat = 1.0
    per_stage: bool = False


class ViscositySection(_Section):
    kind: Optional[Literal[KINDS]] = None
    lam: Optional[PositiveFloat] = None


class OutputSection(_Section):
    directory: str = "dglab_out"
    snapshot_times: list[PositiveFloat] = Field(default_factory=list)
    series_every: PositiveInt = 1


class ParallelSection(_Section):
    elements: bool = False


class RunConfig(_Section):
    """Validated run description.  Unset values are filled from the scenario preset."""

    scenario: Literal[SCENARIO_NAMES]
    preset_variant: Literal[PRESET_VARIANTS] = "classical"
    degree: Optional[int] = Field(default=None, ge=1, le=MAX_DEGREE)
    flux: Optional[Literal["upwind", "local_lax_friedrichs"]] = None
    mesh: MeshSection = Field(default_factory=MeshSection)
    time: TimeSection = Field(default_factory=TimeSection)
    sensor: SensorSection = Field(default_factory=SensorSection)
    viscosity: ViscositySection = Field(default_factory=ViscositySection)
    output: OutputSection = Field(default_factory=OutputSection)
    parallel: ParallelSection = Field(default_factory=ParallelSection)

    @model_validator(mode="after")
    def _fill_defaults(self):
        sc = get_scenario(self.scenario, self.preset_variant)
        m = self.mesh
        m.elements = m.elements or sc.n_elements
        m.domain = m.domain or (sc.x_left, sc.x_right)
        m.boundary = m.boundary or sc.boundary
        self.degree = self.degree or sc.degree
        self.flux = self.flux or sc.flux
        if self.flux == "upwind" and sc.law.name != "advection":
            raise ValueError(f"flux: upwind is only available for advection, not {self.scenario}")
        self.time.final_time = self.time.final_time or sc.t_final
        self.sensor.c = self.sensor.c or sc.sensor_c
        v = self.viscosity
        v.kind = v.kind or sc.viscosity
        if v.lam is None:
            v.lam = DEFAULT_SHAPE.get(v.kind)
        if self.time.mode == "split_filter" and v.kind != "legendre":
            raise ValueError("time.mode: split_filter requires viscosity.kind = legendre")
        if any(s > self.time.final_time for s in self.output.snapshot_times):
            raise ValueError("output.snapshot_times: entries must not exceed time.final_time")
        return self

    def scenario_object(self):
        return get_scenario(self.scenario, self.preset_variant)


def _coerce(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(doc, overrides):
    """Apply ``key.sub=value`` strings; values are parsed as JSON when possible."""
    doc = json.loads(json.dumps(doc))
    for item in overrides or ():
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        node = doc
        parts = key.split(".")
        for part in parts[:-1]:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise ConfigError(f"override {key!r}: {part!r} is not a section")
            node = child
        node[parts[-1]] = _coerce(value)
    return doc


def _describe(err: ValidationError):
    lines = []
    for e in err.errors():
        loc = ".".join(str(p) for p in e["loc"])
        msg = e["msg"].removeprefix("Value error, ")
        # cross-field checks already name their key in the message
        lines.append(f"{loc}: {msg}" if loc else msg)
    return "; ".join(lines)


def validate_config(doc):
    try:
        return RunConfig.model_validate(doc)
    except ValidationError as err:
        raise ConfigError(_describe(err)) from None


def load_config(path, overrides=()):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as err:
        raise ConfigError(f"cannot read {path}: {err.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"{path}:{err.lineno}:{err.colno}: {err.msg}") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return validate_config(apply_overrides(doc, overrides))
