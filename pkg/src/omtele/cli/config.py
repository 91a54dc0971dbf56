"""Run configuration: JSON schema, defaults, and resolution to library objects.

Configs are written in lab units (rates as value/2pi in MHz, durations in
ns).  A user config is merged over the built-in base config (and over a
figure preset for ``figure`` runs); unknown keys are rejected.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from omtele.errors import ConfigError
from omtele.params import RATE_FIELDS, TIME_FIELDS, PhysicalParams
from omtele.states import INPUT_KINDS, InputStateSpec

SCHEMA_VERSION = 1
FIGURE_IDS = ("fig2a", "fig2b", "fig3a", "fig3b", "fig3c", "fig3d", "fig4", "fig5a", "fig5b")
INPUT_AXES = ("xi", "alpha0", "varphi")
SWEEP_AXES = RATE_FIELDS + TIME_FIELDS + INPUT_AXES
UNITS = {**{name: "MHz (value/2pi)" for name in RATE_FIELDS}, **{name: "ns" for name in TIME_FIELDS},
         "xi": "1", "alpha0": "1", "varphi": "rad"}

_NUMBER = {"type": "number"}
_SWEEP = {
    "type": "object",
    "additionalProperties": False,
    "required": ["name", "start", "stop", "points"],
    "properties": {
        "name": {"enum": list(SWEEP_AXES)},
        "start": _NUMBER,
        "stop": _NUMBER,
        "points": {"type": "integer", "minimum": 2},
    },
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "name": {"type": "string", "pattern": "^[A-Za-z0-9_.-]+$"},
        "params": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                **{name: {"type": "number", "minimum": 0} for name in RATE_FIELDS + TIME_FIELDS},
                "metadata": {"type": "object"},
            },
        },
        "input": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {
                "kind": {"enum": list(INPUT_KINDS)},
                "beta": {"oneOf": [_NUMBER, {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2}]},
                "xi": {"type": "number", "minimum": 0},
                "alpha0": {"type": "number", "minimum": 0},
                "varphi": _NUMBER,
            },
        },
        "resources": {
            "type": "array",
            "items": {"enum": ["tmsv", "nongaussian"]},
            "minItems": 1,
            "uniqueItems": True,
        },
        "quantity": {"enum": ["fidelity", "logneg"]},
        "sweep": _SWEEP,
        "cutoff": {"type": "integer", "minimum": 4},
        "quadrature": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "points": {"type": "integer", "minimum": 11},
                "max_refinements": {"type": "integer", "minimum": 1},
            },
        },
        "use_reduced_tmsv": {"type": "boolean"},
        "reflectivity": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "threads": {"type": "integer", "minimum": 1},
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "dir": {"type": "string"},
                "formats": {
                    "type": "array",
                    "items": {"enum": ["csv", "json"]},
                    "minItems": 1,
                    "uniqueItems": True,
                },
            },
        },
        "validate": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "grid": {"enum": ["default", "coherent_only"]},
                "whitelist": {"type": "array", "items": {"type": "string"}, "uniqueItems": True},
            },
        },
        "figure": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "max_number": {"type": "integer", "minimum": 1},
                "resolution": {"type": "integer", "minimum": 2},
                "inset": _SWEEP,
            },
        },
    },
}


def _path(error: jsonschema.ValidationError) -> str:
    out = "$"
    for part in error.absolute_path:
        out += f"[{part}]" if isinstance(part, int) else f".{part}"
    return out


def load_defaults() -> dict:
    text = resources.files("omtele").joinpath("data/defaults.json").read_text(encoding="utf-8")
    return json.loads(text)


def merge(base: dict, override: dict) -> dict:
    """Recursive dict merge; lists and scalars in ``override`` replace."""
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def validate_raw(raw: dict) -> None:
    """Schema check with the offending field path in the error."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(raw), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        raise ConfigError(errors[0].message, _path(errors[0]))


def read_config_file(path: str | Path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc.strerror}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    validate_raw(raw)
    return raw


@dataclass(frozen=True)
class RunConfig:
    """Fully merged and validated configuration (lab units kept as given)."""

    raw: dict

    @classmethod
    def build(cls, user: dict | None = None, figure: str | None = None) -> "RunConfig":
        defaults = load_defaults()
        merged = defaults["base"]
        if figure is not None:
            if figure not in FIGURE_IDS:
                raise ConfigError(f"unknown figure id {figure!r}; expected one of {', '.join(FIGURE_IDS)}", "figure")
            merged = merge(merged, defaults["figures"][figure])
        if user:
            validate_raw(user)
            merged = merge(merged, user)
        validate_raw(merged)
        config = cls(merged)
        config.check()
        return config

    def with_overrides(self, **values) -> "RunConfig":
        raw = merge(self.raw, {k: v for k, v in values.items() if v is not None})
        validate_raw(raw)
        config = RunConfig(raw)
        config.check()
        return config

    def check(self) -> None:
        """Semantic checks beyond the schema."""
        sweeps = [("$.sweep", self.raw["sweep"])]
        if "inset" in self.raw.get("figure", {}):
            sweeps.append(("$.figure.inset", self.raw["figure"]["inset"]))
        for path, sweep in sweeps:
            if sweep["start"] == sweep["stop"]:
                raise ConfigError("start and stop must differ", f"{path}.stop")
            if sweep["name"] in ("kappa1", "kappa_c", "kappa_m") and min(sweep["start"], sweep["stop"]) <= 0:
                raise ConfigError("decay-rate sweeps must stay positive", f"{path}.start")
            if sweep["name"] in RATE_FIELDS + TIME_FIELDS + ("xi", "alpha0") and min(sweep["start"], sweep["stop"]) < 0:
                raise ConfigError("sweep bounds must be non-negative for this axis", f"{path}.start")
        try:
            self.physical()
        except ValueError as exc:
            raise ConfigError(str(exc), "$.params") from exc
        try:
            self.input_spec()
        except ValueError as exc:
            raise ConfigError(str(exc), "$.input") from exc

    # Accessors -----------------------------------------------------------
    @property
    def name(self) -> str:
        return self.raw["name"]

    @property
    def resources(self) -> list[str]:
        return list(self.raw["resources"])

    @property
    def cutoff(self) -> int:
        return self.raw["cutoff"]

    @property
    def threads(self) -> int:
        return self.raw["threads"]

    @property
    def formats(self) -> list[str]:
        return list(self.raw["output"]["formats"])

    @property
    def quadrature(self) -> dict:
        return {"points": self.raw["quadrature"]["points"], "max_refinements": self.raw["quadrature"]["max_refinements"]}

    def lab_params(self, **overrides) -> dict:
        values = {k: v for k, v in self.raw["params"].items() if k != "metadata"}
        values.update({k: v for k, v in overrides.items() if k in values})
        return values

    def physical(self, **overrides) -> PhysicalParams:
        return PhysicalParams.from_lab_units(metadata=self.raw["params"].get("metadata"), **self.lab_params(**overrides))

    def input_spec(self, **overrides) -> InputStateSpec:
        data = dict(self.raw["input"])
        data.update({k: v for k, v in overrides.items() if k in INPUT_AXES})
        beta = data.get("beta", 0.0)
        beta = complex(beta[0], beta[1]) if isinstance(beta, list) else complex(beta)
        return InputStateSpec(
            data["kind"], beta=beta, xi=data.get("xi", 0.0), alpha0=data.get("alpha0", 0.0),
            varphi=data.get("varphi", 0.0),
        )


def sweep_values(sweep: dict) -> list[float]:
    return np.linspace(float(sweep["start"]), float(sweep["stop"]), sweep["points"]).tolist()


def point_objects(config: RunConfig, axis: str, value: float):
    """PhysicalParams and InputStateSpec with one axis set to ``value``."""
    overrides = {axis: value}
    return config.physical(**overrides), config.input_spec(**overrides)

