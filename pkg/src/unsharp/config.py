"""YAML run configurations: schemas, validation with key paths, builders.

A config is a nested mapping.  Every leaf is declared in a schema with its
type, default and a one-line description; unknown keys, wrong types and
missing mandatory keys are reported as ``ConfigError`` naming the dotted key
path.  A run manifest (JSON, itself valid YAML) is accepted wherever a config
is: its ``config`` snapshot is used.
"""

from __future__ import annotations

import copy
import math
import re
from dataclasses import dataclass
from typing import Any

import yaml

from .applications.estimation import EstimationConfig
from .applications.preparation import PreparationConfig
from .applications.sweep import SWEEP_VARIABLES
from .budget import LaserParams
from .noise import (
    DephasingConfig,
    MappingErrorConfig,
    NoiseConfig,
    SpontaneousEmissionConfig,
    delta_beta_from_ramsey,
)

SCHEMA_VERSION = 1
REQUIRED = object()


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


@dataclass(frozen=True)
class Key:
    kind: str  # "float", "int", "str", "bool", "grid", "strlist"
    default: Any
    help: str
    nullable: bool = False


def _noise_schema() -> dict:
    return {
        "dephasing": {
            "delta_beta": Key("float", 0.0, "rms of the z noise field beta, rad/s"),
            "tau_ramsey": Key("float", None, "Ramsey 1/e time in s; sets delta_beta = 1/(sqrt(2) tau)", nullable=True),
            "model": Key("str", "quasi_static", "quasi_static (one beta per trajectory) or white (fresh beta per step)"),
            "step_dt": Key("float", None, "white-noise step in s; default rabi_period/100", nullable=True),
        },
        "p_wrong": Key("float", 0.0, "probability P_w that a reported outcome is flipped"),
        "p_sp": Key("float", 0.0, "probability P_sp of a collapse to g or e before each measurement"),
    }


def _sweep_schema() -> dict:
    return {
        "variables": Key("strlist", REQUIRED, "swept error probabilities, any of P_w, P_sp; one CSV each"),
        "grid": Key("grid", REQUIRED, "non-empty list of error-probability values"),
    }


SCHEMAS: dict[str, dict] = {
    "estimate": {
        "schema_version": Key("int", SCHEMA_VERSION, "config format version"),
        "seed": Key("int", 0, "master seed (non-negative)"),
        "experiment": {
            "p0": Key("float", 0.45, "weak-outcome probability of the z measurement, in [0, 0.5]"),
            "measurements_per_period": Key("int", 10, "measurements per Rabi period"),
            "rabi_period": Key("float", 0.1, "Rabi period tau_R in s"),
            "n_trajectories": Key("int", 1000, "trajectories per grid point"),
            "duration_periods": Key("int", 30, "Rabi periods in the recorded averaging window"),
            "transient_skip_periods": Key("int", 100, "burn-in Rabi periods discarded before the window"),
            "initial_state": Key("str", "g", "true initial state label (g, e, +x, -x, +y, -y)"),
            "estimator_state": Key("str", "+x", "initial estimate label"),
        },
        "noise": _noise_schema(),
        "sweep": _sweep_schema(),
        "output": {
            "jsonl_trajectories": Key("int", 0, "per grid point, dump this many trajectory records as JSON lines"),
        },
    },
    "prepare": {
        "schema_version": Key("int", SCHEMA_VERSION, "config format version"),
        "seed": Key("int", 0, "master seed (non-negative)"),
        "experiment": {
            "theta_target": Key("float", math.pi / 4, "target polar angle in [0, pi]"),
            "phi_target": Key("float", math.pi / 2, "target azimuth"),
            "p0": Key("float", 0.15, "weak-outcome probability of the y and z measurements"),
            "tol_phi": Key("float", 0.05, "azimuth convergence tolerance, rad"),
            "tol_theta": Key("float", 0.05, "polar convergence tolerance, rad"),
            "guard_band": Key("float", None, "wrong-direction reset threshold; default 2 * tolerance", nullable=True),
            "max_measurements": Key("int", 1000, "budget after which a run is recorded as non-convergent"),
            "n_trajectories": Key("int", 1000, "trajectories per grid point"),
            "count_resets": Key("bool", True, "include projective reset measurements in the count column"),
        },
        "noise": {k: v for k, v in _noise_schema().items() if k != "dephasing"},
        "sweep": _sweep_schema(),
        "output": {
            "jsonl_trajectories": Key("int", 0, "per grid point, dump this many trajectory records as JSON lines"),
        },
    },
    "estimate-params": {
        "schema_version": Key("int", SCHEMA_VERSION, "config format version"),
        "chain": Key("str", REQUIRED, "shelving or dipole_force"),
        "laser": {
            "power": Key("float", REQUIRED, "laser power, W"),
            "spot_radius": Key("float", REQUIRED, "beam radius, m; area = pi r^2"),
            "wavelength": Key("float", REQUIRED, "wavelength, m"),
        },
        "shelving": {
            "tau_sp": Key("float", 52.7e-3, "metastable lifetime, s"),
            "eta": Key("float", 0.2, "Lamb-Dicke parameter"),
            "quoted_delta_t": Key("float", 15e-6, "quoted shelving window, s"),
            "quoted_p_sp": Key("float", 7e-4, "quoted emission probability per measurement"),
        },
        "dipole_force": {
            "mass_amu": Key("float", 9.012182, "ion mass in atomic mass units"),
            "stretch_mode_omega": Key("float", 2 * math.pi * 6e6, "stretch-mode angular frequency, rad/s"),
            "eta": Key("float", 0.2, "Lamb-Dicke parameter"),
            "linewidth": Key("float", 2 * math.pi * 19.4e6, "dipole transition linewidth, rad/s"),
            "excited_population": Key("float", 2e-5, "target off-resonant population; fixes the detuning"),
            "detuning": Key("float", None, "explicit detuning, rad/s; overrides excited_population", nullable=True),
            "n_lifetimes": Key("float", 23.0, "number of exposures entering the cumulative P_sp"),
            "crossing_angle": Key("float", math.pi / 2, "angle between the two standing-wave beams, rad"),
        },
    },
    "compile": {
        "schema_version": Key("int", SCHEMA_VERSION, "config format version"),
        "p0": Key("float", REQUIRED, "weak-outcome probability in [0, 0.5]"),
        "theta": Key("float", 0.0, "measurement-axis polar angle in [0, pi]"),
        "phi": Key("float", 0.0, "measurement-axis azimuth"),
        "scheme": Key("int", 1, "1 (sideband pulses) or 2 (weak squeezing, z axis only)"),
    },
}


def _check_leaf(path: str, key: Key, value):
    if value is None:
        if key.nullable:
            return None
        raise ConfigError(path, "must not be null")
    if key.kind == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(path, f"expected a number, got {value!r}")
        if not math.isfinite(value):
            raise ConfigError(path, f"must be finite, got {value!r}")
        return float(value)
    if key.kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(path, f"expected an integer, got {value!r}")
        return int(value)
    if key.kind == "bool":
        if not isinstance(value, bool):
            raise ConfigError(path, f"expected true/false, got {value!r}")
        return value
    if key.kind == "str":
        if not isinstance(value, str):
            raise ConfigError(path, f"expected a string, got {value!r}")
        return value
    if key.kind == "grid":
        if not isinstance(value, list):
            raise ConfigError(path, f"expected a list of numbers, got {value!r}")
        if not value:
            raise ConfigError(path, "grid is empty")
        return [_check_leaf(f"{path}[{i}]", Key("float", None, ""), v) for i, v in enumerate(value)]
    if key.kind == "strlist":
        if isinstance(value, str):
            value = [value]
        if not isinstance(value, list) or not value:
            raise ConfigError(path, f"expected a non-empty list of names, got {value!r}")
        for i, v in enumerate(value):
            if v not in SWEEP_VARIABLES:
                raise ConfigError(f"{path}[{i}]", f"unknown variable {v!r}; use one of {SWEEP_VARIABLES}")
        return list(value)
    raise AssertionError(key.kind)


def validate(raw: dict | None, schema: dict, prefix: str = "") -> dict:
    """Merge ``raw`` over the schema defaults, checking every key."""
    raw = {} if raw is None else raw
    if not isinstance(raw, dict):
        raise ConfigError(prefix or "<root>", f"expected a mapping, got {type(raw).__name__}")
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ConfigError(f"{prefix}{unknown[0]}", "unknown key")
    out = {}
    for name, entry in schema.items():
        path = f"{prefix}{name}"
        if isinstance(entry, dict):
            out[name] = validate(raw.get(name), entry, path + ".")
        elif name in raw:
            out[name] = _check_leaf(path, entry, raw[name])
        elif entry.default is REQUIRED:
            raise ConfigError(path, "missing mandatory key")
        else:
            out[name] = copy.deepcopy(entry.default)
    if not prefix and out.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise ConfigError("schema_version", f"unsupported version {out['schema_version']}")
    return out


def load_raw(path) -> dict:
    """Read a YAML config or a JSON manifest; a manifest yields its config snapshot."""
    with open(path, encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError("<root>", "config file must contain a mapping")
    if "manifest_version" in data:
        return data.get("config", {})
    return data


def apply_override(raw: dict, assignment: str) -> None:
    """Apply ``a.b.c=value`` in place; ``value`` is parsed as YAML."""
    if "=" not in assignment:
        raise ConfigError(assignment, "override must look like key.path=value")
    path, text = assignment.split("=", 1)
    parts = path.strip().split(".")
    node = raw
    for p in parts[:-1]:
        node = node.setdefault(p, {})
        if not isinstance(node, dict):
            raise ConfigError(path, "cannot descend into a non-mapping")
    node[parts[-1]] = yaml.safe_load(text)


def describe(schema: dict, prefix: str = "") -> list[str]:
    """One line per leaf key, for ``--help``."""
    lines = []
    for name, entry in schema.items():
        path = f"{prefix}{name}"
        if isinstance(entry, dict):
            lines.extend(describe(entry, path + "."))
        else:
            default = "required" if entry.default is REQUIRED else f"default {entry.default!r}"
            lines.append(f"  {path} ({entry.kind}, {default}): {entry.help}")
    return lines


def _wrap_value_error(section: str, fn, **kw):
    try:
        return fn(**kw)
    except ConfigError:
        raise
    except ValueError as exc:
        # messages lead with the offending field name when there is one
        head = re.match(r"\w+", str(exc))
        key = head.group(0) if head and head.group(0) in kw else None
        raise ConfigError(f"{section}.{key}" if key else section, str(exc)) from exc


def build_noise(noise: dict, rabi_period: float | None = None) -> NoiseConfig:
    deph = None
    d = noise.get("dephasing")
    if d is not None:
        if d["tau_ramsey"] is not None and d["delta_beta"] != 0.0:
            raise ConfigError("noise.dephasing", "give either delta_beta or tau_ramsey, not both")
        if d["tau_ramsey"] is not None and not d["tau_ramsey"] > 0:
            raise ConfigError("noise.dephasing.tau_ramsey", "must be positive")
        db = delta_beta_from_ramsey(d["tau_ramsey"]) if d["tau_ramsey"] is not None else d["delta_beta"]
        step = d["step_dt"]
        if d["model"] == "white" and step is None and rabi_period is not None:
            step = rabi_period / 100
        if db > 0 or d["model"] != "quasi_static":
            deph = _wrap_value_error("noise.dephasing", DephasingConfig, delta_beta=db, model=d["model"], step_dt=step)
    mapping = _wrap_value_error("noise.p_wrong", MappingErrorConfig, p_wrong=noise["p_wrong"]) if noise["p_wrong"] else None
    sp = _wrap_value_error("noise.p_sp", SpontaneousEmissionConfig, p_sp=noise["p_sp"]) if noise["p_sp"] else None
    return NoiseConfig(deph, mapping, sp)


def build_estimation(cfg: dict) -> EstimationConfig:
    e = cfg["experiment"]
    noise = build_noise(cfg["noise"], e["rabi_period"])
    return _wrap_value_error("experiment", EstimationConfig, noise=noise, seed=cfg["seed"], **e)


def build_preparation(cfg: dict) -> PreparationConfig:
    noise = build_noise(cfg["noise"])
    return _wrap_value_error("experiment", PreparationConfig, noise=noise, seed=cfg["seed"], **cfg["experiment"])


def build_laser(cfg: dict) -> LaserParams:
    return _wrap_value_error("laser", LaserParams, **cfg["laser"])
