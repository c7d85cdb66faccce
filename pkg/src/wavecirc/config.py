'''Run configuration: a single JSON file validated against a schema,
with all defaults made explicit in the resolved form.'''

import copy
import json

import jsonschema

from . import units

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["grid", "potential"],
    "properties": {
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "required": ["n_qubits", "length_angstrom"],
            "properties": {
                "n_qubits": {"type": "integer", "minimum": 1, "maximum": 12},
                "length_angstrom": {"type": "number", "exclusiveMinimum": 0},
                "center_angstrom": {"type": "number"},
                "mass": {
                    "oneOf": [
                        {"enum": ["proton", "deuteron"]},
                        {"type": "number", "exclusiveMinimum": 0},
                    ]
                },
            },
        },
        "potential": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "file": {"type": "string"},
                "model": {
                    "type": "object",
                    "required": ["kind"],
                    "properties": {
                        "kind": {"enum": ["double_well", "harmonic",
                                          "polynomial"]},
                    },
                },
            },
            "oneOf": [{"required": ["file"]}, {"required": ["model"]}],
        },
        "daf": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "m_daf": {"type": "integer", "minimum": 0},
                "sigma_ratio": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "dynamics": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "wavepacket": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["kind"],
                    "properties": {
                        "kind": {"enum": ["delta", "gaussian", "thermal"]},
                        "x0_index": {"type": "integer", "minimum": 0},
                        "mu_angstrom": {"type": "number"},
                        "sigma_angstrom": {"type": "number",
                                           "exclusiveMinimum": 0},
                        "temperature_kelvin": {"type": "number",
                                               "exclusiveMinimum": 0},
                        "sqrt_weights": {"type": "boolean"},
                    },
                },
                "dt_fs": {"type": "number", "exclusiveMinimum": 0},
                "steps": {"type": "integer", "minimum": 1},
                "method": {"enum": ["classical", "ising", "circuit-exact",
                                    "circuit-shots"]},
                "shots": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer", "minimum": 0},
            },
        },
        "spectrum": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "window": {"enum": ["none", "hann"]},
                "padding": {"type": "integer", "minimum": 1},
                "peak_threshold": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "mapping": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "force": {"type": "boolean"},
                "joint": {"type": "boolean"},
                "threshold_ratio": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "output_dir": {"type": "string"},
    },
}

DEFAULTS = {
    "grid": {"center_angstrom": 0.0, "mass": "proton"},
    "daf": {"m_daf": 20, "sigma_ratio": 1.5},
    "dynamics": {
        "wavepacket": {"kind": "gaussian", "x0_index": 0,
                       "mu_angstrom": 0.0, "sigma_angstrom": 0.1,
                       "temperature_kelvin": 300.0, "sqrt_weights": False},
        "dt_fs": 0.25,
        "steps": 8000,
        "method": "classical",
        "seed": 0,
    },
    "spectrum": {"window": "none", "padding": 4, "peak_threshold": 1e-3},
    "mapping": {"force": False, "joint": False, "threshold_ratio": 1e-8},
    "output_dir": "runs",
}

MASSES = {"proton": units.PROTON_MASS, "deuteron": units.DEUTERON_MASS}


class ConfigError(ValueError):
    pass


def _merge(defaults, override):
    out = copy.deepcopy(defaults)
    for key, val in override.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], val)
        else:
            out[key] = copy.deepcopy(val)
    return out


def resolve(raw):
    '''Validate a raw config dict and fill in defaults.'''
    try:
        jsonschema.validate(raw, SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config invalid at {path}: {exc.message}") from exc
    cfg = _merge(DEFAULTS, raw)
    mass = cfg["grid"]["mass"]
    cfg["grid"]["mass_au"] = MASSES.get(mass, mass)
    return cfg


def load_config(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return resolve(raw)
