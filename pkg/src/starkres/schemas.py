"""Published JSON schemas for configuration files and emitted reports."""

from __future__ import annotations

import jsonschema

__all__ = [
    "CONFIG_SCHEMA",
    "SMATRIX_SCHEMA",
    "VERDICT_SCHEMA",
    "VERIFY_REPORT_SCHEMA",
    "validate_config",
    "validate_output",
]

_COMPLEX = {
    "type": "array",
    "items": {"type": "number"},
    "minItems": 2,
    "maxItems": 2,
}

_BOX = {
    "type": "array",
    "items": {"type": "number"},
    "minItems": 4,
    "maxItems": 4,
}

_PROFILE = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["indicator", "polybump"]},
        "center": {"type": "number"},
        "halfwidth": {"type": "number", "exclusiveMinimum": 0},
        "power": {"type": "integer", "minimum": 1},
        "coeffs": {"type": "array", "items": {"type": "number"}, "minItems": 1},
    },
    "required": ["kind"],
    "additionalProperties": False,
}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "couplings": {"type": "array", "items": {"type": "number"}},
        "profiles": {"type": "array", "items": _PROFILE},
        "seed": {"type": "integer"},
        "quadrature": {
            "type": "object",
            "properties": {
                "abs_tol": {"type": "number", "exclusiveMinimum": 0},
                "rel_tol": {"type": "number", "exclusiveMinimum": 0},
                "max_depth": {"type": "integer", "minimum": 1},
            },
            "additionalProperties": False,
        },
        "resonances": {
            "type": "object",
            "properties": {
                "epsilon": {"type": "number", "minimum": 0},
                "box": _BOX,
                "tol": {"type": "number", "exclusiveMinimum": 0},
                "budget": {"type": "integer", "minimum": 1},
            },
            "additionalProperties": False,
        },
        "trajectory": {
            "type": "object",
            "properties": {
                "eps_start": {"type": "number", "exclusiveMinimum": 0},
                "eps_end": {"type": "number", "exclusiveMinimum": 0},
                "ratio": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "seed_box": _BOX,
                "track_box": _BOX,
                "tol": {"type": "number", "exclusiveMinimum": 0},
            },
            "additionalProperties": False,
        },
        "smatrix": {
            "type": "object",
            "properties": {
                "epsilon": {"type": "number", "minimum": 0},
                "zeta": {"type": "string"},
            },
            "additionalProperties": False,
        },
    },
    "required": ["couplings", "profiles"],
    "additionalProperties": False,
}

VERIFY_REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "suite": {"type": "string"},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "name": {"type": "string"},
                    "measured": {"type": "number"},
                    "bound": {"type": "number"},
                    "pass": {"type": "boolean"},
                },
                "required": ["name", "measured", "bound", "pass"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["suite", "checks"],
    "additionalProperties": False,
}

VERDICT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "converged": {"type": "boolean"},
        "zeta0": {"oneOf": [_COMPLEX, {"type": "null"}]},
        "hats": {"type": "array", "items": {"type": "number"}},
        "det_gtilde0_at_zeta0": {"oneOf": [_COMPLEX, {"type": "null"}]},
        "consistent_with_theorem": {"type": "boolean"},
        "status": {"type": "string"},
    },
    "required": [
        "converged", "zeta0", "hats", "det_gtilde0_at_zeta0",
        "consistent_with_theorem", "status",
    ],
    "additionalProperties": False,
}

SMATRIX_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "S": {"type": "array", "items": {"type": "array", "items": _COMPLEX}},
        "S_inv": {"type": "array", "items": {"type": "array", "items": _COMPLEX}},
        "det_gtilde_plus": _COMPLEX,
        "det_gtilde_minus": _COMPLEX,
    },
    "required": ["S", "S_inv", "det_gtilde_plus", "det_gtilde_minus"],
    "additionalProperties": False,
}


def validate_config(config: dict) -> None:
    jsonschema.validate(config, CONFIG_SCHEMA)


def validate_output(payload: dict, schema: dict) -> None:
    jsonschema.validate(payload, schema)
