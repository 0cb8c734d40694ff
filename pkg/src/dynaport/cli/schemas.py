"""JSON Schemas (draft 2020-12) for every report kind, plus certificates."""

from __future__ import annotations

from ..serialize import SCHEMA_VERSION

_int = {"type": "integer"}
_str = {"type": "string"}
_bool = {"type": "boolean"}
_num = {"type": "number"}
_pair = {"type": "array", "items": _int, "minItems": 2, "maxItems": 2}
_field_elem = {
    "oneOf": [
        _str,
        {
            "type": "object",
            "required": ["num", "den"],
            "properties": {"num": {"type": "array", "items": _str}, "den": {"type": "array", "items": _str}},
        },
    ]
}
_poly = {"type": "array", "items": _field_elem}


def _report(kind: str, required: list[str], props: dict) -> dict:
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "required": ["schema_version", "kind", *required],
        "properties": {"schema_version": {"const": SCHEMA_VERSION}, "kind": {"const": kind}, **props},
    }


_head = {"base": {"enum": ["nf", "ff"]}, "map": _str, "alpha": _str}

CERTIFICATE = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "map", "target", "depth", "node_minpoly", "node_inf", "checked_orbit_range", "termination_reason"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "map": {
            "type": "object",
            "required": ["base", "degree", "F", "G"],
            "properties": {"base": {"enum": ["nf", "ff"]}, "degree": {"type": "integer", "minimum": 2}, "F": {"type": "array"}, "G": {"type": "array"}},
        },
        "target": {"type": "object", "required": ["poly", "inf"], "properties": {"poly": _poly, "inf": _bool}},
        "depth": {"type": "integer", "minimum": 0},
        "node_minpoly": _poly,
        "node_inf": _bool,
        "checked_orbit_range": {"type": "integer", "minimum": 1},
        "termination_reason": {"enum": ["CriticalCycleClosed", "HeightDominance"]},
    },
}

_verdict = {
    "type": "object",
    "required": ["status"],
    "properties": {"status": {"enum": ["Yes", "No", "Unknown"]}, "reason": _str, "bound_hit": _str, "certificate": CERTIFICATE},
}

SCHEMAS = {
    "portrait": _report(
        "portrait",
        ["map", "alpha", "m", "n"],
        {**_head, "prime": _int, "place": _str, "m": {"type": ["integer", "null"]}, "n": {"type": ["integer", "null"]}, "escape_certified": _bool},
    ),
    "witnesses": _report(
        "witnesses",
        ["map", "alpha", "m", "n", "p_max", "witnesses", "skipped"],
        {
            **_head,
            "m": _int,
            "n": _int,
            "p_max": _int,
            "witnesses": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["prime", "portrait", "squarefree", "verification"],
                    "properties": {"prime": _int, "portrait": _pair, "squarefree": {"const": True}, "verification": {"type": "object"}},
                },
            },
            "skipped": {"type": "array", "items": {"type": "object", "required": ["prime", "reason"]}},
        },
    ),
    "ff_witnesses": _report(
        "ff_witnesses",
        ["map", "alpha", "m", "n", "witnesses", "complete"],
        {
            **_head,
            "m": _int,
            "n": _int,
            "witnesses": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["place", "degree", "valuation", "portrait"],
                    "properties": {"place": _str, "degree": _int, "valuation": {"const": 1}, "portrait": _pair},
                },
            },
            "complete": _bool,
            "reason": {"type": ["string", "null"]},
        },
    ),
    "admissible": _report(
        "admissible",
        ["map", "alpha", "a1", "a2", "grid", "summary"],
        {
            **_head,
            "a1": {"type": "array", "items": _verdict},
            "a2": {"type": "array", "items": _verdict},
            "grid": {"type": "array", "items": {"type": "array", "items": {"enum": ["Y", "N", "?"]}}},
            "summary": {"type": "object", "required": ["yes", "no", "unknown", "a1_excluded", "a2_excluded"]},
        },
    ),
    "height": _report(
        "height",
        ["map", "alpha", "weil_height", "canonical_height", "gap", "escape_threshold", "preperiodic"],
        {
            **_head,
            "weil_height": _num,
            "canonical_height": {"type": "object", "required": ["value", "error_bound", "iterations"]},
            "gap": {"type": "object", "required": ["C_map", "C_up", "C_low"]},
            "escape_threshold": _num,
            "preperiodic": _bool,
        },
    ),
    "gleason": _report(
        "gleason",
        ["n_max", "results"],
        {
            "n_max": _int,
            "results": {
                "type": "array",
                "items": {"type": "object", "required": ["n", "squarefree"], "properties": {"n": _int, "squarefree": _bool}},
            },
        },
    ),
    "verify": _report(
        "verify",
        ["example", "checks", "passed"],
        {
            "example": _str,
            "passed": _bool,
            "checks": {
                "type": "array",
                "items": {"type": "object", "required": ["name", "passed", "detail"], "properties": {"passed": _bool}},
            },
        },
    ),
}
SCHEMAS["verify_all"] = _report("verify_all", ["examples", "passed"], {"examples": {"type": "array", "items": SCHEMAS["verify"]}, "passed": _bool})


def schema_for(report: dict) -> dict:
    return SCHEMAS[report["kind"]]
