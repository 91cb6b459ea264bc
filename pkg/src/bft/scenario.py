"""JSON scenario files: a frame, named bbas and named conditioning events.

Example::

    {
      "frame": {"atoms": ["F", "E", "N"], "model": "shafer"},
      "bbas": {"m1": [{"expr": "F", "mass": 0.2}, {"expr": "F|E", "mass": "4/7"}]},
      "events": {"truth": "F|E"}
    }

``model`` is ``"shafer"``, ``"free"`` or ``{"empty": [expr, ...]}`` for a
hybrid model.  Masses are numbers or exact ``"p/q"`` strings.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import jsonschema

from .algebra import AlgebraError, Frame, build_frame, format_expr, parse_expr
from .mass import ConditioningEvent, MassFunction, validate_bba

__all__ = [
    "SCENARIO_SCHEMA",
    "Scenario",
    "ScenarioError",
    "ScenarioIOError",
    "read_scenario",
    "load_scenario",
    "parse_mass",
]

_EXPR = {"type": "string", "minLength": 1}

SCENARIO_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["frame", "bbas"],
    "additionalProperties": False,
    "properties": {
        "description": {"type": "string"},
        "frame": {
            "type": "object",
            "required": ["atoms", "model"],
            "additionalProperties": False,
            "properties": {
                "atoms": {"type": "array", "items": {"type": "string"}, "minItems": 2},
                "model": {
                    "oneOf": [
                        {"enum": ["shafer", "free"]},
                        {
                            "type": "object",
                            "required": ["empty"],
                            "additionalProperties": False,
                            "properties": {"empty": {"type": "array", "items": _EXPR}},
                        },
                    ]
                },
            },
        },
        "bbas": {
            "type": "object",
            "additionalProperties": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "object",
                    "required": ["expr", "mass"],
                    "additionalProperties": False,
                    "properties": {
                        "expr": _EXPR,
                        "mass": {"type": ["number", "string"]},
                    },
                },
            },
        },
        "events": {"type": "object", "additionalProperties": _EXPR},
    },
}


class ScenarioError(ValueError):
    """A scenario file failed validation; ``issues`` lists every problem."""

    def __init__(self, path, issues: list[str]):
        self.path = path
        self.issues = issues
        super().__init__(f"{path}: " + "; ".join(issues))


class ScenarioIOError(OSError):
    pass


@dataclass
class Scenario:
    frame: Frame
    bbas: dict[str, MassFunction] = field(default_factory=dict)
    events: dict[str, ConditioningEvent] = field(default_factory=dict)
    path: Path | None = None


def parse_mass(value) -> float:
    """A mass given as a JSON number or a ``"p/q"`` / decimal string."""
    if isinstance(value, bool):
        raise ValueError(f"mass must be a number, got {value!r}")
    if isinstance(value, str):
        try:
            value = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"cannot read mass {value!r}; use a number or 'p/q'") from None
    result = float(value)
    if not math.isfinite(result):
        raise ValueError(f"mass {value!r} is not finite")
    return result


def _json_path(parts) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "<root>"


def _build(data: dict, path) -> tuple[Scenario | None, list[str]]:
    issues: list[str] = []
    frame_data = data["frame"]
    model = frame_data["model"]
    try:
        frame = build_frame(frame_data["atoms"], model if isinstance(model, str) else model["empty"])
    except AlgebraError as exc:
        return None, [f"frame: {exc}"]

    bbas = {}
    for name, entries in data["bbas"].items():
        pairs = []
        seen: dict = {}
        ok = True
        for i, entry in enumerate(entries):
            where = f"bbas.{name}[{i}]"
            try:
                element = parse_expr(entry["expr"], frame)
            except AlgebraError as exc:
                issues.append(f"{where}.expr: {exc}")
                ok = False
                continue
            try:
                value = parse_mass(entry["mass"])
            except ValueError as exc:
                issues.append(f"{where}.mass: {exc}")
                ok = False
                continue
            if element in seen:
                issues.append(
                    f"{where}.expr: {entry['expr']!r} is the same element as entry "
                    f"{seen[element]} ({format_expr(element)})"
                )
                ok = False
            seen.setdefault(element, i)
            pairs.append((element, value))
        if not ok:
            continue
        m = MassFunction(frame, pairs)
        for violation in validate_bba(m):
            issues.append(f"bbas.{name}: {violation}")
        bbas[name] = m

    events = {}
    for name, text in data.get("events", {}).items():
        try:
            events[name] = ConditioningEvent(parse_expr(text, frame))
        except AlgebraError as exc:
            issues.append(f"events.{name}: {exc}")
        except ValueError as exc:
            issues.append(f"events.{name}: {text!r}: {exc}")

    if issues:
        return None, issues
    return Scenario(frame, bbas, events, path), []


def read_scenario(path) -> tuple[Scenario | None, list[str]]:
    """Load and check a scenario, collecting every problem instead of raising.

    Raises :class:`ScenarioIOError` only when the file cannot be read.
    """
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ScenarioIOError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        data = json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as exc:
        return None, [f"not UTF-8: {exc}"]
    except json.JSONDecodeError as exc:
        return None, [f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"]

    validator = jsonschema.Draft202012Validator(SCENARIO_SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        return None, [f"{_json_path(e.absolute_path)}: {e.message}" for e in errors]
    return _build(data, path)


def load_scenario(path) -> Scenario:
    scenario, issues = read_scenario(path)
    if issues:
        raise ScenarioError(path, issues)
    return scenario
