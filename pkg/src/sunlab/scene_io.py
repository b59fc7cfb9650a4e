"""Canonical JSON for scenes and reports.

Every rational is written as a ``"p"`` or ``"p/q"`` string and keys are
sorted, so load followed by save reproduces a canonical file byte for byte.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .numerics import DimensionMismatch, Point, format_rational
from .set_model import SetModel, primitive_from_json


def _canon(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, dict):
        return {str(k): _canon(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canon(v) for v in obj]
    if isinstance(obj, (frozenset, set)):
        return sorted(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(_canon(obj), sort_keys=True, indent=2) + "\n"


def scene_to_json(M: SetModel) -> dict:
    return {"dim": M.dim, "name": M.name, "primitives": [p.to_json() for p in M.primitives]}


def scene_from_json(obj: dict) -> SetModel:
    prims = tuple(primitive_from_json(p) for p in obj["primitives"])
    M = SetModel(prims, obj.get("name", "scene"))
    if "dim" in obj and int(obj["dim"]) != M.dim:
        raise DimensionMismatch(f"declared dim {obj['dim']} but primitives have dim {M.dim}")
    return M


def save_scene(M: SetModel, path) -> None:
    Path(path).write_text(dumps(scene_to_json(M)))


def load_scene(path) -> SetModel:
    return scene_from_json(json.loads(Path(path).read_text()))


def parse_point(text: str) -> Point:
    return Point.parse(text)
