"""Scene documents: reading, kind detection and deterministic dumping."""

from __future__ import annotations

import json
import sys
from typing import Any

import numpy as np

from .balls import BallConfig
from .errors import PinningError
from .linespace import ScreenFamily
from .pattern2d import HalfplanePattern


class SchemaError(PinningError):
    code = "schema_error"


def read_json(path: str) -> dict:
    try:
        if path == "-":
            doc = json.load(sys.stdin)
        else:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("a scene document must be a JSON object")
    return doc


def _plain(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, np.generic):
        return x.item()
    return x


def dumps(doc: dict) -> str:
    """Stable serialisation: same document, same bytes."""
    return json.dumps(_plain(doc), indent=2, allow_nan=False) + "\n"


def document_kind(doc: dict) -> str:
    if "balls" in doc:
        return "balls"
    if "screens" in doc:
        return "screens"
    if "normals" in doc or "angles" in doc:
        return "pattern"
    raise SchemaError("document has none of 'balls', 'screens', 'normals', 'angles'")


def pattern_from_doc(doc: dict) -> HalfplanePattern:
    if "normals" in doc:
        try:
            return HalfplanePattern.from_json(doc)
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"bad normals: {exc}") from exc
    if "angles" in doc:
        return HalfplanePattern.from_angles([float(a) for a in doc["angles"]])
    raise SchemaError("pattern document needs 'normals' or 'angles'")


def balls_from_doc(doc: dict) -> BallConfig:
    try:
        balls = doc["balls"]
        d = int(doc["d"]) if "d" in doc else len(balls[0]["center"])
        C = BallConfig.from_json({"d": d, "balls": balls})
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad ball configuration: {exc}") from exc
    return C


def screens_from_doc(doc: dict) -> ScreenFamily:
    try:
        screens = doc["screens"]
        d = int(doc["d"]) if "d" in doc else len(screens[0]["n"]) + 1
        F = ScreenFamily.from_json({"d": d, "screens": screens})
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad screen family: {exc}") from exc
    return F
