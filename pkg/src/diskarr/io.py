"""Arrangement and result files.

Files are JSON objects. Floats are written with Python's shortest
round-trip representation, so parsing a written file gives back the same
bits.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from . import __version__
from .geom import Lattice, Point
from .periodic import CopyId, PeriodicArrangement
from .union import Cluster


class FormatError(ValueError):
    pass


def _num(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def plain(obj):
    """Convert tuples, arrays and numpy scalars into JSON-ready values."""
    if isinstance(obj, (Point, CopyId)):
        return [plain(v) for v in obj]
    if hasattr(obj, "_asdict"):
        return {k: plain(v) for k, v in obj._asdict().items()}
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, Cluster):
        return {"centers": plain(obj.centers)}
    if obj is None or isinstance(obj, str):
        return obj
    return _num(obj)


def dumps(obj) -> str:
    return json.dumps(plain(obj), indent=2, sort_keys=False) + "\n"


# ------------------------------------------------------------------ arrangements


def arrangement_to_dict(A: PeriodicArrangement) -> dict:
    d = {
        "type": "arrangement",
        "dim": A.dim,
        "basis": plain(A.lattice.basis),
        "motif": plain(A.motif),
        "radius": _num(A.radius),
    }
    if A.allow_coincident:
        d["allow_coincident"] = True
    return d


def cluster_to_dict(C: Cluster, kind: str | None = None, scale: float | None = None) -> dict:
    d = {"type": "cluster", "centers": plain(C.centers), "radius": 1.0}
    if kind is not None:
        d["kind"] = kind
    if scale is not None:
        d["scale"] = _num(scale)
    return d


def finite_to_dict(centers, radius: float, window) -> dict:
    return {"type": "finite", "centers": plain(np.asarray(centers)), "radius": _num(radius),
            "window": plain(list(window))}


def _matrix(v, name, rows=None, cols=None):
    try:
        a = np.array(v, dtype=float)
    except (TypeError, ValueError) as e:
        raise FormatError(f"{name} must be an array of numbers") from e
    if a.ndim != 2 or (rows is not None and a.shape[0] != rows) or (cols is not None and a.shape[1] != cols):
        raise FormatError(f"{name} has shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise FormatError(f"{name} has non-finite entries")
    return a


def from_dict(d: dict):
    """Parse an arrangement, cluster or finite disk set."""
    if not isinstance(d, dict):
        raise FormatError("top level must be an object")
    kind = d.get("type", "arrangement")
    try:
        if kind == "arrangement":
            missing = {"dim", "basis", "motif", "radius"} - set(d)
            if missing:
                raise FormatError(f"missing fields: {', '.join(sorted(missing))}")
            dim = d["dim"]
            if not isinstance(dim, int) or dim < 1:
                raise FormatError("dim must be a positive integer")
            basis = _matrix(d["basis"], "basis", dim, dim)
            motif = _matrix(d["motif"], "motif", None, dim)
            radius = float(d["radius"])
            return PeriodicArrangement(Lattice(basis), motif, radius, bool(d.get("allow_coincident", False)))
        if kind == "cluster":
            return Cluster(_matrix(d["centers"], "centers", None, 2))
        if kind == "finite":
            centers = _matrix(d["centers"], "centers", None, 2) if d["centers"] else np.empty((0, 2))
            return {"centers": centers, "radius": float(d["radius"]), "window": tuple(d.get("window", ()))}
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(str(e)) from e
    raise FormatError(f"unknown file type {kind!r}")


def loads(text: str):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"not valid JSON: {e}") from e
    return from_dict(d)


def read(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise FormatError(str(e)) from e
    return loads(text)


def write(path, d: dict) -> None:
    Path(path).write_text(dumps(d))


def result_record(command: str, inputs: dict, result, seed: int | None = None) -> dict:
    return {"command": command, "inputs": plain(inputs), "result": plain(result),
            "tool_version": __version__, "seed": seed}
