"""Line-delimited JSON mesh files.

The first line is a header ``{"nx", "ny", "nz", "max_level"}``; each further
line is one leaf ``{"id", "level", "i", "j", "k", "weight", "boundary"}``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from amrpart.errors import MeshParseError, ValidationError
from amrpart.grid.mesh import AmrMesh

_HEADER_FIELDS = ("nx", "ny", "nz", "max_level")
_CELL_FIELDS = ("id", "level", "i", "j", "k", "weight", "boundary")


def dumps_mesh(mesh: AmrMesh) -> str:
    nx, ny, nz = mesh.base_dims
    lines = [json.dumps({"nx": nx, "ny": ny, "nz": nz, "max_level": mesh.max_level})]
    ids = mesh.ids.tolist()
    levels = mesh.level.tolist()
    ijk = mesh.ijk.tolist()
    weights = mesh.weight.tolist()
    flags = mesh.boundary.tolist()
    for cid, lv, (i, j, k), w, b in zip(ids, levels, ijk, weights, flags):
        lines.append(
            json.dumps(
                {"id": cid, "level": lv, "i": i, "j": j, "k": k, "weight": w, "boundary": b}
            )
        )
    return "\n".join(lines) + "\n"


def save_mesh(mesh: AmrMesh, path) -> None:
    Path(path).write_bytes(dumps_mesh(mesh).encode("utf-8"))


def _parse(line: str, lineno: int, fields) -> dict:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MeshParseError(f"invalid JSON ({exc.msg})", lineno) from None
    if not isinstance(record, dict):
        raise MeshParseError("record is not an object", lineno)
    missing = [f for f in fields if f not in record]
    if missing:
        raise MeshParseError(f"missing field(s) {', '.join(missing)}", lineno)
    return record


def _int_field(record: dict, name: str, lineno: int, lo: int = 0) -> int:
    value = record[name]
    if isinstance(value, bool) or not isinstance(value, int) or value < lo:
        raise MeshParseError(f"field {name!r} must be an integer >= {lo}", lineno)
    return value


def loads_mesh(text: str) -> AmrMesh:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise MeshParseError("empty file", 1)
    header = _parse(lines[0], 1, _HEADER_FIELDS)
    dims = tuple(_int_field(header, f, 1, lo=1) for f in ("nx", "ny", "nz"))
    max_level = _int_field(header, "max_level", 1)
    n = len(lines) - 1
    ids = np.zeros(n, dtype=np.uint64)
    level = np.zeros(n, dtype=np.int64)
    ijk = np.zeros((n, 3), dtype=np.int64)
    weight = np.zeros(n)
    boundary = np.zeros(n, dtype=bool)
    for row, line in enumerate(lines[1:]):
        lineno = row + 2
        rec = _parse(line, lineno, _CELL_FIELDS)
        ids[row] = _int_field(rec, "id", lineno)
        level[row] = _int_field(rec, "level", lineno)
        ijk[row] = [_int_field(rec, c, lineno) for c in ("i", "j", "k")]
        w = rec["weight"]
        if isinstance(w, bool) or not isinstance(w, (int, float)) or not np.isfinite(w) or w < 0:
            raise MeshParseError("field 'weight' must be a finite non-negative number", lineno)
        weight[row] = w
        if not isinstance(rec["boundary"], bool):
            raise MeshParseError("field 'boundary' must be true or false", lineno)
        boundary[row] = rec["boundary"]
    try:
        return AmrMesh.from_arrays(dims, max_level, level, ijk, weight, boundary, ids)
    except ValidationError:
        raise
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


def load_mesh(path) -> AmrMesh:
    return loads_mesh(Path(path).read_bytes().decode("utf-8"))
