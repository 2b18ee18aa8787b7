"""Persistence: field dumps, CSV and JSON emission.

Field dump format: one JSON header line {dim, N, kappa, kind, components},
then the raw little-endian float64 samples of each component in row-major
lattice order.  CSV bodies are deterministic (floats via repr) and carry a
`# schema=1` comment line; wall-clock metadata never enters them -- it goes
to a sidecar written separately.  All writes are atomic (temp file + rename).
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .fields import ScalarField, VectorField
from .grid import Grid

__all__ = [
    "dump_field",
    "load_field",
    "write_csv",
    "write_json",
    "read_csv_rows",
]

CSV_SCHEMA_LINE = "# schema=1"


def _atomic_write_bytes(path: Path, payload: bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_field(path: str | Path, f: ScalarField | VectorField) -> None:
    """Write a field in the raw-float64-with-JSON-header dump format."""
    if isinstance(f, VectorField):
        grid, kind, comps = f.grid, "vector", [c.values for c in f.components]
    else:
        grid, kind, comps = f.grid, "scalar", [f.values]
    header = {
        "dim": grid.dim,
        "N": grid.n,
        "kappa": grid.kappa,
        "kind": kind,
        "components": len(comps),
    }
    blob = (json.dumps(header, sort_keys=True) + "\n").encode()
    for c in comps:
        blob += np.ascontiguousarray(c, dtype="<f8").tobytes()
    _atomic_write_bytes(Path(path), blob)


def load_field(path: str | Path) -> ScalarField | VectorField:
    """Read a field dump; the grid is reconstructed from the header."""
    raw = Path(path).read_bytes()
    nl = raw.index(b"\n")
    header = json.loads(raw[:nl].decode())
    grid = Grid(dim=int(header["dim"]), n=int(header["N"]), kappa=float(header["kappa"]))
    count = int(header["components"])
    body = raw[nl + 1 :]
    per = grid.n**grid.dim * 8
    if len(body) != per * count:
        raise ValueError(f"dump body has {len(body)} bytes, expected {per * count}")
    comps = [
        np.frombuffer(body[i * per : (i + 1) * per], dtype="<f8").reshape(grid.shape)
        for i in range(count)
    ]
    if header["kind"] == "scalar":
        return ScalarField.from_values(grid, comps[0])
    return VectorField.from_values(grid, comps)


def _format_cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(path: str | Path, columns: Sequence[str], rows: Iterable[Sequence]) -> None:
    """Deterministic CSV with the schema comment line."""
    lines = [CSV_SCHEMA_LINE, ",".join(columns)]
    for row in rows:
        lines.append(",".join(_format_cell(v) for v in row))
    _atomic_write_bytes(Path(path), ("\n".join(lines) + "\n").encode())


def read_csv_rows(path: str | Path) -> tuple[list[str], list[list[str]]]:
    lines = Path(path).read_text().splitlines()
    lines = [ln for ln in lines if not ln.startswith("#")]
    header = lines[0].split(",")
    return header, [ln.split(",") for ln in lines[1:]]


def write_json(path: str | Path, obj) -> None:
    _atomic_write_bytes(
        Path(path), (json.dumps(obj, indent=2, sort_keys=True) + "\n").encode()
    )
