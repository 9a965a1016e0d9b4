"""State files and grid files.

State file (JSON)::

    {"dim": N, "rho": [[[re, im], ...], ...]}

Grid files carry one row per phase-space point.  CSV headers are
``q,p,value`` for Wigner grids and ``q,p,re,im`` for Kirkwood grids (the
Kirkwood row for (q, p) holds K(p, q)).  JSON grids are
``{"kind": ..., "dim": N, "columns": [...], "rows": [[...], ...]}``.
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import TextIO

import numpy as np

from .field import validate_dimension
from .kirkwood import KirkwoodGrid
from .operators import DEFAULT_TOL, DensityError, DensityMatrix, validate_density
from .wigner import WignerGrid

__all__ = [
    "StateFileError", "load_state", "parse_state", "dump_state", "save_state",
    "format_grid", "parse_grid", "read_grid", "fmt_float", "WIGNER_COLUMNS", "KIRKWOOD_COLUMNS",
]

WIGNER_COLUMNS = ("q", "p", "value")
KIRKWOOD_COLUMNS = ("q", "p", "re", "im")


class StateFileError(ValueError):
    """Malformed or physically invalid state file; ``invariant`` names what failed."""

    def __init__(self, message: str, invariant: str = "schema"):
        super().__init__(message)
        self.invariant = invariant


def fmt_float(x: float) -> str:
    # 17 significant digits round-trip any double
    return f"{float(x):.17g}"


def parse_state(text: str, tol: float = DEFAULT_TOL) -> DensityMatrix:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"malformed JSON: {exc}", "json") from exc
    if not isinstance(doc, dict) or "dim" not in doc or "rho" not in doc:
        raise StateFileError('state file must be an object with "dim" and "rho"')
    try:
        dim = validate_dimension(doc["dim"])
    except (TypeError, ValueError) as exc:
        raise StateFileError(f"invalid dim: {exc}", "dimension") from exc
    try:
        arr = np.array(doc["rho"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise StateFileError(f"rho is not a numeric array: {exc}") from exc
    if arr.shape != (dim.n, dim.n, 2):
        raise StateFileError(f"rho must have shape [{dim.n}][{dim.n}][2], got {list(arr.shape)}")
    if not np.isfinite(arr).all():
        raise StateFileError("rho contains non-finite entries")
    try:
        return validate_density(arr[..., 0] + 1j * arr[..., 1], tol, dim)
    except DensityError as exc:
        raise StateFileError(str(exc), exc.invariant) from exc


def load_state(path: str | Path, tol: float = DEFAULT_TOL) -> DensityMatrix:
    """Read and validate a state file.  I/O problems raise ``OSError``."""
    return parse_state(Path(path).read_text(encoding="utf-8"), tol)


def dump_state(rho) -> str:
    m = np.asarray(rho.matrix if isinstance(rho, DensityMatrix) else rho, dtype=complex)
    doc = {"dim": int(m.shape[0]),
           "rho": [[[float(z.real), float(z.imag)] for z in row] for row in m]}
    return json.dumps(doc)


def save_state(path: str | Path, rho) -> None:
    Path(path).write_text(dump_state(rho) + "\n", encoding="utf-8")


def _rows(grid):
    n = grid.dim.n
    if isinstance(grid, WignerGrid):
        return "wigner", WIGNER_COLUMNS, [(q, p, grid.values[q, p]) for q in range(n) for p in range(n)]
    if isinstance(grid, KirkwoodGrid):
        rows = []
        for q in range(n):
            for p in range(n):
                z = grid.values[p, q]
                rows.append((q, p, z.real, z.imag))
        return "kirkwood", KIRKWOOD_COLUMNS, rows
    raise TypeError(f"cannot serialize {type(grid).__name__}")


def format_grid(grid, fmt: str = "csv") -> str:
    kind, columns, rows = _rows(grid)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([row[0], row[1], *(fmt_float(v) for v in row[2:])])
        return buf.getvalue()
    if fmt == "json":
        doc = {"kind": kind, "dim": grid.dim.n, "columns": list(columns),
               "rows": [[row[0], row[1], *(float(v) for v in row[2:])] for row in rows]}
        return json.dumps(doc) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def parse_grid(text: str, fmt: str = "csv"):
    """Inverse of :func:`format_grid`; returns a WignerGrid or KirkwoodGrid."""
    if fmt == "json":
        doc = json.loads(text)
        columns, rows = tuple(doc["columns"]), doc["rows"]
    else:
        reader = csv.reader(io.StringIO(text))
        columns = tuple(next(reader))
        rows = [row for row in reader if row]
    if columns == WIGNER_COLUMNS:
        kind = "wigner"
    elif columns == KIRKWOOD_COLUMNS:
        kind = "kirkwood"
    else:
        raise ValueError(f"unrecognised grid header {columns}")
    n = validate_dimension(int(round(len(rows) ** 0.5))).n
    if len(rows) != n * n:
        raise ValueError(f"{len(rows)} rows is not a square grid")
    if kind == "wigner":
        vals = np.full((n, n), np.nan)
        for q, p, v in rows:
            vals[int(q), int(p)] = float(v)
        return WignerGrid.from_array(vals)
    vals = np.full((n, n), np.nan + 0j)
    for q, p, re, im in rows:
        vals[int(p), int(q)] = complex(float(re), float(im))
    return KirkwoodGrid.from_array(vals)


def read_grid(path: str | Path):
    path = Path(path)
    fmt = "json" if path.suffix == ".json" else "csv"
    return parse_grid(path.read_text(encoding="utf-8"), fmt)


def write_text(text: str, out: str | Path | None, stdout: TextIO) -> None:
    if out is None or str(out) == "-":
        stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")
