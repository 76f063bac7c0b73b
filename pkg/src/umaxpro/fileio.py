"""Design files, metadata sidecars and long-format tables.

A design file is a headerless comma-separated matrix, one row per point,
written with 17 significant digits so binary64 coordinates round-trip
exactly.  Its metadata lives in a JSON sidecar with the same basename.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .design import Design, DesignError


class DesignFileError(ValueError):
    def __init__(self, path, line, message):
        self.path = str(path)
        self.line = line
        loc = f"{self.path}:{line}" if line is not None else self.path
        super().__init__(f"{loc}: {message}")


def format_coordinate(x: float) -> str:
    return format(float(x), ".17g")


def atomic_write_text(path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def design_to_text(points) -> str:
    pts = np.asarray(points, dtype=float)
    return "".join(",".join(format_coordinate(x) for x in row) + "\n" for row in pts)


def sidecar_path(path) -> Path:
    return Path(path).with_suffix(".json")


def write_design(path, design: Design, meta: dict | None = None) -> None:
    atomic_write_text(path, design_to_text(design.points))
    if meta is not None:
        atomic_write_text(sidecar_path(path), json.dumps(meta, indent=2, sort_keys=True) + "\n")


def parse_design_text(text: str, path="<string>") -> Design:
    rows = []
    width = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            row = [float(tok) for tok in line.split(",")]
        except ValueError:
            raise DesignFileError(path, lineno, f"non-numeric entry in {line!r}") from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise DesignFileError(path, lineno, f"expected {width} columns, found {len(row)}")
        rows.append(row)
    if not rows:
        raise DesignFileError(path, None, "empty design file")
    try:
        return Design(np.array(rows))
    except DesignError as exc:
        raise DesignFileError(path, None, str(exc)) from None


def read_design(path) -> Design:
    return parse_design_text(Path(path).read_text(), path)


def read_metadata(path) -> dict:
    return json.loads(sidecar_path(path).read_text())


def table_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_coordinate(v) if isinstance(v, (float, np.floating)) else v
                         for v in row])
    return buf.getvalue()


def write_table(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    atomic_write_text(path, table_text(header, rows))


def read_table(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
