"""Reading and writing PRMs as CSV or JSON.

Cells accept decimal literals and rational tokens such as ``1/7``.  A blank
cell (CSV) or ``null`` (JSON) is filled from its mirror by reciprocity, and a
blank diagonal means 1, so an upper triangle alone is a complete input.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ParseError
from .prm import PairwiseReciprocalMatrix, validate_prm

FORMATS = ("csv", "json")


@dataclass(frozen=True)
class MatrixDocument:
    source: str
    prm: PairwiseReciprocalMatrix
    format: str

    def to_csv(self) -> str:
        return "\n".join(",".join(repr(float(x)) for x in row) for row in self.prm.entries) + "\n"

    def to_json(self) -> str:
        return json.dumps({"matrix": self.prm.entries.tolist()})


def parse_token(token, row: int, col: int) -> Optional[float]:
    """One cell to a float, or None when blank.  ``row``/``col`` are 1-based."""
    if token is None:
        return None
    if isinstance(token, bool):
        raise ParseError(f"boolean {token!r} is not a number", row, col)
    if isinstance(token, (int, float)):
        return float(token)
    if not isinstance(token, str):
        raise ParseError(f"unsupported cell {token!r}", row, col)
    text = token.strip()
    if not text:
        return None
    try:
        return float(Fraction(text.replace(" ", "")))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"cannot read {text!r} as a number or ratio p/q", row, col) from None


def _complete(cells: list) -> np.ndarray:
    n = len(cells)
    for i, row in enumerate(cells, start=1):
        if len(row) != n:
            raise ParseError(f"expected {n} cells, found {len(row)}", i)
    a = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            v = cells[i][j]
            if v is None:
                mirror = cells[j][i]
                if i == j:
                    v = 1.0
                elif mirror is None:
                    raise ParseError("cell and its mirror are both blank", i + 1, j + 1)
                else:
                    if mirror == 0:
                        raise ParseError("mirror cell is zero; no reciprocal", i + 1, j + 1)
                    v = 1.0 / mirror
            a[i, j] = v
    return a


def parse_csv_text(text: str) -> list:
    rows = []
    for line in csv.reader(io.StringIO(text)):
        if not line or all(not c.strip() for c in line) or line[0].lstrip().startswith("#"):
            continue
        rows.append(line)
    if not rows:
        raise ParseError("no matrix rows found")
    n = len(rows)
    cells = []
    for i, line in enumerate(rows, start=1):
        # tolerate trailing empty cells from editors that pad rows
        while len(line) > n and not line[-1].strip():
            line = line[:-1]
        cells.append([parse_token(tok, i, j) for j, tok in enumerate(line, start=1)])
    return cells


def parse_json_text(text: str) -> list:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if isinstance(data, dict):
        if "matrix" not in data:
            raise ParseError("JSON object must have a 'matrix' key")
        data = data["matrix"]
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise ParseError("matrix must be a non-empty list of rows")
    return [[parse_token(tok, i, j) for j, tok in enumerate(row, start=1)]
            for i, row in enumerate(data, start=1)]


def parse_matrix_text(text: str, format: str) -> PairwiseReciprocalMatrix:
    if format not in FORMATS:
        raise ParseError(f"unknown format {format!r}")
    cells = parse_csv_text(text) if format == "csv" else parse_json_text(text)
    return validate_prm(_complete(cells))


def parse_matrix(path, format: Optional[str] = None) -> MatrixDocument:
    """Read a PRM file.  ``format`` defaults to the file extension."""
    p = Path(path)
    fmt = format or p.suffix.lstrip(".").lower()
    if fmt not in FORMATS:
        raise ParseError(f"cannot infer format from {p.name!r}; pass csv or json")
    text = p.read_text()
    return MatrixDocument(source=str(p), prm=parse_matrix_text(text, fmt), format=fmt)
