"""Plain-text matrix and subset formats.

Matrix: first line the integer ``n``, then ``n`` lines of ``n`` numbers.
Subset: a single line of whitespace-separated indices. Blank trailing lines
are tolerated; anything else after the payload is rejected.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .errors import MatrixFormatError

DIGITS = 12


def _payload_lines(text: str):
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    return lines


def _number(token: str, lineno: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise MatrixFormatError(f"not a number: {token!r}", lineno) from None
    if not math.isfinite(value):
        raise MatrixFormatError(f"non-finite value: {token!r}", lineno)
    return value


def parse_matrix(text: str) -> np.ndarray:
    lines = _payload_lines(text)
    if not lines:
        raise MatrixFormatError("empty input")
    head = lines[0].split()
    if len(head) != 1:
        raise MatrixFormatError("first line must hold only the point count", 1)
    try:
        n = int(head[0])
    except ValueError:
        raise MatrixFormatError(f"bad point count {head[0]!r}", 1) from None
    if n < 1:
        raise MatrixFormatError(f"point count must be positive, got {n}", 1)
    if len(lines) < n + 1:
        raise MatrixFormatError(f"expected {n} rows, found {len(lines) - 1}")
    if len(lines) > n + 1:
        raise MatrixFormatError("trailing garbage after matrix", n + 2)
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        tokens = line.split()
        if len(tokens) != n:
            raise MatrixFormatError(f"expected {n} entries, found {len(tokens)}", lineno)
        rows.append([_number(t, lineno) for t in tokens])
    return np.array(rows, dtype=float)


def format_number(x: float) -> str:
    return f"{x:.{DIGITS}g}"


def format_matrix(matrix) -> str:
    d = np.asarray(getattr(matrix, "dist", matrix), dtype=float)
    out = [str(d.shape[0])]
    out.extend(" ".join(format_number(v) for v in row) for row in d)
    return "\n".join(out) + "\n"


def parse_subset(text: str) -> list[int]:
    lines = _payload_lines(text)
    if not lines or not lines[0].split():
        raise MatrixFormatError("empty subset")
    if len(lines) > 1:
        raise MatrixFormatError("trailing garbage after subset line", 2)
    out = []
    for token in lines[0].split():
        try:
            out.append(int(token))
        except ValueError:
            raise MatrixFormatError(f"bad index {token!r}", 1) from None
    return out


def format_subset(indices) -> str:
    return " ".join(str(int(i)) for i in indices) + "\n"


def read_matrix(path) -> np.ndarray:
    return parse_matrix(Path(path).read_text())


def write_matrix(path, matrix) -> None:
    Path(path).write_text(format_matrix(matrix))


def read_subset(path) -> list[int]:
    return parse_subset(Path(path).read_text())
