"""Matrix Market (array and coordinate) and JSON matrix files.

JSON layout: ``{"rows": m, "cols": n, "re": [...], "im": [...]}`` with the
real and imaginary parts flattened row-major. Both writers emit 17
significant digits, so a write/read cycle reproduces every float64 exactly.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .errors import DimensionError, ParseError
from .linalg import as_matrix

_FIELDS = {"complex": 2, "real": 1, "double": 1, "integer": 1}
_SYMMETRIES = ("general", "symmetric", "hermitian", "skew-symmetric")


def _number(tok: str, line: int, col: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ParseError(f"not a number: {tok!r}", line, col) from None


def _index(tok: str, line: int, col: int, bound: int) -> int:
    try:
        i = int(tok)
    except ValueError:
        raise ParseError(f"not an index: {tok!r}", line, col) from None
    if not 1 <= i <= bound:
        raise DimensionError(f"line {line}: index {i} outside 1..{bound}")
    return i - 1


def _tokens(text: str):
    """``(line_number, [(column, token), ...])`` for non-blank, non-comment lines."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("%"):
            continue
        toks, col = [], 0
        for tok in raw.split():
            col = raw.index(tok, col)
            toks.append((col + 1, tok))
            col += len(tok)
        yield lineno, toks


def parse_matrix_market(text: str) -> np.ndarray:
    lines = text.splitlines()
    if not lines or not lines[0].lower().startswith("%%matrixmarket"):
        raise ParseError("missing %%MatrixMarket header", 1, 1)
    head = lines[0].split()
    if len(head) != 5:
        raise ParseError("header must read '%%MatrixMarket matrix <format> <field> <symmetry>'", 1)
    obj, fmt, fld, sym = (h.lower() for h in head[1:])
    if obj != "matrix":
        raise ParseError(f"unsupported object {obj!r}", 1)
    if fmt not in ("array", "coordinate"):
        raise ParseError(f"unsupported format {fmt!r}", 1)
    if fld not in _FIELDS:
        raise ParseError(f"unsupported field {fld!r}", 1)
    if sym not in _SYMMETRIES:
        raise ParseError(f"unsupported symmetry {sym!r}", 1)
    if fmt == "array" and sym != "general":
        raise ParseError("array files are read in general symmetry only", 1)
    width = _FIELDS[fld]
    body = _tokens("\n".join([""] + lines[1:]))
    try:
        size_line, size = next(body)
    except StopIteration:
        raise ParseError("missing size line", len(lines) + 1) from None
    want = 2 if fmt == "array" else 3
    if len(size) != want:
        raise ParseError(f"size line needs {want} integers, found {len(size)}", size_line)
    dims = []
    for col, tok in size:
        try:
            dims.append(int(tok))
        except ValueError:
            raise ParseError(f"not an integer: {tok!r}", size_line, col) from None
    m, n = dims[0], dims[1]
    if m < 1 or n < 1:
        raise DimensionError(f"line {size_line}: matrix dimensions must be positive, got {m}x{n}")
    if sym != "general" and m != n:
        raise DimensionError(f"line {size_line}: {sym} matrix must be square")
    A = np.zeros((m, n), dtype=complex)
    count = m * n if fmt == "array" else dims[2]
    if count < 0 or (fmt == "coordinate" and count > m * n):
        raise DimensionError(f"line {size_line}: entry count {count} impossible for {m}x{n}")
    per_line = width + (2 if fmt == "coordinate" else 0)
    last = size_line
    for k in range(count):
        try:
            lineno, toks = next(body)
        except StopIteration:
            raise ParseError(
                f"file ends after {k} of {count} entries", last + 1
            ) from None
        last = lineno
        if len(toks) != per_line:
            raise ParseError(f"expected {per_line} fields, found {len(toks)}", lineno, toks[0][0])
        if fmt == "coordinate":
            i = _index(toks[0][1], lineno, toks[0][0], m)
            j = _index(toks[1][1], lineno, toks[1][0], n)
            vals = toks[2:]
        else:
            i, j = k % m, k // m
            vals = toks
        re = _number(vals[0][1], lineno, vals[0][0])
        im = _number(vals[1][1], lineno, vals[1][0]) if width == 2 else 0.0
        v = complex(re, im)
        A[i, j] = v
        if i != j and sym != "general":
            A[j, i] = {"symmetric": v, "hermitian": v.conjugate(), "skew-symmetric": -v}[sym]
    extra = next(body, None)
    if extra is not None:
        raise DimensionError(f"line {extra[0]}: more entries than the {count} declared")
    return A


def format_matrix_market(A) -> str:
    """Complex general array format, column-major, ``%.17g``."""
    A = as_matrix(A)
    m, n = A.shape
    out = ["%%MatrixMarket matrix array complex general", f"{m} {n}"]
    for v in A.T.reshape(-1):
        out.append(f"{v.real:.17g} {v.imag:.17g}")
    return "\n".join(out) + "\n"


def matrix_to_json(A) -> str:
    A = as_matrix(A)
    flat = A.reshape(-1)
    obj = {
        "rows": A.shape[0],
        "cols": A.shape[1],
        "re": [float(v) for v in flat.real],
        "im": [float(v) for v in flat.imag],
    }
    return json.dumps(obj)


def matrix_from_json(text: str) -> np.ndarray:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(obj, dict) or not {"rows", "cols", "re"} <= obj.keys():
        raise ParseError("JSON matrix needs keys rows, cols, re (and optionally im)")
    m, n = obj["rows"], obj["cols"]
    if not (isinstance(m, int) and isinstance(n, int)) or m < 1 or n < 1:
        raise DimensionError(f"rows and cols must be positive integers, got {m!r}, {n!r}")
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", [0.0] * (m * n)), dtype=float)
    if re.shape != (m * n,) or im.shape != (m * n,):
        raise DimensionError(f"expected {m * n} entries in re and im")
    A = np.empty(m * n, dtype=complex)
    A.real, A.imag = re, im
    return A.reshape(m, n)


def load_matrix(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if str(path).lower().endswith(".json") or text.lstrip().startswith("{"):
        return matrix_from_json(text)
    return parse_matrix_market(text)


def save_matrix(A, path) -> None:
    """Write JSON for ``*.json`` paths, Matrix Market otherwise."""
    text = matrix_to_json(A) if os.fspath(path).lower().endswith(".json") else format_matrix_market(A)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
