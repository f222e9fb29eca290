"""Matrix JSON reading and writing.

Schema: {"p": int, "n": int, "rows": int, "cols": int, "degree_matrix": [[int]],
"entries": [[[{"monomial": [int, ...], "coeff": int}, ...]]], "seed": optional int}
"""

from __future__ import annotations

import json
from pathlib import Path

from .algebra import Form, FormMatrix, check_prime
from .hilburch import DegreeMatrix, HilbertBurchMatrix, validate_degree_matrix


class MatrixFormatError(ValueError):
    """Malformed matrix input; the message names the offending position."""


def _require(doc: dict, key: str, kind):
    if key not in doc:
        raise MatrixFormatError(f"missing field '{key}'")
    val = doc[key]
    if not isinstance(val, kind) or isinstance(val, bool):
        raise MatrixFormatError(f"field '{key}' has the wrong type")
    return val


def matrix_from_dict(doc: dict) -> HilbertBurchMatrix:
    if not isinstance(doc, dict):
        raise MatrixFormatError("top level must be an object")
    p = _require(doc, "p", int)
    n = _require(doc, "n", int)
    rows = _require(doc, "rows", int)
    cols = _require(doc, "cols", int)
    try:
        check_prime(p)
    except ValueError as exc:
        raise MatrixFormatError(f"field 'p': {exc}") from None
    if n < 1:
        raise MatrixFormatError("field 'n' must be positive")
    if cols != rows + 1:
        raise MatrixFormatError(f"shape {rows}x{cols} is not rho x (rho+1)")
    dm = _require(doc, "degree_matrix", list)
    if len(dm) != rows or any(not isinstance(r, list) or len(r) != cols for r in dm):
        raise MatrixFormatError(f"degree_matrix is not {rows}x{cols}")
    for i, r in enumerate(dm):
        for j, x in enumerate(r):
            if not isinstance(x, int) or isinstance(x, bool):
                raise MatrixFormatError(f"degree_matrix cell ({i + 1},{j + 1}) is not an integer")
    rep = validate_degree_matrix(dm)
    if not rep:
        raise MatrixFormatError(f"degree_matrix: {rep.message}")
    ent = _require(doc, "entries", list)
    if len(ent) != rows or any(not isinstance(r, list) or len(r) != cols for r in ent):
        raise MatrixFormatError(f"entries are not {rows}x{cols}")
    forms = []
    for i, r in enumerate(ent):
        frow = []
        for j, cell in enumerate(r):
            where = f"entry ({i + 1},{j + 1})"
            if not isinstance(cell, list):
                raise MatrixFormatError(f"{where} must be a list of terms")
            terms: dict[tuple, int] = {}
            for t, term in enumerate(cell):
                if not isinstance(term, dict) or "monomial" not in term or "coeff" not in term:
                    raise MatrixFormatError(f"{where}, term {t + 1}: needs 'monomial' and 'coeff'")
                mono, c = term["monomial"], term["coeff"]
                if (not isinstance(mono, list) or len(mono) != n + 1
                        or any(not isinstance(e, int) or isinstance(e, bool) or e < 0 for e in mono)):
                    raise MatrixFormatError(f"{where}, term {t + 1}: monomial must list {n + 1} exponents")
                if not isinstance(c, int) or isinstance(c, bool):
                    raise MatrixFormatError(f"{where}, term {t + 1}: coeff must be an integer")
                if sum(mono) != dm[i][j]:
                    raise MatrixFormatError(f"{where}, term {t + 1}: degree {sum(mono)}, expected {dm[i][j]}")
                key = tuple(mono)
                terms[key] = (terms.get(key, 0) + c) % p
            frow.append(Form(n + 1, dm[i][j], terms, p))
        forms.append(frow)
    seed = doc.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
        raise MatrixFormatError("field 'seed' must be an integer")
    try:
        return HilbertBurchMatrix(DegreeMatrix(dm), FormMatrix(forms, n + 1, p), n, seed)
    except ValueError as exc:
        raise MatrixFormatError(str(exc)) from None


def matrix_to_dict(m: HilbertBurchMatrix) -> dict:
    ent = [[[{"monomial": list(e), "coeff": c} for e, c in m.entries[i, j].sorted_terms()]
            for j in range(m.entries.cols)] for i in range(m.entries.rows)]
    doc = {"p": m.p, "n": m.n, "rows": m.entries.rows, "cols": m.entries.cols,
           "degree_matrix": m.degree_matrix.as_lists(), "entries": ent}
    if m.seed is not None:
        doc["seed"] = m.seed
    return doc


def load_matrix(path: str | Path) -> HilbertBurchMatrix:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return matrix_from_dict(doc)


def dump_matrix(m: HilbertBurchMatrix, path: str | Path) -> None:
    Path(path).write_text(json.dumps(matrix_to_dict(m), indent=1) + "\n")


def parse_line(text: str, n: int, p: int):
    """Line from two homogeneous points, "a0,a1,...;b0,b1,..."."""
    from .hilburch import Line

    parts = text.split(";")
    if len(parts) != 2:
        raise MatrixFormatError("a line needs two points separated by ';'")
    pts = []
    for k, part in enumerate(parts):
        try:
            pt = [int(x) % p for x in part.split(",")]
        except ValueError:
            raise MatrixFormatError(f"point {k + 1} is not a list of integers") from None
        if len(pt) != n + 1:
            raise MatrixFormatError(f"point {k + 1} needs {n + 1} coordinates")
        pts.append(pt)
    try:
        return Line(pts[0], pts[1], p)
    except ValueError as exc:
        raise MatrixFormatError(str(exc)) from None
