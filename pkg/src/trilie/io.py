"""JSON file formats and the bundled example catalog.

Rationals are written as reduced ``"p/q"`` (or ``"p"``) strings and read
from strings or integers. Nested references (``"g"``, ``"h"``, ``"action"``)
may be inline objects, catalog names, or paths relative to the referring file.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Optional

from . import _sparse as sp
from .actions import ActionData, PairMap
from .algebra import LinearMap, ThreeLieAlgebra, VerificationReport
from .errors import InputError
from .linalg import Matrix, as_fraction, format_rational
from .post_lie import ThreePostLie
from .rota_baxter import RBOperator

__all__ = [
    "KINDS",
    "action_from_json",
    "action_to_json",
    "algebra_from_json",
    "algebra_to_json",
    "catalog_dir",
    "catalog_entries",
    "load",
    "load_document",
    "map_from_json",
    "map_to_json",
    "operator_from_json",
    "operator_to_json",
    "postlie_from_json",
    "postlie_to_json",
    "rational",
    "report_from_json",
    "report_to_json",
    "wedge_to_json",
]

KINDS = ("algebra", "action", "operator", "postlie", "map")
CATALOG_ENV = "TRILIE_CATALOG_DIR"


def rational(q) -> str:
    return format_rational(as_fraction(q))


def _vector_json(v) -> dict:
    items = v.items() if isinstance(v, dict) else enumerate(v)
    return {str(i): rational(c) for i, c in sorted(items) if c}


def _vector_from_json(obj, dim: int) -> dict:
    if isinstance(obj, dict):
        out = {}
        for k, c in obj.items():
            try:
                i = int(k)
            except (TypeError, ValueError):
                raise InputError(f"vector key {k!r} is not an index") from None
            if not 0 <= i < dim:
                raise InputError(f"vector index {i} out of range for dimension {dim}")
            c = as_fraction(c)
            if c:
                out[i] = c
        return out
    if isinstance(obj, list):
        if len(obj) != dim:
            raise InputError(f"vector of length {len(obj)}, expected {dim}")
        return sp.from_dense([as_fraction(c) for c in obj])
    raise InputError("vector must be an object or a list")


def _matrix_from_json(obj, rows: int, cols: int) -> Matrix:
    if not isinstance(obj, list) or len(obj) != rows or any(not isinstance(r, list) or len(r) != cols for r in obj):
        raise InputError(f"expected a {rows}x{cols} matrix as a list of rows")
    return Matrix(rows, cols, [[as_fraction(c) for c in r] for r in obj])


def _matrix_json(m: Matrix) -> list:
    return [[rational(c) for c in row] for row in m.entries]


def _require(obj: dict, key: str, where: str):
    if not isinstance(obj, dict):
        raise InputError(f"{where} must be a JSON object")
    if key not in obj:
        raise InputError(f"{where} is missing the field {key!r}")
    return obj[key]


def _natural(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or x < 0:
        raise InputError(f"{what} must be a non-negative integer")
    return x


def algebra_from_json(obj: dict, base: Optional[Path] = None) -> ThreeLieAlgebra:
    dim = _natural(_require(obj, "dim", "algebra"), "dim")
    names = obj.get("basis")
    sc = {}
    for entry in obj.get("brackets", []):
        args = _require(entry, "args", "bracket entry")
        if not isinstance(args, list) or len(args) != 3:
            raise InputError("bracket args must be a list of three indices")
        i, j, k = (_natural(a, "bracket index") for a in args)
        if not i < j < k:
            raise InputError(f"bracket args {args} must be strictly increasing")
        if (i, j, k) in sc:
            raise InputError(f"bracket {args} given twice")
        sc[(i, j, k)] = _vector_from_json(_require(entry, "value", "bracket entry"), dim)
    return ThreeLieAlgebra(dim, sc, names)


def algebra_to_json(a: ThreeLieAlgebra) -> dict:
    return {
        "dim": a.dim,
        "basis": list(a.basis_names),
        "brackets": [{"args": list(k), "value": _vector_json(v)} for k, v in sorted(a.sc.items())],
    }


def _pairmap_from_json(entries, g_dim: int, v_dim: int) -> PairMap:
    rho = {}
    for entry in entries or []:
        pair = _require(entry, "pair", "rho entry")
        if not isinstance(pair, list) or len(pair) != 2:
            raise InputError("rho pair must be a list of two indices")
        i, j = (_natural(a, "pair index") for a in pair)
        if not i < j < g_dim:
            raise InputError(f"rho pair {pair} must satisfy i < j < {g_dim}")
        if (i, j) in rho:
            raise InputError(f"rho pair {pair} given twice")
        rho[(i, j)] = _matrix_from_json(_require(entry, "matrix", "rho entry"), v_dim, v_dim)
    return PairMap(g_dim, v_dim, rho)


def action_from_json(obj: dict, base: Optional[Path] = None) -> ActionData:
    g = _resolve(_require(obj, "g", "action"), "algebra", base)
    h = _resolve(_require(obj, "h", "action"), "algebra", base)
    return ActionData(g, h, _pairmap_from_json(obj.get("rho"), g.dim, h.dim))


def action_to_json(a: ActionData) -> dict:
    return {
        "g": algebra_to_json(a.g),
        "h": algebra_to_json(a.h),
        "rho": [{"pair": list(k), "matrix": _matrix_json(m)} for k, m in sorted(a.rho.rho.items())],
    }


def operator_from_json(obj: dict, base: Optional[Path] = None) -> RBOperator:
    a = _resolve(_require(obj, "action", "operator"), "action", base)
    lam = as_fraction(_require(obj, "lambda", "operator"))
    m = _matrix_from_json(_require(obj, "matrix", "operator"), a.g.dim, a.h.dim)
    return RBOperator(a, LinearMap(a.h.dim, a.g.dim, m), lam)


def operator_to_json(op: RBOperator) -> dict:
    return {"action": action_to_json(op.action), "lambda": rational(op.lam), "matrix": _matrix_json(op.t.matrix)}


def postlie_from_json(obj: dict, base: Optional[Path] = None) -> ThreePostLie:
    dim = _natural(_require(obj, "dim", "post-Lie algebra"), "dim")
    lie_obj = obj.get("lie", [])
    if isinstance(lie_obj, list):
        lie = algebra_from_json({"dim": dim, "basis": obj.get("basis"), "brackets": lie_obj})
    else:
        lie = _resolve(lie_obj, "algebra", base)
        if lie.dim != dim:
            raise InputError("post-Lie bracket has the wrong dimension")
    entries = {}
    for entry in obj.get("tri", []):
        pair = _require(entry, "pair", "tri entry")
        if not isinstance(pair, list) or len(pair) != 2:
            raise InputError("tri pair must be a list of two indices")
        i, j = (_natural(a, "pair index") for a in pair)
        if not i < j < dim:
            raise InputError(f"tri pair {pair} must satisfy i < j < {dim}")
        k = _natural(_require(entry, "arg", "tri entry"), "tri arg")
        if k >= dim:
            raise InputError(f"tri arg {k} out of range")
        if ((i, j), k) in entries:
            raise InputError(f"tri entry {pair}, {k} given twice")
        entries[((i, j), k)] = _vector_from_json(_require(entry, "value", "tri entry"), dim)
    return ThreePostLie.from_entries(lie, entries)


def postlie_to_json(p: ThreePostLie) -> dict:
    tri = []
    for (i, j), m in sorted(p.tri.rho.items()):
        for k, col in enumerate(m.columns()):
            if any(col):
                tri.append({"pair": [i, j], "arg": k, "value": _vector_json(col)})
    lie = algebra_to_json(p.lie)
    return {"dim": p.dim, "basis": lie["basis"], "lie": lie["brackets"], "tri": tri}


def map_from_json(obj: dict, base: Optional[Path] = None) -> LinearMap:
    """``{"matrix": [[...], ...]}``; rows are target coordinates."""
    rows = _require(obj, "matrix", "map")
    if not isinstance(rows, list) or not rows or not isinstance(rows[0], list):
        raise InputError("map matrix must be a non-empty list of rows")
    return LinearMap(len(rows[0]), len(rows), _matrix_from_json(rows, len(rows), len(rows[0])))


def map_to_json(f: LinearMap) -> dict:
    return {"matrix": _matrix_json(f.matrix)}


_READERS = {
    "algebra": algebra_from_json,
    "action": action_from_json,
    "operator": operator_from_json,
    "postlie": postlie_from_json,
    "map": map_from_json,
}


def catalog_dir() -> Path:
    env = os.environ.get(CATALOG_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("trilie") / "catalog"))


def catalog_entries() -> list:
    """``(name, kind, description)`` for each catalog file, sorted by name."""
    d = catalog_dir()
    out = []
    if not d.is_dir():
        return out
    for path in sorted(d.glob("*.json")):
        doc = _read_json(path)
        out.append((path.stem, doc.get("kind", "?"), doc.get("description", "")))
    return out


def _read_json(path: Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno}, column {exc.colno})") from None


def load_document(ref: str, base: Optional[Path] = None) -> tuple:
    """Locate ``ref`` as a file path (relative to ``base`` first) or a catalog name.

    Returns ``(document, directory)``.
    """
    candidates = []
    p = Path(ref)
    if base is not None and not p.is_absolute():
        candidates.append(base / p)
    candidates.append(p)
    for c in candidates:
        if c.is_file():
            return _read_json(c), c.parent
    cat = catalog_dir() / f"{ref}.json"
    if cat.is_file():
        return _read_json(cat), cat.parent
    raise InputError(f"{ref!r} is neither a readable file nor a catalog entry")


def _resolve(ref, kind: str, base: Optional[Path]):
    if isinstance(ref, str):
        doc, where = load_document(ref, base)
        return _parse(doc, kind, where)
    return _parse(ref, kind, base)


def _parse(doc, kind: str, base: Optional[Path]):
    if not isinstance(doc, dict):
        raise InputError(f"{kind} definition must be a JSON object")
    declared = doc.get("kind")
    if declared is not None and declared != kind:
        raise InputError(f"expected a {kind} definition, found kind {declared!r}")
    return _READERS[kind](doc, base)


def load(ref: str, kind: str):
    """Read a definition of the given kind from a path or catalog name."""
    if kind not in _READERS:
        raise InputError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    return _resolve(ref, kind, None)


def _jsonable(x):
    if isinstance(x, Fraction):
        return rational(x)
    if isinstance(x, (tuple, list)):
        return [_jsonable(a) for a in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, Matrix):
        return _matrix_json(x)
    return x


def report_to_json(r: VerificationReport) -> dict:
    return {
        "check": r.check,
        "ok": r.ok,
        "witness": list(r.witness) if r.witness is not None else None,
        "lhs": _jsonable(r.lhs),
        "rhs": _jsonable(r.rhs),
        "detail": r.detail,
    }


def _unjson(x):
    if isinstance(x, str):
        try:
            return as_fraction(x)
        except InputError:
            return x
    if isinstance(x, list):
        if x and all(isinstance(r, list) for r in x):
            return Matrix.from_rows([[as_fraction(c) for c in r] for r in x], len(x[0]))
        return tuple(_unjson(a) for a in x)
    return x


def report_from_json(obj: dict) -> VerificationReport:
    w = obj.get("witness")
    return VerificationReport(
        obj["check"], bool(obj["ok"]), tuple(w) if w is not None else None,
        _unjson(obj.get("lhs")), _unjson(obj.get("rhs")), obj.get("detail", ""))


def wedge_to_json(x: dict) -> list:
    return [{"pair": list(k), "value": rational(c)} for k, c in sorted(x.items())]
