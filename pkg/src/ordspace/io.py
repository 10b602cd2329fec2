"""JSON space files, element strings and report serialization.

Space file (one space per file)::

    {
      "schema_version": 1,
      "scalar_mode": "exact",              # or "approx"
      "dimension": 2,
      "cone": {"type": "polyhedral_h", "rows": [["1", "0"], ["0", "1"]],
               "strict": [false, false], "include_origin": true},
      "unit": ["1", "1"],
      "labels": ["a", "b"],                # optional
      "element": "(1,0)+(0,1)i",           # optional
      "ideal": [["1", "0"]],               # optional, basis of J
      "map": {"matrix": [[...]], "target": {...space...} or "path"},   # optional
      "functional": {"basis": [[...]], "values": [...]}                  # optional
    }

Other cone types: ``{"type": "polyhedral_v", "generators": [...]}`` and
``{"type": "matrix_psd", "d": 2}``; for the latter the unit may be the string
``"identity"``.  In exact mode every scalar is an integer or a ``"p/q"``
string; floats are rejected.
"""
from __future__ import annotations

import hashlib
import json
import re
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import cone as cn
from . import matrix as mx
from .core import ComplexElement, Mode, fmt_scalar, parse_scalar
from .errors import ParseError

SCHEMA_VERSION = 1
SPACE_KEYS = {"schema_version", "scalar_mode", "dimension", "cone", "unit", "labels", "element", "ideal", "map", "functional"}
CONE_KEYS = {
    "polyhedral_h": {"type", "rows", "strict", "include_origin"},
    "polyhedral_v": {"type", "generators"},
    "matrix_psd": {"type", "d"},
}


def _scalar(x, mode):
    if isinstance(x, float) and mode is Mode.EXACT:
        raise ParseError(f"binary float {x!r} in an exact-mode file; write rationals as 'p/q' strings")
    if not isinstance(x, (str, int, float)) or isinstance(x, bool):
        raise ParseError(f"not a scalar: {x!r}")
    return parse_scalar(x, mode) if isinstance(x, str) else parse_scalar(str(x) if isinstance(x, int) else x, mode)


def _vector(xs, mode, n=None, what="vector"):
    if not isinstance(xs, list):
        raise ParseError(f"{what} must be a list")
    if n is not None and len(xs) != n:
        raise ParseError(f"{what} has length {len(xs)}, expected {n}")
    return tuple(_scalar(x, mode) for x in xs)


def _exactify(v, mode):
    # polyhedral computations are exact; approx-mode floats enter as binary rationals
    return tuple(x if isinstance(x, Fraction) else Fraction(x) for x in v)


def load_json(source):
    if isinstance(source, dict):
        return source
    path = Path(source)
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def parse_space(source, base: Path | None = None):
    """Return ``(space, blocks)`` where ``blocks`` holds the optional element/ideal/map/functional entries."""
    obj = load_json(source)
    if not isinstance(obj, dict):
        raise ParseError("space file must be a JSON object")
    unknown = set(obj) - SPACE_KEYS
    if unknown:
        raise ParseError(f"unknown fields: {sorted(unknown)}")
    for key in ("schema_version", "scalar_mode", "dimension", "cone", "unit"):
        if key not in obj:
            raise ParseError(f"missing field {key!r}")
    if obj["schema_version"] != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {obj['schema_version']!r}")
    try:
        mode = Mode(obj["scalar_mode"])
    except ValueError as exc:
        raise ParseError(f"scalar_mode must be 'exact' or 'approx', got {obj['scalar_mode']!r}") from exc
    n = obj["dimension"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError("dimension must be a positive integer")
    c = obj["cone"]
    if not isinstance(c, dict) or c.get("type") not in CONE_KEYS:
        raise ParseError("cone.type must be one of " + ", ".join(sorted(CONE_KEYS)))
    extra = set(c) - CONE_KEYS[c["type"]]
    if extra:
        raise ParseError(f"unknown cone fields: {sorted(extra)}")
    if c["type"] == "polyhedral_h":
        rows = [_exactify(_vector(r, mode, n, "cone row"), mode) for r in c.get("rows", [])]
        strict = c.get("strict", [False] * len(rows))
        if len(strict) != len(rows) or not all(isinstance(s, bool) for s in strict):
            raise ParseError("cone.strict must be a list of booleans, one per row")
        inc = c.get("include_origin", True)
        if not isinstance(inc, bool):
            raise ParseError("cone.include_origin must be a boolean")
        cone = cn.PolyhedralH(tuple(cn.HalfspaceRow(r, s) for r, s in zip(rows, strict)), n, inc)
    elif c["type"] == "polyhedral_v":
        gens = [_exactify(_vector(g, mode, n, "generator"), mode) for g in c.get("generators", [])]
        cone = cn.PolyhedralV(tuple(gens), n)
    else:
        d = c.get("d")
        if not isinstance(d, int) or d < 1 or d * d != n:
            raise ParseError("matrix_psd needs an integer d with dimension = d*d")
        if mode is Mode.EXACT:
            raise ParseError("matrix_psd spaces are approx-mode only")
        cone = cn.MatrixPSD(d)
    if isinstance(cone, cn.MatrixPSD) and obj["unit"] == "identity":
        unit = mx.from_matrix(np.eye(cone.d))
    else:
        unit = _vector(obj["unit"], mode, n, "unit")
    labels = obj.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != n):
        raise ParseError("labels must be a list with one string per coordinate")
    space = cn.OrderedSpace(cone, unit, mode, tuple(labels) if labels else None)
    blocks = {k: obj[k] for k in ("element", "ideal", "map", "functional") if k in obj}
    if "map" in blocks:
        blocks["map"] = _parse_map(blocks["map"], space, base)
    if "ideal" in blocks:
        blocks["ideal"] = [_exactify(_vector(v, mode, n, "ideal vector"), mode) for v in blocks["ideal"]]
    if "functional" in blocks:
        f = blocks["functional"]
        if not isinstance(f, dict) or set(f) - {"basis", "values"}:
            raise ParseError("functional block needs exactly 'basis' and 'values'")
        blocks["functional"] = {
            "basis": [_exactify(_vector(v, mode, n, "basis vector"), mode) for v in f.get("basis", [])],
            "values": [Fraction(_scalar(x, mode)) for x in f.get("values", [])],
        }
    return space, blocks


def _parse_map(block, space, base):
    if not isinstance(block, dict) or set(block) - {"matrix", "target"} or "matrix" not in block or "target" not in block:
        raise ParseError("map block needs exactly 'matrix' and 'target'")
    tgt = block["target"]
    if isinstance(tgt, str):
        path = Path(tgt)
        if base is not None and not path.is_absolute():
            path = base / path
        target, _ = parse_space(path, path.parent)
        raw_target = load_json(path)
    else:
        target, _ = parse_space(tgt, base)
        raw_target = tgt
    rows = block["matrix"]
    if not isinstance(rows, list) or len(rows) != target.n:
        raise ParseError("map matrix needs one row per target coordinate")
    matrix = [_exactify(_vector(r, space.mode, space.n, "map row"), space.mode) for r in rows]
    return {"matrix": matrix, "target": target, "raw_target": raw_target}


# ------------------------------------------------------------------ elements

_NUM = r"[+-]?\s*(?:\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+)(?:\s*/\s*\d+)?"
_TUPLE = r"\(([^()]*)\)"


def _tuple_values(body, mode):
    parts = [p.strip() for p in body.split(",")] if body.strip() else []
    return tuple(_scalar(p, mode) for p in parts)


def parse_element(text, space) -> ComplexElement:
    """Parse an element string.

    Polyhedral spaces: ``"(x1,...,xn)"``, ``"(x...)i"`` or ``"(x...)+(y...)i"``
    (also ``-`` before the imaginary tuple).  Matrix spaces: ``"Ejk"`` for a
    matrix unit (1-based), or ``"[[a, b], [c, d]]"`` with entries such as
    ``1``, ``-2.5``, ``i``, ``3-2i``.
    """
    if isinstance(text, dict):
        if set(text) - {"re", "im"}:
            raise ParseError("element object needs 're' and optionally 'im'")
        re_ = _vector(text["re"], space.mode, space.n, "element.re")
        im_ = _vector(text.get("im", ["0"] * space.n), space.mode, space.n, "element.im")
        return _finish(re_, im_, space)
    if not isinstance(text, str):
        raise ParseError(f"cannot parse element {text!r}")
    s = text.strip()
    if isinstance(space.cone, cn.MatrixPSD):
        return _parse_matrix_element(s, space)
    m = re.fullmatch(r"\s*" + _TUPLE + r"\s*(?:([+-])\s*" + _TUPLE + r"\s*i)?\s*", s)
    if m:
        re_ = _tuple_values(m.group(1), space.mode)
        if m.group(3) is not None:
            im_ = _tuple_values(m.group(3), space.mode)
            if m.group(2) == "-":
                im_ = tuple(-x for x in im_)
        else:
            im_ = tuple(0 * x for x in re_)
        return _finish(re_, im_, space)
    m = re.fullmatch(r"\s*([+-]?)\s*" + _TUPLE + r"\s*i\s*", s)
    if m:
        im_ = _tuple_values(m.group(2), space.mode)
        if m.group(1) == "-":
            im_ = tuple(-x for x in im_)
        return _finish(tuple(0 * x for x in im_), im_, space)
    raise ParseError(f"cannot parse element {text!r}; expected '(x1,...)+(y1,...)i'")


def _finish(re_, im_, space):
    if len(re_) != space.n or len(im_) != space.n:
        raise ParseError(f"element has length {len(re_)}/{len(im_)}, space dimension is {space.n}")
    if space.polyhedral:
        re_, im_ = _exactify(re_, space.mode), _exactify(im_, space.mode)
    return ComplexElement(re_, im_)


def _complex_entry(tok: str) -> complex:
    t = tok.replace(" ", "")
    if not t:
        raise ParseError("empty matrix entry")
    t = re.sub(r"(?<![\deE.])i", "1i", t).replace("i", "j")
    try:
        return complex(t)
    except ValueError as exc:
        raise ParseError(f"cannot parse matrix entry {tok!r}") from exc


def _parse_matrix_element(s, space):
    d = space.cone.d
    m = re.fullmatch(r"E(\d)(\d)", s)
    if m:
        j, k = int(m.group(1)) - 1, int(m.group(2)) - 1
        if not (0 <= j < d and 0 <= k < d):
            raise ParseError(f"{s} is outside a {d}x{d} matrix")
        X = np.zeros((d, d), dtype=complex)
        X[j, k] = 1
    else:
        rows = re.findall(r"\[([^\[\]]*)\]", s)
        if len(rows) != d or not s.startswith("[["):
            raise ParseError(f"cannot parse matrix element {s!r}")
        X = np.array([[_complex_entry(t) for t in r.split(",")] for r in rows], dtype=complex)
        if X.shape != (d, d):
            raise ParseError(f"matrix element must be {d}x{d}")
    x, y = mx.split(X)
    return ComplexElement(x, y)


# ------------------------------------------------------------------ reports


def jsonable(obj):
    """Recursively convert scalars to strings and tuples to lists."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (Fraction, float, np.floating)):
        return fmt_scalar(float(obj) if isinstance(obj, np.floating) else obj)
    if isinstance(obj, int):
        return obj
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, ComplexElement):
        return {"re": jsonable(obj.re), "im": jsonable(obj.im)}
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def space_to_json(space) -> dict:
    c = space.cone
    if isinstance(c, cn.PolyhedralH):
        cone = {
            "type": "polyhedral_h",
            "rows": [[fmt_scalar(x) for x in r.a] for r in c.rows],
            "strict": [r.strict for r in c.rows],
            "include_origin": c.include_origin,
        }
    elif isinstance(c, cn.PolyhedralV):
        cone = {"type": "polyhedral_v", "generators": [[fmt_scalar(x) for x in g] for g in c.generators]}
    else:
        cone = {"type": "matrix_psd", "d": c.d}
    out = {
        "schema_version": SCHEMA_VERSION,
        "scalar_mode": space.mode.value,
        "dimension": space.n,
        "cone": cone,
        "unit": [fmt_scalar(x) for x in space.unit],
    }
    if space.labels:
        out["labels"] = list(space.labels)
    return out


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()
