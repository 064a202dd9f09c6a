"""JSON file format for the four input kinds.

Every document carries ``kind`` and ``format_version``. Integers are written
as decimal strings so that large entries survive any JSON consumer; on input
plain JSON integers are accepted too. Errors name the offending field, for
example ``strata[2].lattice[0][1]``.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Union

from .chardata import CharData, CharDataError, ChernClass, ZERO_CHERN
from .fanconv import Fan, FanError
from .intlat import GeneratorSet, LatticeError, NotSaturatedError, SaturatedLattice
from .polyconv import PolytopeError, PolytopeIncidence
from .stratposet import PosetError, StratPoset

FORMAT_VERSION = 1
KINDS = ("chardata", "fan", "polytope", "lattice")

Document = Union[CharData, Fan, PolytopeIncidence, GeneratorSet]


class SchemaError(ValueError):
    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field or '<root>'}: {message}")
        self.field = field


def _at(path: str, key: str | int) -> str:
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else key


class _Reader:
    """Typed field access that reports the JSON path on failure."""

    def __init__(self, doc: Any) -> None:
        self.doc = doc

    def obj(self, v: Any, path: str) -> dict:
        if not isinstance(v, dict):
            raise SchemaError(path, "expected an object")
        return v

    def get(self, o: dict, key: str, path: str, default: Any = KeyError) -> Any:
        if key not in o:
            if default is KeyError:
                raise SchemaError(_at(path, key), "missing field")
            return default
        return o[key]

    def array(self, v: Any, path: str) -> list:
        if not isinstance(v, list):
            raise SchemaError(path, "expected an array")
        return v

    def integer(self, v: Any, path: str) -> int:
        if isinstance(v, bool):
            raise SchemaError(path, "expected an integer, got a boolean")
        if isinstance(v, int):
            return v
        if isinstance(v, str):
            s = v.strip()
            body = s[1:] if s[:1] in "+-" else s
            if body.isdigit() and body.isascii():
                return int(s)
        raise SchemaError(path, f"expected an integer or decimal string, got {v!r}")

    def nonneg(self, v: Any, path: str) -> int:
        x = self.integer(v, path)
        if x < 0:
            raise SchemaError(path, f"expected a non-negative integer, got {x}")
        return x

    def string(self, v: Any, path: str) -> str:
        if not isinstance(v, str):
            raise SchemaError(path, f"expected a string, got {v!r}")
        return v

    def boolean(self, v: Any, path: str) -> bool:
        if not isinstance(v, bool):
            raise SchemaError(path, f"expected true or false, got {v!r}")
        return v

    def rows(self, v: Any, path: str, m: int) -> tuple[tuple[int, ...], ...]:
        out = []
        for i, r in enumerate(self.array(v, path)):
            rp = _at(path, i)
            r = self.array(r, rp)
            if len(r) != m:
                raise SchemaError(rp, f"row has length {len(r)}, expected m={m}")
            out.append(tuple(self.integer(x, _at(rp, j)) for j, x in enumerate(r)))
        return tuple(out)


# --------------------------------------------------------------------------
# reading


def _read_chardata(rd: _Reader, doc: dict, assert_top_he: bool) -> CharData:
    m = rd.nonneg(rd.get(doc, "m", ""), "m")
    ch = rd.obj(rd.get(doc, "chern", "", {"type": "zero"}), "chern")
    ctype = rd.string(rd.get(ch, "type", "chern"), "chern.type")
    if ctype == "zero":
        chern = ZERO_CHERN
    elif ctype == "opaque":
        tag = ch.get("tag")
        if tag is not None:
            tag = rd.string(tag, "chern.tag")
        chern = ChernClass(tag, rd.rows(rd.get(ch, "coords", "chern"), "chern.coords", m))
    else:
        raise SchemaError("chern.type", f"expected 'zero' or 'opaque', got {ctype!r}")
    he = rd.boolean(rd.get(doc, "top_strata_he", "", False), "top_strata_he") or assert_top_he

    dims: dict[str, int] = {}
    lattices: dict[str, SaturatedLattice] = {}
    for i, s in enumerate(rd.array(rd.get(doc, "strata", ""), "strata")):
        sp = _at("strata", i)
        s = rd.obj(s, sp)
        sid = rd.string(rd.get(s, "id", sp), _at(sp, "id"))
        if sid in dims:
            raise SchemaError(_at(sp, "id"), f"duplicate stratum id {sid!r}")
        dims[sid] = rd.nonneg(rd.get(s, "dim", sp), _at(sp, "dim"))
        lp = _at(sp, "lattice")
        rows = rd.rows(rd.get(s, "lattice", sp), lp, m)
        try:
            lattices[sid] = SaturatedLattice.from_rows(rows, m)
        except NotSaturatedError:
            raise SchemaError(lp, "rows span a non-saturated sublattice") from None

    relations = []
    for i, pair in enumerate(rd.array(rd.get(doc, "relations", "", []), "relations")):
        rp = _at("relations", i)
        pair = rd.array(pair, rp)
        if len(pair) != 2:
            raise SchemaError(rp, "expected a pair [lower, upper]")
        a, b = (rd.string(x, _at(rp, j)) for j, x in enumerate(pair))
        for j, x in enumerate((a, b)):
            if x not in dims:
                raise SchemaError(_at(rp, j), f"unknown stratum id {x!r}")
        relations.append((a, b))

    defects = {}
    for sid, v in rd.obj(rd.get(doc, "defects", "", {}), "defects").items():
        if sid not in dims:
            raise SchemaError(_at("defects", sid), f"unknown stratum id {sid!r}")
        defects[sid] = rd.integer(v, _at("defects", sid))
    skeleton = rd.boolean(rd.get(doc, "skeleton", "", False), "skeleton")
    try:
        return CharData(m, StratPoset(dims, relations), lattices, chern, defects, he, skeleton)
    except (CharDataError, PosetError) as e:
        raise SchemaError("", str(e)) from None


def _read_fan(rd: _Reader, doc: dict) -> Fan:
    n = rd.nonneg(rd.get(doc, "n", ""), "n")
    rays = rd.rows(rd.get(doc, "rays", ""), "rays", n)
    cones = []
    for i, c in enumerate(rd.array(rd.get(doc, "max_cones", ""), "max_cones")):
        cp = _at("max_cones", i)
        idx = [rd.nonneg(x, _at(cp, j)) for j, x in enumerate(rd.array(c, cp))]
        for j, x in enumerate(idx):
            if x >= len(rays):
                raise SchemaError(_at(cp, j), f"ray index {x} out of range (have {len(rays)} rays)")
        cones.append(idx)
    try:
        return Fan.from_max_cones(n, rays, cones)
    except FanError as e:
        raise SchemaError("max_cones", str(e)) from None


def _read_polytope(rd: _Reader, doc: dict) -> PolytopeIncidence:
    n = rd.nonneg(rd.get(doc, "n", ""), "n")
    fc = rd.nonneg(rd.get(doc, "facet_count", ""), "facet_count")
    verts = []
    for i, v in enumerate(rd.array(rd.get(doc, "vertices", ""), "vertices")):
        vp = _at("vertices", i)
        v = rd.obj(v, vp)
        vid = rd.string(rd.get(v, "id", vp), _at(vp, "id"))
        fp = _at(vp, "facets")
        fs = [rd.nonneg(x, _at(fp, j)) for j, x in enumerate(rd.array(rd.get(v, "facets", vp), fp))]
        for j, x in enumerate(fs):
            if x >= fc:
                raise SchemaError(_at(fp, j), f"facet index {x} out of range (facet_count={fc})")
        verts.append((vid, frozenset(fs)))
    m = doc.get("m")
    m = None if m is None else rd.nonneg(m, "m")
    labels = None
    if doc.get("labels") is not None:
        raw = rd.array(doc["labels"], "labels")
        if m is None:
            m = len(raw[0]) if raw and isinstance(raw[0], list) else n
        labels = rd.rows(raw, "labels", m)
        if len(labels) != fc:
            raise SchemaError("labels", f"{len(labels)} labels for facet_count={fc}")
    try:
        return PolytopeIncidence(n, fc, tuple(verts), labels, m)
    except PolytopeError as e:
        raise SchemaError("vertices", str(e)) from None


def _read_lattice(rd: _Reader, doc: dict) -> GeneratorSet:
    m = rd.nonneg(rd.get(doc, "m", ""), "m")
    return GeneratorSet(m, rd.rows(rd.get(doc, "rows", ""), "rows", m))


def from_json(doc: Any, *, assert_top_he: bool = False) -> Document:
    rd = _Reader(doc)
    doc = rd.obj(doc, "")
    kind = rd.get(doc, "kind", "")
    if kind not in KINDS:
        raise SchemaError("kind", f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    version = rd.integer(rd.get(doc, "format_version", "", FORMAT_VERSION), "format_version")
    if version != FORMAT_VERSION:
        raise SchemaError("format_version", f"unsupported version {version}, this reader handles {FORMAT_VERSION}")
    try:
        if kind == "chardata":
            return _read_chardata(rd, doc, assert_top_he)
        if kind == "fan":
            return _read_fan(rd, doc)
        if kind == "polytope":
            return _read_polytope(rd, doc)
        return _read_lattice(rd, doc)
    except LatticeError as e:
        raise SchemaError("", str(e)) from None


def loads(text: str, *, assert_top_he: bool = False) -> Document:
    """Parse a document; JSON syntax errors are reported with line and column."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"line {e.lineno} column {e.colno}", e.msg) from None
    return from_json(doc, assert_top_he=assert_top_he)


def load(path: str | Path, *, assert_top_he: bool = False) -> Document:
    return loads(Path(path).read_text(encoding="utf-8"), assert_top_he=assert_top_he)


# --------------------------------------------------------------------------
# writing


def _ints(rows) -> list[list[str]]:
    return [[str(x) for x in r] for r in rows]


def to_json(obj: Document) -> dict:
    if isinstance(obj, CharData):
        p = obj.poset
        acyclic = not any(p.lt(s, s) for s in p.ids)
        pairs = p.covers() if acyclic else sorted((a, b) for a, b in p.relation() if a != b)
        chern: dict[str, Any] = {"type": "zero"}
        if obj.chern.coords is not None:
            chern = {"type": "opaque", "coords": _ints(obj.chern.coords)}
            if obj.chern.tag is not None:
                chern["tag"] = obj.chern.tag
        out = {
            "kind": "chardata",
            "format_version": FORMAT_VERSION,
            "m": str(obj.m),
            "chern": chern,
            "top_strata_he": obj.top_strata_he_asserted,
            "strata": [{"id": s, "dim": str(p.dim(s)), "lattice": _ints(obj.lattices[s].basis)} for s in p.ids],
            "relations": [list(r) for r in pairs],
        }
        if obj.defects:
            out["defects"] = {s: str(v) for s, v in sorted(obj.defects.items())}
        if obj.skeleton:
            out["skeleton"] = True
        return out
    if isinstance(obj, Fan):
        return {
            "kind": "fan",
            "format_version": FORMAT_VERSION,
            "n": str(obj.n),
            "rays": _ints(obj.rays),
            "max_cones": [sorted(c) for c in obj.max_cones()],
        }
    if isinstance(obj, PolytopeIncidence):
        out = {
            "kind": "polytope",
            "format_version": FORMAT_VERSION,
            "n": str(obj.n),
            "facet_count": str(obj.facet_count),
            "vertices": [{"id": v, "facets": sorted(fs)} for v, fs in obj.vertices],
        }
        if obj.labels is not None:
            out["labels"] = _ints(obj.labels)
            out["m"] = str(obj.m)
        return out
    if isinstance(obj, GeneratorSet):
        return {"kind": "lattice", "format_version": FORMAT_VERSION, "m": str(obj.m), "rows": _ints(obj.rows)}
    if isinstance(obj, SaturatedLattice):
        return {"kind": "lattice", "format_version": FORMAT_VERSION, "m": str(obj.m), "rows": _ints(obj.basis)}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Document | dict) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, trailing newline."""
    doc = obj if isinstance(obj, dict) else to_json(obj)
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"

