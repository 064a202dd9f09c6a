"""Command-line front end.

Exit status: 0 success / valid / isomorphic, 1 violations / not isomorphic,
2 undecided, 3 usage error, 4 input or output error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import fileformat
from .chardata import (
    CharData,
    CharDataError,
    InvalidCharDataError,
    inspect,
    link_data,
    restrict_to_skeleton,
    validate,
)
from .fanconv import Fan, FanError, fan_to_chardata, validate_fan
from .intlat import GeneratorSet, canonicalize, saturate, smith_invariants
from .isodecide import CONDITIONAL_NOTE, DEFAULT_MAX_SIGNS, Mode, Status, decide, fingerprint
from .polyconv import PolytopeError, PolytopeIncidence, build_face_poset, charfunction_to_chardata
from .reports import Report, Violation
from .stratposet import PosetError, validate_poset

EXIT_OK, EXIT_FAIL, EXIT_UNDECIDED, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _Failure(Exception):
    """Domain failure carrying a report; maps to exit 1."""

    def __init__(self, report: Report) -> None:
        super().__init__(str(report))
        self.report = report


# --------------------------------------------------------------------------
# rendering


def _stratum_rows(d: CharData) -> list[dict[str, Any]]:
    p = d.poset
    return [
        {
            "id": s,
            "dim": p.dim(s),
            "codim": p.codim(s),
            "lattice": [[str(x) for x in r] for r in d.lattices[s].basis],
            "defect": d.defect(s),
        }
        for s in p.ids
    ]


def _table(d: CharData) -> str:
    p = d.poset
    head = ("stratum", "dim", "codim", "lattice", "defect")
    rows = [(s, str(p.dim(s)), str(p.codim(s)), str(d.lattices[s]), str(d.defect(s))) for s in p.ids]
    widths = [max(len(r[i]) for r in [head, *rows]) for i in range(len(head))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in [head, *rows])


def _header(d: CharData) -> str:
    he = "asserted" if d.top_strata_he_asserted else "not asserted"
    parts = [f"m = {d.m}", f"chern = {d.chern}", f"top strata homotopy condition: {he}"]
    if len(d.poset):
        parts[1:1] = [f"l = {d.l}", f"n = {d.n}"]
    if d.skeleton:
        parts.append("skeleton restriction")
    return "\n".join(parts)


def _chardata_text(d: CharData) -> str:
    if not len(d.poset):
        return _header(d) + "\n(empty)"
    return _header(d) + "\n" + _table(d)


def _keys_json(x: Any) -> Any:
    if isinstance(x, tuple):
        return [_keys_json(y) for y in x]
    return x


# --------------------------------------------------------------------------
# input handling


def _load(path: str, args: argparse.Namespace) -> fileformat.Document:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise OSError(f"{path}: {e.strerror or e}") from None
    try:
        return fileformat.loads(text, assert_top_he=args.assert_top_he)
    except fileformat.SchemaError as e:
        raise fileformat.SchemaError(e.field, f"{path}: {e}") from None


def _to_chardata(doc: fileformat.Document) -> CharData:
    """Convert fans and labelled polytopes; raise :class:`_Failure` when that fails."""
    try:
        if isinstance(doc, CharData):
            return doc
        if isinstance(doc, Fan):
            return fan_to_chardata(doc)
        if isinstance(doc, PolytopeIncidence):
            return charfunction_to_chardata(doc)
    except FanError as e:
        raise _Failure(e.report or _single("fan-invalid", str(e))) from None
    except InvalidCharDataError as e:
        raise _Failure(e.report) from None
    except PolytopeError as e:
        raise _Failure(_single("polytope-invalid", str(e))) from None
    raise UsageError("expected chardata, fan or polytope input, got a lattice file")


def _single(code: str, message: str) -> Report:
    return Report((Violation(code, message),))


def _valid_chardata(doc: fileformat.Document) -> CharData:
    d = _to_chardata(doc)
    rep = validate(d)
    if not rep.ok:
        raise _Failure(rep)
    return d


# --------------------------------------------------------------------------
# commands; each returns (exit code, json document, text)


def cmd_validate(args: argparse.Namespace) -> tuple[int, dict, str]:
    doc = _load(args.path, args)
    kind = fileformat.to_json(doc)["kind"]
    if isinstance(doc, Fan):
        rep = validate_fan(doc, require_complete=True)
        if rep.ok:
            inner = validate(fan_to_chardata(doc))
            rep = Report(inner.violations, rep.warnings + inner.warnings)
    elif isinstance(doc, PolytopeIncidence):
        if doc.labels is None:
            try:
                rep = validate_poset(build_face_poset(doc))
            except PolytopeError as e:
                rep = _single("polytope-invalid", str(e))
        else:
            try:
                rep = validate(charfunction_to_chardata(doc, check=False))
            except PolytopeError as e:
                rep = _single("polytope-invalid", str(e))
    elif isinstance(doc, CharData):
        rep = validate(doc)
    else:
        rep = Report()
    out = {"command": "validate", "kind": kind, "report": rep.to_json()}
    text = str(rep)
    if isinstance(doc, CharData):
        out["top_strata_he"] = doc.top_strata_he_asserted
    return (EXIT_OK if rep.ok else EXIT_FAIL), out, text


def cmd_inspect(args: argparse.Namespace) -> tuple[int, dict, str]:
    d = _valid_chardata(_load(args.path, args))
    r = inspect(d)
    out = {"command": "inspect", "inspect": r.to_json(), "strata": _stratum_rows(d)}
    he = "asserted" if r.top_strata_he_asserted else "not asserted"
    lines = [
        f"l = {r.l}",
        f"n = {r.n}",
        f"m = {r.m}",
        f"total dimension = {r.total_dim}",
        "skeleton dimensions = " + ", ".join(map(str, r.skeleton_dims)),
        "strata per level = " + ", ".join(map(str, r.strata_per_level)),
        f"fixed components ({len(r.fixed_components)}) = " + ", ".join(r.fixed_components),
        f"free part dimension = {r.free_part_dim}",
        f"top strata homotopy condition: {he}",
        _table(d),
    ]
    return EXIT_OK, out, "\n".join(lines)


def _emit_chardata(d: CharData) -> tuple[int, dict, str]:
    return EXIT_OK, fileformat.to_json(d), _chardata_text(d)


def cmd_link(args: argparse.Namespace) -> tuple[int, dict, str]:
    d = _valid_chardata(_load(args.path, args))
    if args.stratum not in d.poset:
        raise UsageError(f"unknown stratum {args.stratum!r}; known: {', '.join(d.poset.ids)}")
    return _emit_chardata(link_data(d, args.stratum))


def cmd_fan2cd(args: argparse.Namespace) -> tuple[int, dict, str]:
    doc = _load(args.path, args)
    if not isinstance(doc, Fan):
        raise UsageError("fan2cd expects a fan file")
    return _emit_chardata(_to_chardata(doc))


def cmd_poly2cd(args: argparse.Namespace) -> tuple[int, dict, str]:
    doc = _load(args.path, args)
    if not isinstance(doc, PolytopeIncidence):
        raise UsageError("poly2cd expects a polytope file")
    if doc.labels is None:
        raise UsageError("poly2cd needs facet labels in the polytope file")
    return _emit_chardata(_to_chardata(doc))


def cmd_skeleton(args: argparse.Namespace) -> tuple[int, dict, str]:
    d = _valid_chardata(_load(args.path, args))
    if not 0 <= args.i <= d.n:
        raise UsageError(f"skeleton index {args.i} outside 0..{d.n}")
    return _emit_chardata(restrict_to_skeleton(d, args.i))


def cmd_snf(args: argparse.Namespace) -> tuple[int, dict, str]:
    doc = _load(args.path, args)
    if not isinstance(doc, GeneratorSet):
        raise UsageError("snf expects a lattice file")
    inv = smith_invariants(doc)
    basis, r = canonicalize(doc)
    lat, index = saturate(doc)
    out = {
        "command": "snf",
        "m": doc.m,
        "rank": r,
        "smith_invariants": [str(x) for x in inv],
        "canonical_basis": [[str(x) for x in row] for row in basis],
        "saturation": [[str(x) for x in row] for row in lat.basis],
        "index": str(index),
    }
    text = "\n".join([
        f"m = {doc.m}",
        f"rank = {r}",
        "smith invariants = " + (", ".join(map(str, inv)) or "(none)"),
        "canonical basis = " + ("<" + ", ".join("(" + ",".join(map(str, row)) + ")" for row in basis) + ">"
                                if basis else "0"),
        f"saturation = {lat}",
        f"index = {index}",
    ])
    return EXIT_OK, out, text


def cmd_fingerprint(args: argparse.Namespace) -> tuple[int, dict, str]:
    d = _valid_chardata(_load(args.path, args))
    m, keys = fingerprint(d)
    out = {"command": "fingerprint", "m": m, "keys": _keys_json(keys)}
    text = "\n".join([f"m = {m}"] + [json.dumps(_keys_json(k)) for k in keys])
    return EXIT_OK, out, text


def cmd_iso(args: argparse.Namespace) -> tuple[int, dict, str]:
    a = _valid_chardata(_load(args.path_a, args))
    b = _valid_chardata(_load(args.path_b, args))
    v = decide(a, b, Mode(args.mode), max_signs=args.max_signs)
    code = {Status.ISOMORPHIC: EXIT_OK, Status.NOT_ISOMORPHIC: EXIT_FAIL, Status.UNDECIDED: EXIT_UNDECIDED}[v.status]
    out = {"command": "iso", "mode": args.mode, "verdict": v.to_json()}
    lines = [f"verdict: {v.status.value}", f"detail: {v.detail}"]
    if v.witness is not None:
        lines.append("psi = " + json.dumps([list(r) for r in v.witness.psi.matrix]))
        lines.append("poset map:")
        f = v.witness.poset_iso.mapping
        lines += [f"  {s} -> {f[s]}" for s in a.poset.ids]
    if v.conditional:
        lines.append(f"note: {CONDITIONAL_NOTE}")
    return code, out, "\n".join(lines)


COMMANDS = {
    "validate": cmd_validate,
    "inspect": cmd_inspect,
    "link": cmd_link,
    "iso": cmd_iso,
    "fan2cd": cmd_fan2cd,
    "poly2cd": cmd_poly2cd,
    "skeleton": cmd_skeleton,
    "snf": cmd_snf,
    "fingerprint": cmd_fingerprint,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--assert-top-he", action="store_true",
                        help="treat chardata inputs as satisfying the top-strata homotopy condition")
    common.add_argument("-o", "--output", help="write the report here instead of stdout")

    ap = _Parser(prog="charfunctor", description="Characteristic data of locally standard torus actions.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("validate", "inspect", "fan2cd", "poly2cd", "snf", "fingerprint"):
        sub.add_parser(name, parents=[common]).add_argument("path")
    p = sub.add_parser("link", parents=[common])
    p.add_argument("path")
    p.add_argument("stratum")
    p = sub.add_parser("skeleton", parents=[common])
    p.add_argument("path")
    p.add_argument("i", type=int)
    p = sub.add_parser("iso", parents=[common])
    p.add_argument("path_a")
    p.add_argument("path_b")
    p.add_argument("--mode", choices=("weak", "strict"), default="weak")
    p.add_argument("--max-signs", type=int, default=DEFAULT_MAX_SIGNS)
    return ap


def _write(args: argparse.Namespace, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, doc, text = COMMANDS[args.command](args)
    except UsageError as e:
        print(f"charfunctor: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, fileformat.SchemaError) as e:
        print(f"charfunctor: {e}", file=sys.stderr)
        return EXIT_IO
    except _Failure as e:
        code, doc, text = EXIT_FAIL, {"command": args.command, "report": e.report.to_json()}, str(e.report)
    except (CharDataError, PosetError) as e:
        rep = _single("invalid-input", str(e))
        code, doc, text = EXIT_FAIL, {"command": args.command, "report": rep.to_json()}, str(rep)
    rendered = fileformat.dumps(doc) if args.format == "json" else text + "\n"
    try:
        _write(args, rendered)
    except OSError as e:
        print(f"charfunctor: {args.output}: {e.strerror or e}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
