"""Command-line interface and JSON document format.

A function document looks like::

    {"kind": "affine", "dim": 1,
     "forms": [["1", "0"], ["1", "-1"]],
     "cells": [{"signs": "+-", "value": 1}],
     "metadata": {"name": "open unit interval"}}

Affine forms list the linear coefficients followed by the constant term;
projective forms list the n+1 linear coefficients.  Sign strings use the
characters ``-``, ``0``, ``+`` in the order of ``forms``; omitted cells have
value 0.  All rationals are strings such as ``"-3/4"``.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Sequence, TextIO

from . import checks
from .arrangement import CHAR_SIGNS, SIGN_CHARS, Arrangement
from .constructible import (
    DEFAULT_MAX_CELLS,
    AffineCF,
    PolyhedronSpec,
    convolve,
    convolve_np,
    dual,
    gamma_project,
    integrate,
    integrate_np,
    pullback,
    pushforward,
    pushforward_np,
)
from .errors import ConsistencyError, ResourceError, ValidationError
from .projective import (
    ProjectiveCF,
    canonical,
    dual_proj,
    embed_eim,
    embed_oim,
    integrate_proj,
    restrict_chart,
)
from .radon import betti_slice, plane_section, radon_dual_p2, radon_invert_check, radon_p2, slice_eval_r3
from .ratgeom import AffineForm, AffineMap, format_rational, parse_rational

COMMANDS = (
    "eval", "integrate", "integrate-np", "dual", "add", "mul", "pull", "push", "push-np",
    "convolve", "convolve-np", "gamma-project", "embed", "restrict", "radon", "radon-dual",
    "radon-invert", "slice-eval", "betti-slice", "check-suite",
)

CF = AffineCF | ProjectiveCF


def data_path(name: str) -> Path:
    """Path of a sample document shipped with the package."""
    return Path(str(resources.files("eulercalc") / "data" / name))


# ---------------------------------------------------------------------------
# documents


def _rationals(values: Any, what: str) -> tuple[Fraction, ...]:
    if not isinstance(values, list):
        raise ValidationError(f"{what}: expected a list of rational strings")
    try:
        return tuple(parse_rational(v) for v in values)
    except ValidationError as exc:
        raise ValidationError(f"{what}: {exc}") from None


def _int(value: Any, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ValidationError(f"{what}: expected an integer, got {value!r}")
    try:
        return int(value)
    except ValueError:
        raise ValidationError(f"{what}: expected an integer, got {value!r}") from None


def _read_json(path: str | Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(doc, dict):
        raise ValidationError(f"{path}: top level must be an object")
    return doc


def _parse_signs(text: Any, width: int, where: str) -> tuple[int, ...]:
    if not isinstance(text, str):
        raise ValidationError(f"{where}: signs must be a string over '-0+'")
    if len(text) != width:
        raise ValidationError(f"{where}: sign string {text!r} has length {len(text)}, expected {width}")
    for pos, ch in enumerate(text):
        if ch not in CHAR_SIGNS:
            raise ValidationError(f"{where}: invalid sign character {ch!r} at position {pos}")
    return tuple(CHAR_SIGNS[ch] for ch in text)


def document_to_cf(doc: dict) -> CF:
    """Validate a parsed document and build the function it describes."""
    kind = doc.get("kind")
    if kind not in ("affine", "projective"):
        raise ValidationError(f"unknown document kind {kind!r}")
    n = _int(doc.get("dim"), "dim")
    if n < 0 or (kind == "projective" and n < 1):
        raise ValidationError(f"invalid dimension {n}")
    width = n + 1
    raw_forms = doc.get("forms", [])
    if not isinstance(raw_forms, list):
        raise ValidationError("forms must be a list")
    keys, flips = [], []
    for i, raw in enumerate(raw_forms):
        vals = _rationals(raw, f"form {i}")
        if len(vals) != width:
            raise ValidationError(f"form {i} has {len(vals)} coefficients, expected {width}")
        form = AffineForm(vals[:-1], vals[-1]) if kind == "affine" else AffineForm(vals, 0)
        if form.is_degenerate:
            raise ValidationError(f"form {i} has no linear part")
        norm, sign = form.normalized()
        keys.append(norm.key())
        flips.append(sign)
    central = kind == "projective"
    space = n + 1 if central else n
    if central:
        missing = [j for j in range(space)
                   if tuple(int(i == j) for i in range(space)) + (0,) not in keys]
        if missing:
            raise ValidationError(f"projective document lacks coordinate form(s) x{missing[0] + 1}")
    arr = Arrangement(space, keys, central=central)
    slots = [arr.position[k] for k in keys]
    values: dict[tuple, int] = {}
    raw_cells = doc.get("cells", [])
    if not isinstance(raw_cells, list):
        raise ValidationError("cells must be a list")
    for ci, cell in enumerate(raw_cells):
        where = f"cell {ci}"
        if not isinstance(cell, dict):
            raise ValidationError(f"{where}: expected an object with 'signs' and 'value'")
        doc_signs = _parse_signs(cell.get("signs"), len(keys), where)
        value = _int(cell.get("value"), f"{where} value")
        signs: list[int | None] = [None] * len(arr.keys)
        for s, slot, flip in zip(doc_signs, slots, flips):
            s *= flip
            if signs[slot] is not None and signs[slot] != s:
                raise ValidationError(f"{where}: duplicate forms disagree in {cell['signs']!r}")
            signs[slot] = s
        key = tuple(signs)
        try:
            arr.cell(key)
        except ValidationError:
            raise ValidationError(f"{where}: sign vector {cell['signs']!r} is not realizable") from None
        if key in values and values[key] != value:
            raise ValidationError(f"{where}: {cell['signs']!r} listed twice with different values")
        values[key] = value
    if central:
        for key, v in values.items():
            anti = tuple(-s for s in key)
            if values.get(anti, 0) != v:
                label = "".join(SIGN_CHARS[s] for s in key)
                raise ValidationError(
                    f"evenness violated: cell {label} has value {v} but its antipode has {values.get(anti, 0)}")
        return ProjectiveCF(arr, {canonical(k): v for k, v in values.items()})
    return AffineCF(arr, values)


def cf_to_document(cf: CF, metadata: dict | None = None) -> dict:
    """Canonical document: stored form order, cells in lexicographic sign order."""
    projective = isinstance(cf, ProjectiveCF)
    arr = cf.arr
    forms = [[format_rational(c) for c in (k[:-1] if projective else k)] for k in arr.keys]
    cells = sorted((c.signs, cf.value(c.signs)) for c in arr.cells)
    doc = {
        "kind": "projective" if projective else "affine",
        "dim": cf.n if projective else cf.dim,
        "forms": forms,
        "cells": [{"signs": "".join(SIGN_CHARS[s] for s in signs), "value": v} for signs, v in cells if v],
    }
    if metadata:
        doc["metadata"] = metadata
    return doc


def dumps(doc: dict) -> str:
    """JSON text with one form or cell per line."""
    lines = ["{"]
    items = list(doc.items())
    for i, (key, value) in enumerate(items):
        tail = "," if i < len(items) - 1 else ""
        if key in ("forms", "cells") and value:
            inner = ",\n".join("  " + json.dumps(v) for v in value)
            lines.append(f" {json.dumps(key)}: [\n{inner}\n ]{tail}")
        else:
            lines.append(f" {json.dumps(key)}: {json.dumps(value)}{tail}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def load(path: str | Path) -> CF:
    return document_to_cf(_read_json(path))


def save(cf: CF, path: str | Path, metadata: dict | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(cf_to_document(cf, metadata)))


def load_map(path: str | Path) -> AffineMap:
    """``{"matrix": [[...], ...], "translation": [...], "source_dim": m}``."""
    doc = _read_json(path)
    rows = doc.get("matrix")
    if not isinstance(rows, list):
        raise ValidationError("map document needs a 'matrix' list")
    matrix = [_rationals(r, f"matrix row {i}") for i, r in enumerate(rows)]
    src = doc.get("source_dim")
    m = _int(src, "source_dim") if src is not None else (len(matrix[0]) if matrix else 0)
    if any(len(r) != m for r in matrix):
        raise ValidationError(f"every matrix row needs {m} entries")
    trans = _rationals(doc.get("translation", ["0"] * len(matrix)), "translation")
    if len(trans) != len(matrix):
        raise ValidationError("translation length does not match the matrix")
    return AffineMap.make(matrix, trans, m)


def load_gamma(path: str | Path) -> PolyhedronSpec:
    """``{"dim": n, "constraints": [{"form": [...], "relation": ">="}, ...]}``.

    Forms are homogeneous and given by their n linear coefficients.
    """
    doc = _read_json(path)
    n = _int(doc.get("dim"), "dim")
    cons = []
    for i, c in enumerate(doc.get("constraints", [])):
        if not isinstance(c, dict):
            raise ValidationError(f"constraint {i}: expected an object")
        lin = _rationals(c.get("form"), f"constraint {i}")
        if len(lin) != n:
            raise ValidationError(f"constraint {i} has {len(lin)} coefficients, expected {n}")
        cons.append((AffineForm(lin, 0), c.get("relation", ">=")))
    return PolyhedronSpec(tuple(cons))


def _parse_vector(text: str, what: str) -> tuple[Fraction, ...]:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if not parts:
        raise ValidationError(f"{what}: empty vector")
    return tuple(parse_rational(p) for p in parts)


# ---------------------------------------------------------------------------
# commands


def _need(value, flag: str):
    if value is None:
        raise ValidationError(f"this command needs {flag}")
    return value


def _affine(cf: CF, command: str) -> AffineCF:
    if not isinstance(cf, AffineCF):
        raise ValidationError(f"{command} expects an affine function")
    return cf


def _projective(cf: CF, command: str) -> ProjectiveCF:
    if not isinstance(cf, ProjectiveCF):
        raise ValidationError(f"{command} expects a projective function")
    return cf


def _emit(cf: CF, args, out) -> None:
    meta = {"command": args.command}
    if args.output:
        save(cf, args.output, meta)
        nonzero = len(cf.values)
        print(f"wrote {args.output}: {len(cf.arr.keys)} forms, {nonzero} nonzero cells", file=out)
    else:
        out.write(dumps(cf_to_document(cf, meta)))


def run(args, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    cmd = args.command
    if cmd == "check-suite":
        results = checks.run_battery(args.seed, args.scale, args.oversample,
                                     report=lambda line: print(line, file=out, flush=True))
        failed = [r.name for r in results if not r.passed]
        print(f"{len(results) - len(failed)}/{len(results)} checks passed", file=out)
        if failed:
            raise ConsistencyError(f"failed checks: {', '.join(failed)}")
        return 0

    phi = load(_need(args.input, "--input"))
    second = load(args.input2) if args.input2 else None

    if cmd == "eval":
        point = _parse_vector(_need(args.point, "--point"), "--point")
        print(phi(point), file=out)
    elif cmd == "integrate":
        print(integrate_proj(phi) if isinstance(phi, ProjectiveCF) else integrate(phi), file=out)
    elif cmd == "integrate-np":
        print(integrate_np(_affine(phi, cmd)), file=out)
    elif cmd == "dual":
        _emit(dual_proj(phi) if isinstance(phi, ProjectiveCF) else dual(phi), args, out)
    elif cmd in ("add", "mul"):
        other = _need(second, "--input2")
        if type(other) is not type(phi):
            raise ValidationError(f"{cmd} needs two affine or two projective functions")
        _emit(phi + other if cmd == "add" else phi * other, args, out)
    elif cmd == "pull":
        g = load_map(_need(args.map, "--map"))
        _emit(pullback(_affine(phi, cmd), g), args, out)
    elif cmd in ("push", "push-np"):
        f = load_map(_need(args.map, "--map"))
        op = pushforward if cmd == "push" else pushforward_np
        _emit(op(_affine(phi, cmd), f, oversample=args.oversample, rng=random.Random(args.seed),
                 max_cells=args.max_cells), args, out)
    elif cmd in ("convolve", "convolve-np"):
        other = _affine(_need(second, "--input2"), cmd)
        op = convolve if cmd == "convolve" else convolve_np
        _emit(op(_affine(phi, cmd), other, max_cells=args.max_cells, oversample=args.oversample), args, out)
    elif cmd == "gamma-project":
        gamma = load_gamma(_need(args.gamma, "--gamma"))
        _emit(gamma_project(_affine(phi, cmd), gamma, max_cells=args.max_cells, oversample=args.oversample),
              args, out)
    elif cmd == "embed":
        phi = _affine(phi, cmd)
        _emit(embed_oim(phi) if args.oim else embed_eim(phi), args, out)
    elif cmd == "restrict":
        _emit(restrict_chart(_projective(phi, cmd), _need(args.chart, "--chart")), args, out)
    elif cmd in ("radon", "radon-dual"):
        op = radon_p2 if cmd == "radon" else radon_dual_p2
        _emit(op(_projective(phi, cmd), oversample=args.oversample, seed=args.seed), args, out)
    elif cmd == "radon-invert":
        res = radon_invert_check(_projective(phi, cmd), oversample=args.oversample, seed=args.seed)
        print(f"equal: {'true' if res.equal else 'false'}", file=out)
        if args.output:
            save(res.lhs, args.output, {"command": cmd, "side": "R'R phi"})
        if not res.equal:
            raise ConsistencyError("inversion formula violated")
    elif cmd == "slice-eval":
        plane = _parse_vector(_need(args.plane, "--plane"), "--plane")
        print(slice_eval_r3(_affine(phi, cmd), AffineForm(plane[:-1], plane[-1])), file=out)
    elif cmd == "betti-slice":
        phi = _affine(phi, cmd)
        if args.plane:
            plane = _parse_vector(args.plane, "--plane")
            phi = plane_section(phi, AffineForm(plane[:-1], plane[-1]))
        b = betti_slice(phi)
        print(f"b0: {b.b0}\nb1: {b.b1}", file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eulercalc", description="Exact Euler calculus of PL constructible functions.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", help="function document")
    p.add_argument("--input2", help="second function document (add, mul, convolve)")
    p.add_argument("--output", help="write the resulting function here instead of stdout")
    p.add_argument("--map", help="affine map document (pull, push)")
    p.add_argument("--gamma", help="cone document (gamma-project)")
    p.add_argument("--chart", type=int, help="1-based affine chart index (restrict)")
    p.add_argument("--max-cells", type=int, default=DEFAULT_MAX_CELLS, help="cell budget for product spaces")
    p.add_argument("--oversample", type=int, default=3, help="extra points checked per output cell")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized steps")
    p.add_argument("--point", help="comma-separated rational point (eval)")
    p.add_argument("--plane", help="comma-separated plane coefficients a1,..,an,b for a.x + b = 0")
    p.add_argument("--oim", action="store_true", help="embed by the direct image instead of extension by zero")
    p.add_argument("--scale", type=float, default=0.3, help="instance-count factor for check-suite")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return 2
    except ConsistencyError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 3
    except (ValidationError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
