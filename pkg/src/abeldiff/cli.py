"""Command-line entry point.

Subcommands: genus | smooth | first-kind | third-kind | haupt | verify.
Curve equations and abscissas are exact (integers or p/q); points are chosen
by abscissa plus an index into the canonical root order of the section, and
the chosen root's decimal approximation is always echoed so the intended
branch can be confirmed.  Structured output (--json) is a single versioned
document; it is byte-for-byte deterministic for identical requests except
for the "timings" subtree.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from . import differentials as diffs
from .curves import Curve, smoothness_report
from .errors import (AbeldiffError, IrrationalAbscissaUnsupported, NotSmooth,
                     VerificationFailed, exit_code_for)
from .parser import format_bpoly, parse_poly
from .towers import TowerContext

SCHEMA = "weier/1"

_RATIONAL = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


def _rational(text: str) -> Fraction:
    if not _RATIONAL.match(text.strip()):
        raise IrrationalAbscissaUnsupported(
            f"{text!r} is not a rational literal; chosen points must have "
            "rational abscissas written as an integer or p/q")
    return Fraction(text.strip())


@dataclass
class Request:
    command: str
    curve: str
    x1: str | None = None
    x2: str | None = None
    xp: str | None = None
    a: list[str] | None = None
    root1: int = 0
    root2: int = 0
    rootp: int = 0
    roota: list[int] | None = None
    digits: int = 50
    json_mode: bool = False
    assume_smooth: bool = False
    series_order: int = 2


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="abeldiff",
        description="Exact Abelian differentials of the first and third kind "
                    "on smooth plane curves, and fundamental-function values.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, need_points in [("genus", False), ("smooth", False),
                              ("first-kind", False), ("third-kind", True),
                              ("haupt", True), ("verify", True)]:
        p = sub.add_parser(name)
        p.add_argument("-f", "--curve", required=True,
                       help="curve polynomial in x and y, e.g. 'x^2+y^2-1'")
        p.add_argument("--json", action="store_true", dest="json_mode")
        p.add_argument("--assume-smooth", action="store_true")
        p.add_argument("--digits", type=int, default=50)
        p.add_argument("--series-order", type=int, default=2)
        if need_points:
            p.add_argument("--x1", required=True)
            p.add_argument("--x2", required=True)
            p.add_argument("--root1", type=int, default=0)
            p.add_argument("--root2", type=int, default=0)
        if name == "haupt":
            p.add_argument("--xp", required=True,
                           help="abscissa of the evaluation point")
            p.add_argument("--rootp", type=int, default=0)
            p.add_argument("--a", action="append", default=[],
                           help="auxiliary pole abscissa (repeat per pole)")
            p.add_argument("--roota", action="append", type=int, default=[])
    return ap


def _request(args: argparse.Namespace) -> Request:
    return Request(
        command=args.command, curve=args.curve,
        x1=getattr(args, "x1", None), x2=getattr(args, "x2", None),
        xp=getattr(args, "xp", None), a=list(getattr(args, "a", []) or []),
        root1=getattr(args, "root1", 0), root2=getattr(args, "root2", 0),
        rootp=getattr(args, "rootp", 0),
        roota=list(getattr(args, "roota", []) or []),
        digits=args.digits, json_mode=args.json_mode,
        assume_smooth=args.assume_smooth, series_order=args.series_order)


def _chosen_point(curve: Curve, ctx: TowerContext, text: str, root: int,
                  label: str, doc_roots: dict):
    x = _rational(text)
    pts = curve.section_roots(x, ctx)
    if not 0 <= root < len(pts):
        raise AbeldiffError(
            f"--{label}: root index {root} out of range 0..{len(pts) - 1}")
    pt = pts[root]
    approx = pt.y.approximate(12)
    doc_roots[label] = {
        "x": str(x),
        "root_index": root,
        "ordinate_approx": {"re": mp.nstr(approx.real, 12),
                            "im": mp.nstr(approx.imag, 12)},
    }
    return pt


def run(req: Request) -> tuple[dict, bool]:
    """Execute a request; returns (structured document, all-verifications-ok)."""
    timings: dict[str, float] = {}
    doc: dict = {
        "schema": SCHEMA,
        "command": req.command,
        "inputs": {
            "curve": req.curve,
            "digits": req.digits,
            "series_order": req.series_order,
            "assume_smooth": req.assume_smooth,
        },
    }
    t0 = time.perf_counter()
    f = parse_poly(req.curve)
    doc["inputs"]["curve_canonical"] = format_bpoly(f)

    if req.command == "smooth":
        report = smoothness_report(f)
        timings["smooth"] = time.perf_counter() - t0
        doc["smooth"] = {"smooth": report.smooth, "detail": report.detail}
        doc["timings"] = timings
        return doc, report.smooth

    curve = Curve(f, assume_smooth=req.assume_smooth)
    doc["genus"] = curve.genus()
    doc["degree"] = curve.r
    timings["curve"] = time.perf_counter() - t0

    if req.command == "genus":
        doc["timings"] = timings
        return doc, True

    if req.command == "first-kind":
        basis = diffs.first_kind_basis(curve)
        doc["first_kind"] = {
            "dimension": len(basis),
            "numerators": [format_bpoly(m) for m in basis.numerators],
            "denominator": "f_y",
        }
        doc["timings"] = timings
        return doc, True

    ctx = TowerContext()
    doc["inputs"]["points"] = {}
    t1 = time.perf_counter()
    p1 = _chosen_point(curve, ctx, req.x1, req.root1, "x1", doc["inputs"]["points"])
    p2 = _chosen_point(curve, ctx, req.x2, req.root2, "x2", doc["inputs"]["points"])
    timings["sections"] = time.perf_counter() - t1

    t1 = time.perf_counter()
    naive = diffs.third_kind_system_naive(curve, p1, p2)
    d = diffs.third_kind(curve, p1, p2, series_order=req.series_order)
    timings["third_kind"] = time.perf_counter() - t1

    doc["system"] = {
        "naive_equations": naive.shape[0],
        "unknowns": naive.shape[1],
        "unknown_labels": naive.labels,
        "symmetrized_matrix_rational": True,
        "rank": d.rank,
        "nullspace_dimension": d.parameter_count,
    }
    doc["solution"] = {
        "base_numerator": {
            f"x^{i}*y^{j}": (v.serialize(req.digits) if hasattr(v, "serialize")
                             else str(v))
            for (i, j), v in sorted(d.base_numerator.terms.items())
        },
        "first_kind_numerators": [format_bpoly(m) for m in d.first_kind_numerators],
        "denominator": f"(x - {p1.x})*({p2.x} - x)*f_y",
    }

    verdicts: list[dict] = []
    t1 = time.perf_counter()
    for cert in diffs.residue_certificates(d, series_order=req.series_order):
        verdicts.append({"check": f"residue at {cert['point']}",
                         "expected": cert["expected"], "ok": cert["ok"]})
    timings["residue_oracle"] = time.perf_counter() - t1

    if req.command == "verify":
        t1 = time.perf_counter()
        verdicts.append({"check": "vandermonde equivalence",
                         "ok": diffs.vandermonde_equivalence(d)})
        verdicts.append({"check": "nullspace dimension == genus",
                         "ok": d.parameter_count == curve.genus()})
        try:
            pull = diffs.unit_circle_pullback(d)
            verdicts.append({"check": "unit-circle parametrization pullback",
                             "ok": pull["ok"]})
        except ValueError:
            pass  # oracle only applies to the unit circle
        timings["verify_extra"] = time.perf_counter() - t1

    if req.command == "haupt":
        t1 = time.perf_counter()
        pp = _chosen_point(curve, ctx, req.xp, req.rootp, "xp", doc["inputs"]["points"])
        roota = list(req.roota or [])
        roota += [0] * (len(req.a or []) - len(roota))
        poles = [
            _chosen_point(curve, ctx, ax, ar, f"a{i + 1}", doc["inputs"]["points"])
            for i, (ax, ar) in enumerate(zip(req.a or [], roota))
        ]
        result = diffs.haupt_solve(curve, p1, p2, pp, poles,
                                  series_order=req.series_order)
        timings["haupt"] = time.perf_counter() - t1
        doc["haupt"] = {
            "value": result.value.serialize(req.digits),
            "parameters": [
                (c.serialize() if hasattr(c, "serialize") else str(c))
                for c in result.parameters
            ],
        }
        for i, q in enumerate(poles):
            verdicts.append({
                "check": f"u vanishes at auxiliary pole a{i + 1}",
                "ok": diffs.eval_u(d, q, result.parameters).is_zero(),
            })

    doc["verification"] = verdicts
    doc["timings"] = timings
    return doc, all(v["ok"] for v in verdicts)


def _emit(doc: dict, ok: bool, json_mode: bool) -> None:
    if json_mode:
        print(json.dumps(doc, indent=2))
        return
    print(f"curve: {doc['inputs'].get('curve_canonical', doc['inputs']['curve'])}")
    if "smooth" in doc:
        s = doc["smooth"]
        print(f"smooth: {s['smooth']} ({s['detail']})")
    if "genus" in doc:
        print(f"degree: {doc['degree']}  genus: {doc['genus']}")
    if "first_kind" in doc:
        fk = doc["first_kind"]
        print(f"first-kind basis ({fk['dimension']}): "
              + (", ".join(f"({n})/f_y" for n in fk["numerators"]) or "(empty)"))
    for label, info in doc.get("inputs", {}).get("points", {}).items():
        o = info["ordinate_approx"]
        print(f"point {label}: x = {info['x']}, root #{info['root_index']} "
              f"~ {o['re']} + {o['im']}*i")
    if "system" in doc:
        s = doc["system"]
        print(f"system: {s['naive_equations']} equations, {s['unknowns']} unknowns, "
              f"rank {s['rank']}, free parameters {s['nullspace_dimension']}")
    if "haupt" in doc:
        dec = doc["haupt"]["value"].get("decimal", {})
        print(f"fundamental function value ~ {dec.get('re')} + {dec.get('im')}*i")
    for v in doc.get("verification", []):
        print(f"  [{'PASS' if v['ok'] else 'FAIL'}] {v['check']}")
    total = sum(doc.get("timings", {}).values())
    print(f"done in {total:.3f}s ({'all checks passed' if ok else 'FAILURES'})")


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    req = _request(args)
    try:
        doc, ok = run(req)
    except AbeldiffError as e:
        err = {"schema": SCHEMA, "command": req.command,
               "error": {"type": type(e).__name__, "message": str(e),
                         "exit_code": exit_code_for(e)}}
        if req.json_mode:
            print(json.dumps(err, indent=2))
        else:
            print(f"error [{type(e).__name__}]: {e}", file=sys.stderr)
        return exit_code_for(e)
    _emit(doc, ok, req.json_mode)
    if not ok:
        return NotSmooth.exit_code if req.command == "smooth" \
            else VerificationFailed.exit_code
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
