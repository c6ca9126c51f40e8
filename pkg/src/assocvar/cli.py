"""assocvar command line: every operation on presentation/module/bundle
files with machine-readable output.

stdout carries one JSON document per run (schema "assocvar/1"), except
``geodesic`` which streams CSV; warnings and geodesic diagnostics go to
stderr.  Exit codes: 0 success, 1 domain error (structured JSON on
stdout), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from fractions import Fraction

from .algebra import FpAlgebra
from .errors import AssocVarError
from .fields import PrimeField, RationalField
from .freealg import format_poly, format_presentation, parse_poly, parse_presentation
from .localrep import local_ring, parse_module_file
from .metric import (
    euclidean_metric,
    is_riemannian,
    metric_at,
    parse_bundle_file,
    bundle_fiber_at,
    tangent_space_at,
    tensor_square,
)
from .phase import phase_space
from .points import basic_open, enumerate_points
from .rewrite import ideal_member, normal_form

SCHEMA = "assocvar/1"


def _scalar_json(fld, v):
    if isinstance(fld, PrimeField):
        return int(v)
    if isinstance(fld, RationalField):
        return str(v)
    return float(v)


def _emit(doc, args):
    if getattr(args, "format", "json") == "text" and "text" in doc:
        sys.stdout.write(doc["text"])
        if not doc["text"].endswith("\n"):
            sys.stdout.write("\n")
    else:
        doc = {"schema": SCHEMA, **{k: v for k, v in doc.items() if k != "text"}}
        json.dump(doc, sys.stdout, indent=None, separators=(",", ":"), sort_keys=True)
        sys.stdout.write("\n")


def _warn(msg):
    print(f"warning: {msg}", file=sys.stderr)


def _load_algebra(args) -> FpAlgebra:
    with open(args.file, encoding="utf-8") as fh:
        pres = parse_presentation(fh.read())
    if args.bound is not None:
        pres = replace(pres, bound=args.bound)
    a = FpAlgebra(pres)
    if not a.rw.is_complete:
        _warn(f"rewrite system complete only up to degree {a.rw.complete_up_to} < bound {pres.bound}")
    return a


def _parse_point(a: FpAlgebra, text: str):
    from .points import check_point

    return check_point(a, [a.field.parse(t.strip()) for t in text.split(",")])


def _points_json(fld, pts):
    return [[_scalar_json(fld, v) for v in p.values] for p in pts]


# -- subcommand handlers -----------------------------------------------------


def cmd_parse(args):
    a = _load_algebra(args)
    _emit(
        {
            "field": a.field.name,
            "gens": list(a.gens),
            "rels": [format_poly(r) for r in a.rels],
            "bound": a.bound,
            "text": format_presentation(a.pres),
        },
        args,
    )


def cmd_nf(args):
    a = _load_algebra(args)
    p = parse_poly(args.poly, a.pres)
    nf = normal_form(p, a.rw)
    _emit(
        {
            "input": format_poly(p),
            "normal_form": format_poly(nf),
            "complete_up_to": a.rw.complete_up_to,
            "bound": a.bound,
            "text": format_poly(nf),
        },
        args,
    )


def cmd_member(args):
    a = _load_algebra(args)
    p = parse_poly(args.poly, a.pres)
    res = ideal_member(p, a.pres, a.rw)
    _emit(
        {
            "status": res.status.value,
            "normal_form": format_poly(res.normal_form),
            "complete_up_to": res.complete_up_to,
            "bound": res.bound,
            "text": res.status.value,
        },
        args,
    )


def cmd_points(args):
    a = _load_algebra(args)
    pts = enumerate_points(a, jobs=args.jobs)
    _emit(
        {
            "count": len(pts),
            "points": _points_json(a.field, pts),
            "text": "\n".join(",".join(str(v) for v in p.values) for p in pts),
        },
        args,
    )


def cmd_open(args):
    a = _load_algebra(args)
    f = parse_poly(args.poly, a.pres)
    pts = basic_open(f, enumerate_points(a, jobs=args.jobs))
    _emit({"count": len(pts), "poly": format_poly(f), "points": _points_json(a.field, pts)}, args)


def cmd_sections(args):
    from .points import section_space

    a = _load_algebra(args)
    f = parse_poly(args.poly, a.pres)
    u = basic_open(f, enumerate_points(a, jobs=args.jobs))
    s = section_space(u)
    _emit(
        {
            "open": format_poly(f),
            "open_size": len(u),
            "dimension": len(s.basis),
            "basis": [[_scalar_json(a.field, v) for v in t] for t in s.basis],
            "contains_unit_inverses": s.contains_unit_inverses,
        },
        args,
    )


def cmd_localring(args):
    with open(args.file, encoding="utf-8") as fh:
        module = parse_module_file(fh.read())
    ring = local_ring(module)
    fld = module.algebra.field
    _emit(
        {
            "module_dim": module.dim,
            "dim": ring.dim,
            "adjoined": len(ring.adjoined_inverses),
            "basis": [[[_scalar_json(fld, v) for v in row] for row in b] for b in ring.basis],
        },
        args,
    )


def cmd_ph(args):
    a = _load_algebra(args)
    ph = phase_space(a)
    text = format_presentation(ph.pres)
    _emit({"gens": list(ph.pres.gens), "rels": [format_poly(r) for r in ph.pres.rels], "text": text}, args)


def cmd_tensor(args):
    a = _load_algebra(args)
    ts = tensor_square(a)
    text = format_presentation(ts.pres)
    _emit({"gens": list(ts.pres.gens), "rels": [format_poly(r) for r in ts.pres.rels], "text": text}, args)


def cmd_tangent(args):
    a = _load_algebra(args)
    p = _parse_point(a, args.point)
    t = tangent_space_at(a, p)
    _emit(
        {
            "point": [_scalar_json(a.field, v) for v in p.values],
            "dim": t.dim,
            "basis": [[_scalar_json(a.field, v) for v in row] for row in t.basis],
        },
        args,
    )


def cmd_metric_at(args):
    a = _load_algebra(args)
    p = _parse_point(a, args.point)
    t = tangent_space_at(a, p)
    g = euclidean_metric(a)
    ipm = metric_at(g, t)
    _emit(
        {
            "point": [_scalar_json(a.field, v) for v in p.values],
            "tangent_dim": t.dim,
            "gram": [_scalar_json(a.field, v) for row in ipm.gram for v in row],
            "symmetric": ipm.symmetric,
            "positive_definite": ipm.positive_definite,
        },
        args,
    )


def cmd_riemannian(args):
    a = _load_algebra(args)
    g = euclidean_metric(a)
    if args.point:
        sample = [_parse_point(a, t) for t in args.point]
    elif isinstance(a.field, PrimeField):
        raise AssocVarError(
            "Riemannian verification needs an ordered field; "
            "prime-field charts have no Gram positivity"
        )
    else:
        sample = []
    res = is_riemannian(g, sample)
    doc = {"ok": res.ok, "vacuous": res.vacuous}
    if res.witness is not None:
        doc["witness"] = [_scalar_json(a.field, v) for v in res.witness.values]
    if res.vacuous:
        _warn("empty sample: Riemannian check is vacuous")
    _emit(doc, args)


def cmd_fiber(args):
    with open(args.file, encoding="utf-8") as fh:
        chart = parse_bundle_file(fh.read())
    p = _parse_point(chart.base, args.point)
    fiber = bundle_fiber_at(chart, p)
    doc = {
        "point": [_scalar_json(chart.base.field, v) for v in p.values],
        "fiber_gens": list(fiber.gens),
        "rels": [format_poly(r) for r in fiber.rels],
        "text": format_presentation(fiber),
    }
    if isinstance(chart.base.field, PrimeField):
        doc["points"] = len(enumerate_points(FpAlgebra(fiber)))
    _emit(doc, args)


def cmd_geodesic(args):
    from .geodesic import RealChart, integrate_geodesic

    with open(args.file, encoding="utf-8") as fh:
        pres = parse_presentation(fh.read())
    chart = RealChart(pres)
    p0 = [float(Fraction(t)) if "/" in t else float(t) for t in args.start.split(",")]
    v0 = [float(Fraction(t)) if "/" in t else float(t) for t in args.direction.split(",")]
    trace = integrate_geodesic(chart, p0, v0, args.length, args.step)
    w = sys.stdout
    w.write("arclength," + ",".join(chart.names) + "\n")
    stride = max(1, args.sample_every)
    k = len(trace.arcs)
    for i in range(0, k, stride):
        w.write(f"{trace.arcs[i]:.12g}," + ",".join(f"{c:.17g}" for c in trace.positions[i]) + "\n")
    if (k - 1) % stride:
        w.write(f"{trace.arcs[-1]:.12g}," + ",".join(f"{c:.17g}" for c in trace.positions[-1]) + "\n")
    json.dump({"schema": SCHEMA, **trace.diagnostics}, sys.stderr, sort_keys=True)
    sys.stderr.write("\n")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="assocvar",
        description="finitely presented associative algebras: points, phase spaces, metrics, geodesics",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, handler, **kw):
        p = sub.add_parser(name, **kw)
        p.set_defaults(handler=handler)
        p.add_argument("file", help="input file")
        p.add_argument("--bound", type=int, default=None, help="override truncation degree")
        p.add_argument("--jobs", type=int, default=1, help="parallel workers for point enumeration")
        p.add_argument("--seed", type=int, default=0, help="seed for sampled subcommands (outputs stay deterministic)")
        p.add_argument("--format", choices=("json", "text"), default="json")
        return p

    add("parse", cmd_parse, help="parse and reprint a presentation")
    p = add("nf", cmd_nf, help="normal form of a polynomial")
    p.add_argument("--poly", required=True)
    p = add("member", cmd_member, help="ideal membership (semidecision)")
    p.add_argument("--poly", required=True)
    add("points", cmd_points, help="enumerate F_p-points")
    p = add("open", cmd_open, help="basic open D(f)")
    p.add_argument("--poly", required=True)
    p = add("sections", cmd_sections, help="section space over D(f)")
    p.add_argument("--poly", default="1")
    add("localring", cmd_localring, help="local function ring of a module file")
    add("ph", cmd_ph, help="phase-space presentation")
    add("tensor", cmd_tensor, help="tensor-square presentation")
    p = add("tangent", cmd_tangent, help="tangent space at a point")
    p.add_argument("--point", required=True, help="comma-separated coordinates")
    p = add("metric-at", cmd_metric_at, help="Gram matrix of the Euclidean tensor at a point")
    p.add_argument("--point", required=True)
    p = add("riemannian", cmd_riemannian, help="positive-definiteness over sample points")
    p.add_argument("--point", action="append", default=[], help="repeatable sample point")
    p = add("fiber", cmd_fiber, help="bundle fiber at a base point")
    p.add_argument("--point", required=True)
    p = add("geodesic", cmd_geodesic, help="integrate a geodesic; CSV to stdout, diagnostics to stderr")
    p.add_argument("--from", dest="start", required=True, help="start point, comma-separated")
    p.add_argument("--dir", dest="direction", required=True, help="initial direction, comma-separated")
    p.add_argument("--length", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--sample-every", type=int, default=1, help="emit every n-th sample")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        args.handler(args)
    except AssocVarError as exc:
        doc = {"schema": SCHEMA, "error": {"code": exc.code, "message": str(exc)}}
        if exc.witness is not None:
            doc["error"]["witness"] = repr(exc.witness)
        json.dump(doc, sys.stdout, sort_keys=True)
        sys.stdout.write("\n")
        return 1
    except OSError as exc:
        json.dump(
            {"schema": SCHEMA, "error": {"code": "io", "message": str(exc)}}, sys.stdout
        )
        sys.stdout.write("\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
