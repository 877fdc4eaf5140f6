"""``forge``: command-line front end.

Reports are JSON on stdout; diagnostics go to stderr.  Exit codes: 0 on
success, 1 when a verification fails, 2 for usage, parse and validation
errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction
from pathlib import Path

from ..brackets import VectorField
from ..builder import (CircleSpec, CurveSet, MultiplierSet, build_circles, build_leading_term, build_planar,
                       build_separable, build_two_nests, multiplier_field, two_nest_circles)
from ..invariance import NotInvariantError, cofactor, darboux_search, find_invariant_curve
from ..lines import invariant_lines
from ..ratpoly import MPoly, to_str
from ..topo import Window, all_bounds, harnack_bound, root_bound_window, zero_set
from . import gallery as gal
from .doc import DocError, SystemDoc
from .parse import ParseError, parse_poly, parse_rational, substitute_params
from .svg import render

OK, FAILED, USAGE = 0, 1, 2
MODES = ("curves", "circles", "two-nests", "separable", "leading-term")


class UsageError(ValueError):
    pass


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _diag(msg: str) -> None:
    print(msg, file=sys.stderr)


def _window(text: str, res: int) -> Window:
    try:
        x0, x1, y0, y1 = (float(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"window must be x0,x1,y0,y1, got {text!r}") from None
    return Window(x0, x1, y0, y1, res)


# commands

def check_report(doc: SystemDoc) -> tuple:
    if not doc.curves:
        raise UsageError("the document has no curves to check")
    v = doc.field()
    results = []
    for label, g in zip(doc.curve_labels(), doc.curve_polys()):
        rep = cofactor(g, v)
        item = {"label": label, "curve": to_str(g), "verdict": rep.verdict, "remainder": to_str(rep.remainder)}
        if rep.invariant:
            item["cofactor"] = to_str(rep.cofactor)
        results.append(item)
    ok = all(r["verdict"] == "invariant" for r in results)
    return (OK if ok else FAILED), {"command": "check", "all_invariant": ok, "results": results}


def cmd_check(args) -> int:
    code, report = check_report(SystemDoc.load(args.doc))
    _emit(report)
    if code:
        _diag("some curves are not invariant")
    return code


def _spec_poly(spec: dict, key: str, variables, default=None) -> MPoly:
    src = spec.get(key, default)
    if src is None:
        raise UsageError(f"missing {key!r}")
    return parse_poly(substitute_params(str(src), spec.get("params", {})), variables)


def _spec_number(spec: dict, key: str, default=None) -> Fraction:
    src = spec.get(key, default)
    if src is None:
        raise UsageError(f"missing {key!r}")
    p = parse_poly(substitute_params(str(src), spec.get("params", {})), ())
    return p.coeff(()) if not p.is_zero() else Fraction(0)


def synthesize(mode: str, spec: dict) -> SystemDoc:
    """Build the system described by ``spec`` and re-certify every curve.

    Raises :class:`UsageError` for malformed specs and ``AssertionError`` if
    a prescribed curve fails the self-check.
    """
    if mode not in MODES:
        raise UsageError(f"unknown mode {mode!r}")
    variables = tuple(spec.get("variables", ("x", "y")))
    labels = ()
    if mode == "curves":
        srcs = spec.get("curves") or []
        if not srcs:
            raise UsageError("empty curve list")
        curves = CurveSet(tuple(parse_poly(substitute_params(c, spec.get("params", {})), variables) for c in srcs))
        mults = spec.get("multipliers")
        if mults is None:
            raise UsageError("missing 'multipliers'")
        if len(variables) == 2:
            if not isinstance(mults, list):
                raise UsageError("planar multipliers are a list, one per curve")
            lams = tuple(_spec_poly({"m": m, **spec}, "m", variables) for m in mults)
            extra = spec.get("extra", [None, None])
            extra = tuple(None if e is None else _spec_poly({"m": e, **spec}, "m", variables) for e in extra)
            v = build_planar(curves, MultiplierSet(lams, extra))
        else:
            if not isinstance(mults, dict):
                raise UsageError("multipliers map comma-separated curve indices to expressions")
            lams = {tuple(int(i) for i in k.split(",")): _spec_poly({"m": m, **spec}, "m", variables)
                    for k, m in mults.items()}
            v = multiplier_field(curves, lams)
        gs = list(curves)
    elif mode == "circles":
        if variables != ("x", "y"):
            raise UsageError("circles are planar in x, y")
        centers = [tuple(_spec_number({"c": c, **spec}, "c") for c in ab) for ab in spec.get("centers", [])]
        radii = [_spec_number({"r": r, **spec}, "r") for r in spec.get("radii", [])]
        cs = CircleSpec(centers, radii)
        lams = tuple(_spec_poly({"m": m, **spec}, "m", variables) for m in spec.get("multipliers", []))
        system = build_circles(cs, MultiplierSet(lams))
        _diag(f"degree {system.degree}, bound {system.bound} (corollary bound {system.corollary_bound})")
        v, gs = system.field, list(cs.curves(variables))
    elif mode == "two-nests":
        l = int(spec.get("l", 0))
        a = _spec_number(spec, "a")
        radii = [_spec_number({"r": r, **spec}, "r") for r in spec.get("radii", [])]
        v = build_two_nests(l, a, radii)
        gs = two_nest_circles(a, radii)
    elif mode == "separable":
        f1 = _spec_poly(spec, "f1", variables)
        f2 = _spec_poly(spec, "f2", variables)
        line = [_spec_number({"c": c, **spec}, "c") for c in spec.get("line", [])]
        if len(line) != 3:
            raise UsageError("'line' needs three coefficients A, B, C")
        v, g = build_separable(f1, f2, line, _spec_number(spec, "lam"), _spec_number(spec, "g0", "0"))
        ham = _spec_number(spec, "hamiltonian", "0")
        if ham:
            gx, gy = g.diff(variables[0]), g.diff(variables[1])
            v = v + VectorField(variables, (gy * ham, -(gx * ham)))
        gs = [g]
    else:
        G = _spec_poly(spec, "G", variables)
        v, H = build_leading_term(G, _spec_number(spec, "a"), _spec_number(spec, "b"), int(spec.get("n", 0)))
        gs = [H]
    for i, g in enumerate(gs):
        rep = cofactor(g, v)
        if not rep.invariant:
            raise AssertionError(f"self-check failed: curve {i} is not invariant")
    return SystemDoc.from_field(v, gs, labels)


def cmd_synthesize(args) -> int:
    try:
        spec = json.loads(Path(args.spec).read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.spec}: invalid JSON: {exc}") from None
    try:
        doc = synthesize(args.mode, spec)
    except AssertionError as exc:
        _diag(str(exc))
        return FAILED
    # the emitted document must pass check on its own
    code, _ = check_report(doc)
    if code:
        _diag("self-check of the emitted document failed")
        return FAILED
    _emit(doc.to_json())
    return OK


def cmd_darboux(args) -> int:
    doc = SystemDoc.load(args.doc)
    if not doc.curves:
        raise UsageError("the document has no curves")
    v = doc.field()
    curves = doc.curve_polys()
    try:
        certs = darboux_search(curves, v)
    except NotInvariantError as exc:
        _diag(str(exc))
        _emit({"command": "darboux", "error": "not_invariant", "curve": exc.index,
               "remainder": to_str(exc.report.remainder)})
        return FAILED
    _emit({"command": "darboux",
           "cofactors": [to_str(cofactor(g, v).cofactor) for g in curves],
           "dimension": len(certs),
           "certificates": [{"exponents": [str(s) for s in c.exponents], "residual": to_str(c.residual)}
                            for c in certs]})
    return OK


def cmd_find_curve(args) -> int:
    doc = SystemDoc.load(args.doc)
    v = doc.field()
    found = find_invariant_curve(v, args.deg_g, args.deg_k)
    _emit({"command": "find-curve", "deg_g": args.deg_g, "deg_k": args.deg_k,
           "curves": [{"curve": to_str(g), "cofactor": to_str(K)} for g, K in found]})
    return OK


def cmd_lines(args) -> int:
    doc = SystemDoc.load(args.doc)
    v = doc.field()
    if v.dim != 2:
        raise UsageError("lines needs a planar system")
    rep = invariant_lines(v, parse_rational(args.max_abs))
    lines = [{"slope": None if ln.vertical else ln.slope, "intercept": ln.intercept,
              "vertical": ln.vertical, "exact": ln.exact, "residual": ln.residual} for ln in rep.lines]
    _emit({"command": "lines", "max_abs": args.max_abs, "count": len(lines), "lines": lines,
           "families": rep.families})
    return OK


def cmd_ovals(args) -> int:
    doc = SystemDoc.load(args.doc)
    if len(doc.variables) != 2:
        raise UsageError("ovals needs planar curves")
    if not doc.curves:
        raise UsageError("the document has no curves")
    out = []
    for label, g in zip(doc.curve_labels(), doc.curve_polys()):
        w = _window(args.window, args.res) if args.window else root_bound_window(g, resolution=args.res)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            zs = zero_set(g, w)
        if zs.boundary_count:
            _diag(f"{label}: {zs.boundary_count} piece(s) touch the window boundary and are not counted")
        deg = g.degree()
        out.append({"label": label, "curve": to_str(g), "degree": deg,
                    "window": [w.x_min, w.x_max, w.y_min, w.y_max], "resolution": w.resolution,
                    "ovals": zs.closed_count, "boundary_pieces": zs.boundary_count,
                    "harnack_bound": harnack_bound(deg) if deg >= 1 else None})
    _emit({"command": "ovals", "curves": out})
    return OK


def cmd_bounds(args) -> int:
    if args.n < 1:
        raise UsageError("n must be at least 1")
    _emit(all_bounds(args.n))
    return OK


def cmd_gallery(args) -> int:
    records = gal.load_fixtures(args.fixtures)
    results = gal.run_gallery(records, args.filter, args.jobs)
    width = max([len(r.id) for r in results] + [2])
    for r in results:
        mark = "ok" if r.ok else "UNEXPECTED"
        _diag(f"{r.id:<{width}}  {r.observed:<18} {mark}")
    clean = all(r.ok for r in results)
    _emit({"command": "gallery", "filter": args.filter, "count": len(results), "clean": clean,
           "fixtures": [r.as_dict() for r in results]})
    return OK if clean else FAILED


def cmd_plot(args) -> int:
    doc = SystemDoc.load(args.doc)
    if len(doc.variables) != 2:
        raise UsageError("plot needs a planar document")
    v = doc.field()
    curves = doc.curve_polys()
    if args.window:
        w = _window(args.window, args.res)
    elif curves:
        half = max(root_bound_window(g).x_max for g in curves)
        w = Window.square(half, args.res)
    else:
        w = Window.square(3.0, args.res)
    svg = render(curves, w, None if args.no_streamlines else v, doc.curve_labels())
    Path(args.out).write_text(svg)
    _emit({"command": "plot", "out": str(args.out), "window": [w.x_min, w.x_max, w.y_min, w.y_max],
           "curve_polylines": svg.count('class="curve"'), "streamlines": svg.count('class="stream"')})
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="forge", description="Polynomial vector fields with invariant curves.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="verify that each curve of a document is invariant")
    p.add_argument("doc")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("synthesize", help="construct a system with prescribed invariant curves")
    p.add_argument("--mode", required=True, choices=MODES)
    p.add_argument("spec")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("darboux", help="exponents of Darboux first integrals")
    p.add_argument("doc")
    p.set_defaults(func=cmd_darboux)

    p = sub.add_parser("find-curve", help="search for invariant curves of a given degree")
    p.add_argument("doc")
    p.add_argument("--deg-g", type=int, required=True)
    p.add_argument("--deg-k", type=int, default=None)
    p.set_defaults(func=cmd_find_curve)

    p = sub.add_parser("lines", help="invariant straight lines")
    p.add_argument("doc")
    p.add_argument("--max-abs", default="10")
    p.set_defaults(func=cmd_lines)

    p = sub.add_parser("ovals", help="count ovals of each curve")
    p.add_argument("doc")
    p.add_argument("--window", default=None, help="x0,x1,y0,y1")
    p.add_argument("--res", type=int, default=512)
    p.set_defaults(func=cmd_ovals)

    p = sub.add_parser("bounds", help="degree, oval and limit-cycle bounds for degree n")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("gallery", help="re-verify the stored worked examples")
    p.add_argument("--filter", default=None, help="id prefix")
    p.add_argument("--fixtures", default=None, help="alternative fixture file")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_gallery)

    p = sub.add_parser("plot", help="SVG of the curves and streamlines")
    p.add_argument("doc")
    p.add_argument("--out", required=True)
    p.add_argument("--window", default=None, help="x0,x1,y0,y1")
    p.add_argument("--res", type=int, default=256)
    p.add_argument("--no-streamlines", action="store_true")
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, DocError, UsageError, FileNotFoundError, ValueError) as exc:
        _diag(f"forge {args.command}: {exc}")
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
