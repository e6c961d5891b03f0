"""Command-line surface: ncx <check|calc|fn|verify|reproduce|plot>.

Exit codes: 0 success, 1 verification failure (report still written),
2 input error, 3 constraint-qualification violation surfaced from the
library.  Fixed seeds yield byte-identical JSON and SVG outputs.
Set NCX_COLOR=0 to disable ANSI colors in summaries.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction
from pathlib import Path

from ncx import jsonio as jio
from ncx import ncset as ns
from ncx import oracle as orc
from ncx import polykernel as pk
from ncx import subdiff as sd
from ncx import worked
from ncx.errors import CQViolationError, NCXError
from ncx.svg import FigureSpec, render_svg


def _color_enabled() -> bool:
    return os.environ.get("NCX_COLOR") != "0" and sys.stdout.isatty()


def _status(ok: bool) -> str:
    word = "PASS" if ok else "FAIL"
    if _color_enabled():
        code = "32" if ok else "31"
        return f"\x1b[{code}m{word}\x1b[0m"
    return word


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _parse_point(s: str):
    return tuple(Fraction(part.strip()) for part in s.split(","))


# ---------------------------------------------------------------------------
# subcommands


def cmd_check(args) -> int:
    e = jio.parse_ncset(_load_json(args.infile))
    cert = ns.is_nearly_convex(e)
    out = {
        "verdict": cert.verdict,
        "witness": None if cert.witness is None else [jio.qstr(c) for c in cert.witness],
        "core": None if cert.core is None else jio.hrep_to_json(cert.core),
    }
    _emit(jio.pretty_json(out), args.out)
    return 0


def cmd_calc(args) -> int:
    op = args.op
    a = jio.parse_ncset(_load_json(args.a))
    if op == "image" or op == "preimage":
        A = jio.parse_linmap(_load_json(args.map))
        res = ns.nc_image(a, A) if op == "image" else ns.nc_preimage(a, A)
        _emit(jio.pretty_json(jio.ncset_to_json(res)), args.out)
        return 0
    if op == "scale":
        res = ns.nc_scale(a, Fraction(args.scale))
        _emit(jio.pretty_json(jio.ncset_to_json(res)), args.out)
        return 0
    if op == "sum":
        b = jio.parse_ncset(_load_json(args.b))
        res = ns.nc_sum(a, b)
        _emit(jio.pretty_json(jio.ncset_to_json(res)), args.out)
        return 0
    if op == "intersect":
        others = [jio.parse_ncset(_load_json(p)) for p in [args.b] + (args.more or [])]
        res = ns.nc_intersect([a] + others)
        _emit(jio.pretty_json(jio.ncset_to_json(res)), args.out)
        return 0
    if op == "product":
        b = jio.parse_ncset(_load_json(args.b))
        res = ns.nc_product(a, b)
        _emit(jio.pretty_json(jio.ncset_to_json(res)), args.out)
        return 0
    if op == "rec":
        rep = ns.rec_classify(a)
        out = {
            "rec_cl": jio.hrep_to_json(rep.rec_cl),
            "lineality": [[jio.qstr(c) for c in v] for v in rep.lineality],
            "span_condition": rep.span_condition,
            "inner_bound": jio.hrep_to_json(rep.inner_bound),
            "membership_answers": {
                ",".join(jio.qstr(c) for c in d): v for d, v in sorted(rep.membership_answers.items())
            },
            "bounded": ns.is_bounded(a),
        }
        _emit(jio.pretty_json(out), args.out)
        return 0
    raise ValueError(f"unknown op {op!r}")


def cmd_fn(args) -> int:
    f = jio.parse_fn(_load_json(args.spec))
    out = {"kind": f.kind}
    if args.at:
        x = _parse_point(args.at)
        v = f.eval(x)
        out["value"] = "inf" if v == orc.INF else (float(v) if isinstance(v, float) else jio.qstr(v))
        sv = f.subdiff(x)
        out["subdiff"] = jio.subval_to_json(sv)
    if args.conjugate_at:
        y = _parse_point(args.conjugate_at)
        try:
            v = f.conjugate(y)
            out["conjugate"] = "inf" if v == orc.INF else float(v)
        except NCXError as exc:
            out["conjugate_error"] = exc.code
    if args.dom:
        out["dom_subdiff"] = jio.ncset_to_json(f.dom_subdiff())
    _emit(jio.pretty_json(out), args.out)
    return 0


# ---------------------------------------------------------------------------
# verification suites


def _record(records, name, params, violation, passed, tolerance):
    records.append(
        {
            "name": name,
            "params": params,
            "max_violation": None if violation is None else float(violation),
            "passed": bool(passed),
            "tolerance": tolerance,
        }
    )
    return passed


def _rockafellar_case_points(alpha: Fraction):
    """Three rational probes for each row of the subdifferential case table."""
    a = alpha
    r1 = a / 4
    r2 = a / 2
    r3 = 3 * a / 4
    pts = {
        "empty_left": [(-1, 0), (-a, a), (Fraction(-1, 7), -a)],
        "empty_slit": [(0, 0), (0, a / 2), (0, -a + Fraction(1, 1000))],
        "axis_up": [(0, a), (0, a + 1), (0, 2 * a + 3)],
        "axis_down": [(0, -a), (0, -a - 1), (0, -2 * a - 3)],
        "curve_up": [(r * r, a - r) for r in (r1, r2, r3)],
        "curve_down": [(r * r, -(a - r)) for r in (r1, r2, r3)],
        "smooth_sqrt": [(r * r, 0) for r in (r1, r2, r3)],
        "flat_up": [(r2 * r2, a), (r3 * r3, a + 1), (a * a / 16, a)],
        "flat_down": [(r2 * r2, -a), (r3 * r3, -a - 1), (a * a / 16, -a)],
        "apex": [(a * a, 0)],
        "ridge": [(a * a + 1, 0), (2 * a * a, 0), (a * a + Fraction(1, 3), 0)],
        "right_up": [(a * a + 1, 1), (2 * a * a, a), (a * a + Fraction(1, 3), Fraction(1, 9))],
        "right_down": [(a * a + 1, -1), (2 * a * a, -a), (a * a + Fraction(1, 3), Fraction(-1, 9))],
    }
    return pts


def _suite_rockafellar(records, grid_steps, seed) -> bool:
    ok = True
    for alpha in (Fraction(1, 2), Fraction(1), Fraction(2)):
        f = sd.Rockafellar(alpha)
        a = float(alpha)
        gg = orc.Grid(((-1.0, 2 * a * a + 2.0, grid_steps), (-(a + 2.0), a + 2.0, grid_steps)), 0)
        for case, pts in _rockafellar_case_points(alpha).items():
            for x in pts:
                sv = f.subdiff(x)
                if case.startswith("empty"):
                    ok &= _record(records, "rockafellar.empty_case", {"alpha": str(alpha), "case": case, "x": str(x)}, None, sv.empty, None)
                    continue
                worst = 0.0
                for u in sv.points:
                    rep = orc.subgrad_check(f, x, u, gg)
                    worst = max(worst, rep.max_violation)
                ok &= _record(records, "rockafellar.subgrad", {"alpha": str(alpha), "case": case, "x": str(x)}, worst, worst <= orc.TOL_EXACT, orc.TOL_EXACT)
        dom_ok = ns.nc_equal(f.dom_subdiff(), worked.rockafellar_dom_golden(alpha))
        ok &= _record(records, "rockafellar.dom_subdiff", {"alpha": str(alpha)}, None, dom_ok, None)
        cg = orc.Grid(((0.0, a * a + 1.0, 96), (-(a + 1.0), a + 1.0, 96)), refinement=3)
        rng = random.Random(seed)
        worst = 0.0
        for _ in range(25):
            x1 = -Fraction(rng.randrange(0, 300), 100)
            x2 = Fraction(rng.randrange(-99, 100), 100)
            got = orc.conj_oracle(f, (x1, x2), cg)
            worst = max(worst, abs(got - float(f.conjugate((x1, x2)))))
        ok &= _record(records, "rockafellar.conjugate", {"alpha": str(alpha)}, worst, worst <= orc.TOL_GRID, orc.TOL_GRID)
    return ok


def _suite_halfstrip(records, grid_steps, seed) -> bool:
    ok = True
    for alpha in (Fraction(0), Fraction(1)):
        for orient in (1, -1):
            f = sd.HalfStrip(alpha, orient)
            a = float(alpha)
            gg = orc.Grid(((-1.0, a * a + 4.0, grid_steps), (-(a + 3.0), a + 3.0, grid_steps)), 0)
            probes = [
                (Fraction(1, 4), orient * (alpha - Fraction(1, 2))),
                (Fraction(1, 4), orient * (alpha + 1)),
                (Fraction(1, 4), orient * (alpha - 1)),
                (0, orient * alpha),
                (0, orient * (alpha + 2)),
            ]
            worst = 0.0
            for x in probes:
                sv = f.subdiff(x)
                for u in sv.points:
                    rep = orc.subgrad_check(f, x, u, gg)
                    worst = max(worst, rep.max_violation)
            ok &= _record(records, "halfstrip.subgrad", {"alpha": str(alpha), "orientation": orient}, worst, worst <= orc.TOL_EXACT, orc.TOL_EXACT)
        f = sd.HalfStrip(alpha, 1)
        dom_ok = ns.nc_equal(f.dom_subdiff(), worked.halfstrip_dom_golden(alpha))
        ok &= _record(records, "halfstrip.dom_subdiff", {"alpha": str(alpha)}, None, dom_ok, None)
    return ok


def _suite_interval(records, grid_steps, seed) -> bool:
    ok = True
    cases = [
        ("closed", sd.make_interval_fn("closed", 0, 1), [(0,), (Fraction(1, 2),), (1,)]),
        ("ray", sd.make_interval_fn("ray", a=0), [(Fraction(1, 2),), (2,), (5,)]),
        ("open", sd.make_interval_fn("open", 0, 1), [(Fraction(1, 4),), (Fraction(1, 2),), (Fraction(3, 4),)]),
        ("halfopen", sd.make_interval_fn("halfopen", 0, 1), [(Fraction(1, 2),), (Fraction(9, 10),), (1,)]),
    ]
    for name, f, probes in cases:
        gg = orc.Grid(((0.02, 3.0 if name == "ray" else 0.99, grid_steps),), 0)
        worst = 0.0
        for x in probes:
            sv = f.subdiff(x)
            for u in sv.points:
                rep = orc.subgrad_check(f, x, u, gg)
                worst = max(worst, rep.max_violation)
            if x[0] not in (0, 1) and not sv.rays:
                g = orc.fd_gradient(f, (float(x[0]),))
                worst = max(worst, abs(g[0] - float(sv.points[0][0])))
        ok &= _record(records, f"interval.{name}", {}, worst, worst <= 1e-6, 1e-6)
    return ok


def _suite_gauge(records, grid_steps, seed) -> bool:
    C = pk.hrep(2, strict=[((1, 0), 1), ((-1, 0), 1), ((0, 1), 1), ((0, -1), 1)])
    f = sd.make_gauge_recip(C, (0, 0))
    gg = orc.grid2(-0.98, 0.98, grid_steps)
    worst = 0.0
    for x in [(0, 0), (Fraction(1, 2), 0), (Fraction(-1, 3), Fraction(1, 3)), (Fraction(3, 4), Fraction(-1, 5))]:
        for u in f.subdiff(x).points:
            rep = orc.subgrad_check(f, x, u, gg)
            worst = max(worst, rep.max_violation)
    fd = orc.fd_gradient(f, (0.5, 0.0))
    worst = max(worst, abs(fd[0] - 4.0), abs(fd[1]))
    dom_ok = ns.nc_equal(f.dom_subdiff(), ns.from_hrep(C))
    passed = worst <= 1e-6 and dom_ok
    return _record(records, "gauge.subgrad_fd_dom", {}, worst, passed, 1e-6)


def _suite_monotone(records, grid_steps, seed) -> bool:
    ok = True
    f = sd.Rockafellar(1)
    samp = orc.sample_graph(f, orc.grid2(Fraction(0), Fraction(3), 10))
    rep = orc.monotone_check(samp)
    ok &= _record(records, "monotone.rockafellar", {"pairs": rep.samples_used}, rep.max_violation, rep.passed, rep.tolerance)
    rng = random.Random(seed)
    worst = -orc.INF
    for trial in range(10):
        pts = [tuple(Fraction(rng.randrange(-10, 11), 2) for _ in range(2)) for _ in range(rng.randrange(2, 6))]
        pairs = []
        for _ in range(30):
            x = tuple(Fraction(rng.randrange(-20, 21), 4) for _ in range(2))
            for p in sd.project_finite(pts, x):
                pairs.append((tuple(float(c) for c in x), tuple(float(c) for c in p)))
        rep = orc.monotone_check(sd.MonotoneGraphSample(tuple(pairs)))
        worst = max(worst, rep.max_violation)
    ok &= _record(records, "monotone.project_finite", {"trials": 10}, worst, worst <= orc.TOL_EXACT, orc.TOL_EXACT)
    return ok


def _suite_structure(records, grid_steps, seed) -> bool:
    f = sd.Rockafellar(1)
    worst = 0.0
    ok = True
    probes = [(Fraction(1, 4), Fraction(1, 2)), (1, 0), (Fraction(1, 4), 0), (0, 1), (4, 0), (2, 1)]
    for x in probes:
        try:
            approx = orc.structure_reconstruct(f, x)
        except NCXError:
            ok = False
            continue
        d = orc.hausdorff_subvals(approx, f.subdiff(x), window=1.5)
        worst = max(worst, d)
    passed = ok and worst <= orc.TOL_STRUCT
    return _record(records, "structure.rockafellar", {"probes": len(probes)}, worst, passed, orc.TOL_STRUCT)


SUITES = {
    "rockafellar": _suite_rockafellar,
    "halfstrip": _suite_halfstrip,
    "interval": _suite_interval,
    "gauge": _suite_gauge,
    "monotone": _suite_monotone,
    "structure": _suite_structure,
}


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    records = []
    all_ok = True
    for name in names:
        ok = SUITES[name](records, args.grid, args.seed)
        all_ok &= ok
        print(f"{_status(ok)} suite {name}")
    lines = "".join(jio.canonical_json(r) for r in records)
    if args.out:
        Path(args.out).write_text(lines)
    else:
        sys.stdout.write(lines)
    return 0 if all_ok else 1


# ---------------------------------------------------------------------------
# reproduce targets


def _repro_sec2_sum(artifacts):
    C = worked.strip_vertices_set()
    S = ns.nc_sum(C, C)
    golden = worked.strip_vertices_sum_golden()
    doubled = ns.nc_scale(C, 2)
    checks = {
        "sum_equals_2C_plus_origin": ns.nc_equal(S, golden),
        "sum_differs_from_2C": not ns.nc_equal(S, doubled),
    }
    artifacts["sec2-sum.json"] = jio.pretty_json(
        {"result": jio.ncset_to_json(S), "golden": jio.ncset_to_json(golden), "checks": checks}
    )
    artifacts["sec2-sum.svg"] = render_svg(S, FigureSpec(viewport=(-3, 3, -1, 3)))
    return all(checks.values())


def _repro_sec2_intersect(artifacts):
    E1 = worked.halfplane_slit_set(1)
    E2 = worked.halfplane_slit_set(-1)
    cq_raised = False
    try:
        ns.nc_intersect([E1, E2])
    except CQViolationError:
        cq_raised = True
    raw = ns.raw_intersect([E1, E2])
    cert = ns.is_nearly_convex(raw)
    checks = {
        "cq_violation_raised": cq_raised,
        "intersection_not_nearly_convex": not cert.verdict,
        "witness_is_origin": cert.witness == (Fraction(0), Fraction(0)),
        "intersection_is_two_rays": ns.nc_equal(raw, worked.two_rays_set()),
    }
    artifacts["sec2-intersect.json"] = jio.pretty_json(
        {
            "intersection": jio.ncset_to_json(raw),
            "witness": [jio.qstr(c) for c in cert.witness],
            "checks": checks,
        }
    )
    return all(checks.values())


def _repro_strip_recession(artifacts):
    E = worked.strip_recession_set()
    rep = ns.rec_classify(E)
    golden_rec = pk.hrep(2, eq=[((1, 0), 0)])
    checks = {
        "rec_cl_is_vertical_line": pk.poly_equal(rep.rec_cl, golden_rec),
        "span_condition_false": not rep.span_condition,
        "unbounded": not ns.is_bounded(E),
        "vertical_not_recession_dir": not ns.rec_membership(E, (0, 1)),
    }
    artifacts["strip-recession.json"] = jio.pretty_json(
        {"rec_cl": jio.hrep_to_json(rep.rec_cl), "span_condition": rep.span_condition, "checks": checks}
    )
    artifacts["strip-recession.svg"] = render_svg(E, FigureSpec(viewport=(-2, 2, -3, 3)))
    return all(checks.values())


def _repro_rockafellar(artifacts):
    f = sd.Rockafellar(1)
    dom = f.dom_subdiff()
    golden = worked.rockafellar_dom_golden(1)
    sv = f.subdiff((1, 0))
    conj_probes = {
        "(-1/2,0)": (f.conjugate((Fraction(-1, 2), 0)), Fraction(-1, 2)),
        "(0,1/2)": (f.conjugate((0, Fraction(1, 2))), Fraction(0)),
        "(-1,0)": (f.conjugate((-1, 0)), Fraction(-3, 4)),
        "(1,0)": (f.conjugate((1, 0)), orc.INF),
    }
    checks = {
        "dom_subdiff_exact": ns.nc_equal(dom, golden),
        "apex_subdiff": sd.subval_equal(
            sv, sd.subval(points=[(Fraction(-1, 2), 0), (0, 1), (0, -1)]), 2
        ),
        "conjugate_probes": all(got == want for got, want in conj_probes.values()),
    }
    artifacts["rockafellar.json"] = jio.pretty_json(
        {"dom_subdiff": jio.ncset_to_json(dom), "checks": checks}
    )
    artifacts["rockafellar.svg"] = render_svg(dom, FigureSpec(viewport=(-1, 3, -3, 3)))
    return all(checks.values())


def _repro_halfstrip(artifacts):
    f = sd.HalfStrip(1)
    dom = f.dom_subdiff()
    golden = worked.halfstrip_dom_golden(1)
    sv = f.subdiff((0, 1))
    checks = {
        "dom_subdiff_exact": ns.nc_equal(dom, golden),
        "boundary_subdiff": sd.subval_equal(
            sv, sd.subval(points=[(0, 1)], rays=[(-1, 0)]), 2
        ),
    }
    artifacts["halfstrip.json"] = jio.pretty_json({"dom_subdiff": jio.ncset_to_json(dom), "checks": checks})
    artifacts["halfstrip.svg"] = render_svg(dom, FigureSpec(viewport=(-1, 3, -3, 3)))
    return all(checks.values())


def _repro_ncpolygon(artifacts):
    f, predicted = worked.ncpolygon_assembled()
    golden = worked.ncpolygon_golden()
    checks = {
        "canonical_equality": predicted == golden,
        "semantic_equality": ns.nc_equal(predicted, golden),
        "dom_subdiff_matches": ns.nc_equal(f.dom_subdiff(), golden),
    }
    artifacts["ncpolygon.json"] = jio.pretty_json(
        {"predicted_dom": jio.ncset_to_json(predicted), "checks": checks}
    )
    artifacts["ncpolygon.svg"] = render_svg(predicted, FigureSpec(viewport=(-4, 4, -2, 2)))
    return all(checks.values())


REPRODUCE = {
    "sec2-sum": _repro_sec2_sum,
    "sec2-intersect": _repro_sec2_intersect,
    "strip-recession": _repro_strip_recession,
    "rockafellar": _repro_rockafellar,
    "halfstrip": _repro_halfstrip,
    "ncpolygon": _repro_ncpolygon,
}


def cmd_reproduce(args) -> int:
    targets = list(REPRODUCE) if args.target == "all" else [args.target]
    outdir = Path(args.out or "ncx-out")
    outdir.mkdir(parents=True, exist_ok=True)
    all_ok = True
    for t in targets:
        artifacts = {}
        ok = REPRODUCE[t](artifacts)
        for name, text in artifacts.items():
            (outdir / name).write_text(text)
        all_ok &= ok
        print(f"{_status(ok)} reproduce {t} -> {outdir}")
    return 0 if all_ok else 1


def cmd_plot(args) -> int:
    e = jio.parse_ncset(_load_json(args.infile))
    spec = FigureSpec()
    if args.viewport:
        vals = tuple(float(Fraction(v)) for v in args.viewport.split(","))
        spec = FigureSpec(viewport=vals)
    _emit(render_svg(e, spec), args.out)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ncx", description="nearly convex set toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="near-convexity certificate for a set")
    c.add_argument("--in", dest="infile", required=True)
    c.add_argument("--out")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("calc", help="set calculus: image/preimage/sum/intersect/scale/product/rec")
    c.add_argument("--op", required=True, choices=["image", "preimage", "sum", "intersect", "scale", "product", "rec"])
    c.add_argument("--a", required=True)
    c.add_argument("--b")
    c.add_argument("--more", nargs="*")
    c.add_argument("--map")
    c.add_argument("--scale")
    c.add_argument("--out")
    c.set_defaults(func=cmd_calc)

    c = sub.add_parser("fn", help="evaluate a function spec: value/subdiff/conjugate/domain")
    c.add_argument("--spec", required=True)
    c.add_argument("--at")
    c.add_argument("--conjugate-at", dest="conjugate_at")
    c.add_argument("--dom", action="store_true")
    c.add_argument("--out")
    c.set_defaults(func=cmd_fn)

    c = sub.add_parser("verify", help="run oracle verification suites")
    c.add_argument("--suite", default="all", choices=["all"] + sorted(SUITES))
    c.add_argument("--grid", type=int, default=40)
    c.add_argument("--tol", type=float, default=None, help="reserved; suite tolerances are fixed")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out")
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("reproduce", help="reproduce a bundled worked example")
    c.add_argument("target", choices=["all"] + sorted(REPRODUCE))
    c.add_argument("--out")
    c.set_defaults(func=cmd_reproduce)

    c = sub.add_parser("plot", help="render a set as SVG")
    c.add_argument("--in", dest="infile", required=True)
    c.add_argument("--out")
    c.add_argument("--viewport", help="xmin,xmax,ymin,ymax")
    c.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CQViolationError as exc:
        print(f"CQ_VIOLATED: {exc}", file=sys.stderr)
        return 3
    except (OSError, json.JSONDecodeError, ValueError, KeyError, NCXError) as exc:
        print(f"input error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
