"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Tolerances are pinned here exactly as stated: 1e-9 for subgradient and
monotonicity checks, 1e-5 for conjugate cross-checks, 1e-3 Hausdorff for
structure reconstruction, exact equality everywhere else.  Run with
``pytest tests/test_acceptance.py -s`` to see the per-criterion lines.
"""

import math
import random
import time
from fractions import Fraction

import pytest

import genpoly
from ncx import ncset as ns
from ncx import oracle as orc
from ncx import polykernel as pk
from ncx import subdiff as sd
from ncx import worked
from ncx.errors import CQViolationError, NotInDomainError

F = Fraction
ALPHAS = (F(1, 2), F(1), F(2))


def _report(num, ok, detail=""):
    print(f"\n[criterion {num}] {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, f"criterion {num}: {detail}"


# ---------------------------------------------------------------------------


def test_criterion_1_ncpolygon():
    """Assembled polygon domain equals the golden set in canonical form."""
    t0 = time.time()
    f, predicted = worked.ncpolygon_assembled()
    golden = worked.ncpolygon_golden()
    exact = predicted == golden
    semantic = ns.nc_equal(predicted, golden)
    dom_ok = ns.nc_equal(f.dom_subdiff(), golden)
    dt = time.time() - t0
    ok = exact and semantic and dom_ok and dt < 10.0
    _report(1, ok, f"canonical={exact} semantic={semantic} dom={dom_ok} time={dt:.2f}s (<10s)")


def _case_points(alpha):
    """Rational probe points for the 13 rows of the subdifferential table.
    The apex row is a single point per alpha; all other rows get three."""
    a = alpha
    rs = (a / 4, a / 2, 3 * a / 4)
    return {
        "empty_left": [(-1, 0), (-a, a), (F(-1, 7), -a)],
        "empty_slit": [(0, 0), (0, a / 2), (0, -a / 2)],
        "axis_up": [(0, a), (0, a + 1), (0, 2 * a + 3)],
        "axis_down": [(0, -a), (0, -a - 1), (0, -2 * a - 3)],
        "curve_up": [(r * r, a - r) for r in rs],
        "curve_down": [(r * r, -(a - r)) for r in rs],
        "smooth_sqrt": [(r * r, 0) for r in rs] + [(r * r, (a - r) / 2) for r in rs],
        "flat_up": [(rs[1] ** 2, a), (rs[2] ** 2, a + 1), (a * a / 16, a)],
        "flat_down": [(rs[1] ** 2, -a), (rs[2] ** 2, -a - 1), (a * a / 16, -a)],
        "apex": [(a * a, 0)],
        "ridge": [(a * a + 1, 0), (2 * a * a, 0), (a * a + F(1, 3), 0)],
        "right_up": [(a * a + 1, 1), (2 * a * a, a), (a * a + F(1, 3), F(1, 9))],
        "right_down": [(a * a + 1, -1), (2 * a * a, -a), (a * a + F(1, 3), F(-1, 9))],
    }


def test_criterion_2_rockafellar_cases():
    """Every case row probed at rational points passes subgrad_check at
    1e-9; dom ∂f and ran ∂f match their closed forms exactly."""
    t0 = time.time()
    worst = 0.0
    checks = 0
    ok = True
    for alpha in ALPHAS:
        f = sd.Rockafellar(alpha)
        a = float(alpha)
        grid = orc.Grid(((-1.0, 2 * a * a + 2.0, 40), (-(a + 2.0), a + 2.0, 40)), 0)
        gen_pts = set()
        gen_rays = set()
        for case, pts in _case_points(alpha).items():
            for x in pts:
                sv = f.subdiff(x)
                if case.startswith("empty"):
                    ok &= sv.empty
                    continue
                ok &= not sv.empty
                gen_pts.update(tuple(F(c) for c in p) for p in sv.points)
                gen_rays.update(tuple(F(c) for c in r) for r in sv.rays)
                cands = list(sv.points)
                for r in sv.rays:
                    base = sv.points[0]
                    cands.append(tuple(F(base[i]) + F(r[i]) for i in range(2)))
                for u in cands:
                    rep = orc.subgrad_check(f, x, u, grid)
                    worst = max(worst, rep.max_violation)
                    checks += 1
        ok &= worst <= 1e-9
        dom_ok = ns.nc_equal(f.dom_subdiff(), worked.rockafellar_dom_golden(alpha))
        ran = pk.vrep_to_hrep(
            pk.VRep(2, tuple(sorted(gen_pts)), tuple(sorted(gen_rays)), ())
        )
        ran_ok = pk.poly_equal(ran, f.range_hrep())
        ok &= dom_ok and ran_ok
    dt = time.time() - t0
    ok &= dt < 60.0
    _report(2, ok, f"subgrad checks={checks} worst={worst:.2e} (tol 1e-9) dom+ran exact, time={dt:.1f}s (<60s)")


def test_criterion_3_conjugate_crosscheck():
    """conjugate_eval vs grid oracle within 1e-5 at 500 interior samples per
    alpha; +inf certified at 50 outside points per alpha."""
    t0 = time.time()
    rng = random.Random(2024)
    worst = 0.0
    inf_ok = True
    for alpha in ALPHAS:
        f = sd.Rockafellar(alpha)
        a = float(alpha)
        grid = orc.Grid(((0.0, a * a + 1.0, 96), (-(a + 1.0), a + 1.0, 96)), refinement=3)
        for _ in range(500):
            x1 = -F(rng.randrange(0, 351), 100)
            x2 = F(rng.randrange(-100, 101), 100)
            got = orc.conj_oracle(f, (x1, x2), grid)
            want = float(f.conjugate((x1, x2)))
            worst = max(worst, abs(got - want))
        for _ in range(50):
            if rng.random() < 0.5:
                x1 = F(rng.randrange(1, 200), 100)
                x2 = F(rng.randrange(-100, 101), 100)
            else:
                x1 = -F(rng.randrange(0, 200), 100)
                x2 = F(rng.choice([-1, 1])) * F(rng.randrange(101, 300), 100)
            inf_ok &= orc.conj_oracle(f, (x1, x2), grid) == math.inf
            inf_ok &= f.conjugate((x1, x2)) == math.inf
    dt = time.time() - t0
    ok = worst <= 1e-5 and inf_ok and dt < 120.0
    _report(3, ok, f"1500 interior worst={worst:.2e} (tol 1e-5), 150 divergence certificates={inf_ok}, time={dt:.1f}s (<120s)")


def test_criterion_4_sum_and_intersection_counterexamples():
    C = worked.strip_vertices_set()
    S = ns.nc_sum(C, C)
    doubled = ns.nc_scale(C, 2)
    sum_ok = ns.nc_equal(S, worked.strip_vertices_sum_golden()) and not ns.nc_equal(S, doubled)
    E1 = worked.halfplane_slit_set(1)
    E2 = worked.halfplane_slit_set(-1)
    cq_raised = False
    try:
        ns.nc_intersect([E1, E2])
    except CQViolationError:
        cq_raised = True
    raw = ns.raw_intersect([E1, E2])
    cert = ns.is_nearly_convex(raw)
    witness_ok = (
        not cert.verdict
        and cert.witness is not None
        and not ns.membership(raw, cert.witness)
        and pk.contains(pk.rel_interior_hrep(ns.closure(raw)), cert.witness)
    )
    ok = sum_ok and cq_raised and witness_ok
    _report(4, ok, f"C+C=2C∪{{0}}≠2C: {sum_ok}; CQ_VIOLATED: {cq_raised}; witness valid: {witness_ok}")


def test_criterion_5_recession_suite():
    t0 = time.time()
    E = worked.strip_recession_set()
    rep = ns.rec_classify(E)
    strip_ok = (
        pk.poly_equal(rep.rec_cl, pk.hrep(2, eq=[((1, 0), 0)]))
        and not ns.rec_membership(E, (0, 1))
        and not ns.is_bounded(E)
        and not rep.span_condition
    )
    P = worked.halfplane_origin_set()
    repP = ns.rec_classify(P)
    inner_dirs = [(1, 0), (1, 1), (1, -1), (2, 1), (3, -2)]
    analog_ok = repP.span_condition and all(ns.rec_membership(P, d) for d in inner_dirs)
    dt = time.time() - t0
    ok = strip_ok and analog_ok and dt < 5.0
    _report(5, ok, f"strip={strip_ok} analog={analog_ok} time={dt:.2f}s (<5s)")


def test_criterion_6_calculus_property_suite():
    """Exact identities on >= 200 random nearly convex instances."""
    t0 = time.time()
    rng = random.Random(60)
    n_inst = 0
    failures = 0
    while n_inst < 200:
        dim = rng.choice([1, 2, 2, 2, 3])
        e = genpoly.random_nearly_convex(rng, dim)
        n_inst += 1
        A = genpoly.random_map(rng, dim, rng.choice([1, dim]))
        img = ns.nc_image(e, A)
        rhs = pk.rel_interior_hrep(
            pk.vrep_to_hrep(pk.linear_image(pk.dd_convert(ns.closure(e)), A))
        )
        if not pk.poly_equal(ns.rel_interior(img), rhs):
            failures += 1
        e2 = genpoly.random_nearly_convex(rng, dim)
        s = ns.nc_sum(e, e2)
        rhs = pk.rel_interior_hrep(
            pk.vrep_to_hrep(
                pk.minkowski_sum(pk.dd_convert(ns.closure(e)), pk.dd_convert(ns.closure(e2)))
            )
        )
        if not pk.poly_equal(ns.rel_interior(s), rhs):
            failures += 1
        # intersection under a constructed CQ
        anchor = genpoly.random_point(rng, dim, span=2)
        g1 = genpoly.random_nearly_convex_at(rng, dim, anchor)
        g2 = genpoly.random_nearly_convex_at(rng, dim, anchor)
        inter = ns.nc_intersect([g1, g2])
        r1, r2 = ns.rel_interior(g1), ns.rel_interior(g2)
        lhs = pk.canonical(pk.HRep(dim, r1.eq + r2.eq, r1.weak + r2.weak, r1.strict + r2.strict))
        if not pk.poly_equal(lhs, ns.rel_interior(inter)):
            failures += 1
        c1, c2 = ns.closure(g1), ns.closure(g2)
        lhs = pk.canonical(pk.HRep(dim, c1.eq + c2.eq, c1.weak + c2.weak, ()))
        if not pk.poly_equal(lhs, ns.closure(inter)):
            failures += 1
        # preimage identity whenever the CQ holds
        B = genpoly.random_map(rng, rng.choice([1, 2, dim]), dim)
        try:
            pre = ns.nc_preimage(e, B)
            if not pk.poly_equal(ns.closure(pre), pk.preimage(ns.closure(e), B)):
                failures += 1
        except CQViolationError:
            pass
    dt = time.time() - t0
    ok = failures == 0 and n_inst >= 200
    _report(6, ok, f"instances={n_inst} failures={failures} time={dt:.1f}s")


def test_criterion_7_segment_principle():
    t0 = time.time()
    rng = random.Random(7)
    pairs = 0
    failures = 0
    while pairs < 1000:
        dim = rng.choice([1, 2, 2, 3])
        e = genpoly.random_nearly_convex(rng, dim)
        ri = ns.rel_interior(e)
        x = pk.strict_feasible(ri)
        v = pk.dd_convert(ns.closure(e))
        for y in v.points:
            mid = tuple((x[i] + y[i]) / 2 for i in range(dim))
            pairs += 1
            if not pk.contains(ri, mid):
                failures += 1
    dt = time.time() - t0
    _report(7, failures == 0, f"pairs={pairs} failures={failures} time={dt:.1f}s")


def test_criterion_8_monotonicity():
    t0 = time.time()
    worst = math.inf
    results = []

    def check(name, sample):
        nonlocal worst
        rep = orc.monotone_check(sample)
        worst = min(worst, -rep.max_violation)
        results.append((name, rep.passed))
        return rep.passed

    box2 = orc.grid2(F(0), F(3), 8)
    sym2 = orc.Grid(((F(-2), F(2), 8), (F(-2), F(2), 8)), 0)
    for alpha in ALPHAS:
        check(f"rockafellar({alpha})", orc.sample_graph(sd.Rockafellar(alpha), box2))
    check("halfstrip(1)", orc.sample_graph(sd.HalfStrip(1), box2))
    check("halfstrip(0,-1)", orc.sample_graph(sd.HalfStrip(0, -1), box2))
    C = pk.hrep(2, strict=[((1, 0), 1), ((-1, 0), 1), ((0, 1), 1), ((0, -1), 1)])
    gauge_grid = orc.Grid(((F(-3, 4), F(3, 4), 6), (F(-3, 4), F(3, 4), 6)), 0)
    check("gauge", orc.sample_graph(sd.make_gauge_recip(C, (0, 0)), gauge_grid))
    grid1 = orc.Grid(((F(1, 10), F(9, 10), 8),), 0)
    for kind in ("closed", "open", "halfopen"):
        check(f"interval-{kind}", orc.sample_graph(sd.make_interval_fn(kind, 0, 1), grid1))
    check("interval-ray", orc.sample_graph(sd.make_interval_fn("ray", a=0), orc.Grid(((F(1, 2), F(4), 8),), 0)))
    sq = pk.hrep(2, weak=[((1, 0), 1), ((-1, 0), 0), ((0, 1), 1), ((0, -1), 0)])
    check("indicator", orc.sample_graph(sd.Indicator(sq), box2))
    check("support", orc.sample_graph(sd.SupportFn(sq), sym2))
    f3 = sd.precompose(sd.Rockafellar(1), 0, 1, translation=(0, 1))
    check("precomposed", orc.sample_graph(f3, sym2))
    # sums under valid CQ (dom ∂ of the indicator sum is the segment {1}x[0,1],
    # so its grid must hit x1 = 1)
    i2 = sd.Indicator(pk.hrep(2, weak=[((1, 0), 2), ((-1, 0), -1), ((0, 1), 1), ((0, -1), 0)]))
    seg_grid = orc.Grid(((F(0), F(2), 8), (F(0), F(1), 4)), 0)
    check("sum-indicators", orc.sample_graph(sd.sum_fn([sd.Indicator(sq), i2]), seg_grid))
    check("sum-rockafellar-box", orc.sample_graph(sd.sum_fn([sd.Rockafellar(1), sd.Indicator(sq)]), box2))
    check("assembled-polygon", orc.sample_graph(worked.ncpolygon_assembled()[0], sym2))
    # projections onto 50 random finite sets
    rng = random.Random(88)
    proj_ok = True
    for _ in range(50):
        pts = [tuple(F(rng.randrange(-8, 9), 2) for _ in range(2)) for _ in range(rng.randrange(2, 7))]
        pairs = []
        for _ in range(40):
            x = tuple(F(rng.randrange(-30, 31), 4) for _ in range(2))
            for p in sd.project_finite(pts, x):
                pairs.append((tuple(float(c) for c in x), tuple(float(c) for c in p)))
        rep = orc.monotone_check(sd.MonotoneGraphSample(tuple(pairs)))
        worst = min(worst, -rep.max_violation)
        proj_ok &= rep.passed
    ok = all(p for _, p in results) and proj_ok
    dt = time.time() - t0
    _report(8, ok, f"catalog graphs={len(results)} projections=50 min pairing={worst:.2e} (tol -1e-9) time={dt:.1f}s")


def test_criterion_9_structure_reconstruction():
    t0 = time.time()
    f = sd.Rockafellar(1)
    worst = 0.0
    ok = True
    empty_cases = 0
    probed = 0
    for case, pts in _case_points(F(1)).items():
        x = pts[0]
        if case.startswith("empty"):
            with pytest.raises(NotInDomainError):
                orc.structure_reconstruct(f, x)
            empty_cases += 1
            continue
        approx = orc.structure_reconstruct(f, x)
        d = orc.hausdorff_subvals(approx, f.subdiff(x), window=1.0)
        worst = max(worst, d)
        probed += 1
    ok &= worst <= 1e-3 and empty_cases == 2 and probed == 11
    dt = time.time() - t0
    _report(9, ok, f"cases probed={probed}+{empty_cases} empty, worst Hausdorff={worst:.2e} (tol 1e-3) time={dt:.1f}s")
