"""Finite unions of relatively open/closed polyhedral pieces: the carrier for
nearly convex sets, the near-convexity decision procedure, and the calculus
of images, preimages, sums, products, intersections, and recession data.

An ``NCSet`` is a finite union of ``HRep`` pieces (each piece's strict rows
are part of its own point set).  The class can represent sets that are not
nearly convex; ``is_nearly_convex`` decides the property exactly and either
certifies it with a convex core or produces a witness point in
ri(conv E) \\ E.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ncx import polykernel as pk
from ncx.errors import CQViolationError, EmptySetError, NotNearlyConvexError
from ncx.polykernel import HRep, LinMap, Q, asvec

ROPoly = HRep


@dataclass(frozen=True)
class NCSet:
    dim: int
    pieces: tuple = ()

    def __post_init__(self):
        for p in self.pieces:
            if p.dim != self.dim:
                raise ValueError("piece dimension mismatch")


@dataclass(frozen=True)
class NearConvexityCertificate:
    verdict: bool
    witness: tuple | None = None
    core: HRep | None = None


@dataclass(frozen=True)
class RecessionReport:
    rec_cl: HRep
    lineality: tuple
    span_condition: bool
    inner_bound: HRep
    membership_answers: dict

    def __eq__(self, other):  # dict field: structural equality is fine
        return isinstance(other, RecessionReport) and (
            self.rec_cl,
            self.lineality,
            self.span_condition,
            self.inner_bound,
            self.membership_answers,
        ) == (other.rec_cl, other.lineality, other.span_condition, other.inner_bound, other.membership_answers)


def ncset(dim: int, pieces) -> NCSet:
    return NCSet(dim, tuple(pieces))


def from_hrep(h: HRep) -> NCSet:
    return NCSet(h.dim, (h,))


def membership(e: NCSet, x) -> bool:
    x = asvec(x)
    return any(pk.contains(p, x) for p in e.pieces)


def _piece_key(p: HRep):
    return (p.dim - len(p.eq), p.eq, p.weak, p.strict)


def _with_row(h: HRep, kind: str, a, b) -> HRep:
    if kind == "eq":
        return HRep(h.dim, h.eq + ((a, b),), h.weak, h.strict)
    if kind == "le":
        return HRep(h.dim, h.eq, h.weak + ((a, b),), h.strict)
    return HRep(h.dim, h.eq, h.weak, h.strict + ((a, b),))


def _neg(a):
    return tuple(-c for c in a)


def _compact_cell(cell: HRep) -> HRep:
    # keep accumulated difference cells irredundant so the elimination
    # kernel never sees long row lists
    if len(cell.eq) + len(cell.weak) + len(cell.strict) > 3 * cell.dim + 4:
        return pk.canonical(cell)
    return cell


def piece_difference(cells, sub: HRep):
    """Refine a list of ROP cells by removing one piece: returns cells whose
    union is (union of cells) minus sub, each a feasible ROP."""
    rows = [("eq", a, b) for a, b in sub.eq]
    rows += [("le", a, b) for a, b in sub.weak]
    rows += [("lt", a, b) for a, b in sub.strict]
    out = []
    for c in cells:
        joint = HRep(c.dim, c.eq + sub.eq, c.weak + sub.weak, c.strict + sub.strict)
        if pk.strict_feasible(joint) is None:
            out.append(c)
            continue
        acc = c
        for kind, a, b in rows:
            if kind == "eq":
                negs = [("lt", a, b), ("lt", _neg(a), -b)]
            elif kind == "le":
                negs = [("lt", _neg(a), -b)]
            else:
                negs = [("le", _neg(a), -b)]
            for nk, na, nb in negs:
                cell = _with_row(acc, nk, na, nb)
                if pk.strict_feasible(cell) is not None:
                    out.append(_compact_cell(cell))
            acc = _with_row(acc, kind, a, b)
            if pk.strict_feasible(acc) is None:
                break
        # when the loop completes, acc == c ∩ sub: covered, not in the difference
    return out


def difference_cells(e_pieces, subtract_pieces):
    cells = list(e_pieces)
    for s in subtract_pieces:
        if not cells:
            break
        cells = piece_difference(cells, s)
    return cells


def _ray_in_recession(cl: HRep, r) -> bool:
    for a, b in cl.eq:
        if sum(a[i] * r[i] for i in range(len(r))) != 0:
            return False
    for a, b in cl.weak:
        if sum(a[i] * r[i] for i in range(len(r))) > 0:
            return False
    return True


def piece_subset(S: HRep, P: HRep) -> bool:
    """Exact test S ⊆ P for canonical pieces, by generators: each included
    relatively open face of S must have its closure generators in cl P and
    its representative point in P (sufficient by the accessibility lemma,
    necessary trivially).  Row evaluations only; no elimination."""
    clP = pk.closure_hrep(P)
    for g in _included_open_faces(S):
        v = pk.dd_convert(g)
        for pt in v.points:
            if not pk.contains(clP, pt):
                return False
        for r in v.rays:
            if not _ray_in_recession(clP, r):
                return False
        for l in v.lineality:
            if not _ray_in_recession(clP, l) or not _ray_in_recession(clP, tuple(-c for c in l)):
                return False
        if not pk.contains(P, _relint_rep(v)):
            return False
    return True


def nc_equal(e1: NCSet, e2: NCSet) -> bool:
    """Exact point-set equality of two unions."""
    if e1.dim != e2.dim:
        raise ValueError("dimension mismatch")
    p1 = [p for p in canonicalize(e1).pieces]
    p2 = [p for p in canonicalize(e2).pieces]
    if difference_cells(p1, p2):
        return False
    if difference_cells(p2, p1):
        return False
    return True


@lru_cache(maxsize=None)
def canonicalize(e: NCSet) -> NCSet:
    """Equal point set; no piece covered by the union of the others; pieces
    canonical and deterministically ordered."""
    pcs = []
    seen = set()
    for p in e.pieces:
        c = pk.canonical(p)
        if c == pk.empty_hrep(e.dim):
            continue
        if c not in seen:
            seen.add(c)
            pcs.append(c)
    # absorption: try to drop small pieces first; cheap single-piece
    # containment and a representative-point filter handle the common cases
    # before the exact union-coverage decomposition
    pcs.sort(key=_piece_key)
    kept = list(pcs)
    for p in list(pcs):
        others = [q for q in kept if q is not p]
        if not others:
            continue
        if any(piece_subset(p, q) for q in others):
            kept = others
            continue
        if len(others) > 1:
            probes = [_relint_rep(pk.dd_convert(g)) for g in _included_open_faces(p)]
            if not all(any(pk.contains(q, x) for q in others) for x in probes):
                continue
            if not difference_cells([p], sorted(others, key=_piece_key, reverse=True)):
                kept = others
    kept.sort(key=_piece_key, reverse=True)
    return NCSet(e.dim, tuple(kept))


@lru_cache(maxsize=None)
def closure(e: NCSet) -> HRep:
    """Closed convex hull of the union (for a nearly convex set this is its
    closure; defined for any union as the hull of the piece closures)."""
    pts = set()
    rays = set()
    lin = set()
    any_piece = False
    for p in canonicalize(e).pieces:
        v = pk.dd_convert(pk.closure_hrep(p))
        if v.is_empty:
            continue
        any_piece = True
        pts.update(v.points)
        rays.update(v.rays)
        lin.update(v.lineality)
    if not any_piece:
        return pk.empty_hrep(e.dim)
    hull = pk.VRep(e.dim, tuple(sorted(pts)), tuple(sorted(rays)), tuple(sorted(lin)))
    return pk.vrep_to_hrep(hull)


@lru_cache(maxsize=None)
def is_nearly_convex(e: NCSet) -> NearConvexityCertificate:
    """Exact decision of ri(conv E) ⊆ E by cell decomposition: the relative
    interior of the hull is refined against the pieces; any surviving cell
    yields a witness in ri(conv E) \\ E."""
    ce = canonicalize(e)
    if not ce.pieces:
        return NearConvexityCertificate(True, None, pk.empty_hrep(e.dim))
    hull = closure(e)
    core = pk.rel_interior_hrep(hull)
    cells = difference_cells([core], ce.pieces)
    if not cells:
        return NearConvexityCertificate(True, None, core)
    witness = pk.strict_feasible(cells[0])
    assert witness is not None
    return NearConvexityCertificate(False, witness, None)


def _require_nearly_convex(e: NCSet):
    cert = is_nearly_convex(e)
    if not cert.verdict:
        raise NotNearlyConvexError(f"set is not nearly convex; witness {cert.witness}")
    return cert


def rel_interior(e: NCSet) -> HRep:
    """ri E as a relatively open piece; requires near convexity."""
    _require_nearly_convex(e)
    hull = closure(e)
    if hull == pk.empty_hrep(e.dim):
        raise EmptySetError("relative interior of the empty set")
    return pk.rel_interior_hrep(hull)


def nearly_equal(e1: NCSet, e2: NCSet) -> bool:
    """E1 ≈ E2 for nearly convex operands: equal closures (equivalently equal
    relative interiors)."""
    _require_nearly_convex(e1)
    _require_nearly_convex(e2)
    return pk.poly_equal(closure(e1), closure(e2))


def decompose(e: NCSet):
    """Split a nearly convex set into its convex core ri E and the leftover
    boundary part S ⊆ cl E \\ ri E, emitted as relatively open strata; the
    union of core and boundary reconstructs E."""
    core = rel_interior(e)
    cells = difference_cells(list(canonicalize(e).pieces), [core])
    strata = []
    for c in cells:
        cc = pk.canonical(c)
        for g in _included_open_faces(cc):
            strata.append(pk.rel_interior_hrep(g))
    return core, canonicalize(NCSet(e.dim, tuple(strata)))


def interior_core(e: NCSet) -> HRep:
    """Interior (= core) of a nearly convex set: the all-strict piece when the
    closure is full-dimensional, the canonical empty piece otherwise."""
    _require_nearly_convex(e)
    hull = closure(e)
    if hull == pk.empty_hrep(e.dim):
        return pk.empty_hrep(e.dim)
    d, _ = pk.affine_hull(hull)
    if d < e.dim:
        return pk.empty_hrep(e.dim)
    return pk.rel_interior_hrep(hull)


# ---------------------------------------------------------------------------
# calculus


def nc_scale(e: NCSet, lam) -> NCSet:
    lam = Q(lam)
    ce = canonicalize(e)
    if lam == 0:
        if not ce.pieces:
            return ce
        origin = HRep(e.dim, tuple(((tuple(Fraction(1 if j == i else 0) for j in range(e.dim))), Fraction(0)) for i in range(e.dim)), (), ())
        return canonicalize(NCSet(e.dim, (origin,)))
    pieces = []
    for p in ce.pieces:
        def scale_rows(rows):
            if lam > 0:
                return tuple((a, lam * b) for a, b in rows)
            return tuple((_neg(a), -lam * b) for a, b in rows)
        pieces.append(HRep(e.dim, scale_rows(p.eq), scale_rows(p.weak), scale_rows(p.strict)))
    return canonicalize(NCSet(e.dim, tuple(pieces)))


def nc_product(*es: NCSet) -> NCSet:
    """Cartesian product of finitely many sets."""
    if not es:
        raise ValueError("need at least one operand")
    dim = sum(e.dim for e in es)
    combos = [()]
    offs = []
    off = 0
    for e in es:
        offs.append(off)
        off += e.dim
    for e in es:
        combos = [c + (p,) for c in combos for p in canonicalize(e).pieces]
    pieces = []
    for combo in combos:
        eq, weak, strict = [], [], []
        for k, p in enumerate(combo):
            pad_l = offs[k]
            pad_r = dim - offs[k] - p.dim
            def pad(rows, out):
                for a, b in rows:
                    out.append(((Fraction(0),) * pad_l + tuple(a) + (Fraction(0),) * pad_r, b))
            pad(p.eq, eq)
            pad(p.weak, weak)
            pad(p.strict, strict)
        pieces.append(HRep(dim, tuple(eq), tuple(weak), tuple(strict)))
    return canonicalize(NCSet(dim, tuple(pieces)))


@lru_cache(maxsize=None)
def _included_open_faces(piece: HRep):
    """Closed faces G of cl(piece) (including cl(piece) itself) whose relative
    interiors are contained in the piece.  The piece is the disjoint union of
    those relative interiors."""
    cl = pk.closure_hrep(piece)
    cands = [cl] + list(pk.faces(cl))
    out = []
    for g in cands:
        rep = pk.relint_point(g)
        if pk.contains(piece, rep):
            out.append(g)
    return tuple(out)


def _ri_of_hull_of(vreps) -> HRep:
    pts, rays, lin = set(), set(), set()
    for v in vreps:
        pts.update(v.points)
        rays.update(v.rays)
        lin.update(v.lineality)
    hull = pk.vrep_to_hrep(pk.VRep(vreps[0].dim, tuple(sorted(pts)), tuple(sorted(rays)), tuple(sorted(lin))))
    return pk.rel_interior_hrep(hull)


def nc_sum(e1: NCSet, e2: NCSet) -> NCSet:
    """Exact Minkowski sum.  Mixed-openness pieces are decomposed into their
    included relatively open faces; ri G1 + ri G2 = ri(G1 + G2) makes each
    face pair a single relatively open piece of the sum."""
    if e1.dim != e2.dim:
        raise ValueError("dimension mismatch")
    dim = e1.dim
    pieces = []
    seen_gens = set()
    for p in canonicalize(e1).pieces:
        clp = pk.closure_hrep(p)
        for q in canonicalize(e2).pieces:
            clq = pk.closure_hrep(q)
            top_hull = pk.vrep_to_hrep(_raw_minkowski(pk.dd_convert(clp), pk.dd_convert(clq)))
            if p.closed and q.closed:
                pieces.append(top_hull)
                continue
            # every nonempty piece contains its relative interior, so the
            # top pair ri(cl p) + ri(cl q) = ri(cl p + cl q) always appears
            top = pk.rel_interior_hrep(top_hull)
            pieces.append(top)
            for g1 in _included_open_faces(p):
                v1 = pk.dd_convert(g1)
                rp1 = _relint_rep(v1)
                for g2 in _included_open_faces(q):
                    if g1 == clp and g2 == clq:
                        continue
                    v2 = pk.dd_convert(g2)
                    rp2 = _relint_rep(v2)
                    rep = tuple(rp1[i] + rp2[i] for i in range(dim))
                    # ri G1 + ri G2 is a relatively open subset of cl(top);
                    # if its representative lands in the top piece the whole
                    # face sum is absorbed (accessibility lemma)
                    if pk.contains(top, rep):
                        continue
                    pts = tuple(
                        sorted(
                            {
                                tuple(a[i] + b[i] for i in range(dim))
                                for a in v1.points
                                for b in v2.points
                            }
                        )
                    )
                    rays = tuple(sorted(set(v1.rays) | set(v2.rays)))
                    lin = tuple(sorted(set(v1.lineality) | set(v2.lineality)))
                    key = (pts, rays, lin)
                    if key in seen_gens:
                        continue
                    seen_gens.add(key)
                    hull = pk.vrep_to_hrep(pk.VRep(dim, pts, rays, lin))
                    pieces.append(pk.rel_interior_hrep(hull))
    return canonicalize(NCSet(dim, tuple(pieces)))


def _relint_rep(v: pk.VRep):
    """Exact relative-interior point of conv(points)+cone(rays)+span(lin)."""
    n = len(v.points)
    dim = v.dim
    rep = [sum(p[i] for p in v.points) / n for i in range(dim)]
    for r in v.rays:
        for i in range(dim):
            rep[i] += r[i]
    return tuple(rep)


def _raw_minkowski(v1: pk.VRep, v2: pk.VRep) -> pk.VRep:
    dim = v1.dim
    pts = tuple(
        sorted({tuple(a[i] + b[i] for i in range(dim)) for a in v1.points for b in v2.points})
    )
    rays = tuple(sorted(set(v1.rays) | set(v2.rays)))
    lin = tuple(sorted(set(v1.lineality) | set(v2.lineality)))
    return pk.VRep(dim, pts, rays, lin)


def nc_image(e: NCSet, A: LinMap) -> NCSet:
    """Image under an exact linear/affine map, piece by piece; relatively open
    faces map by A(ri G) = ri(A G)."""
    pieces = []
    for p in canonicalize(e).pieces:
        clp = pk.closure_hrep(p)
        top_hull = pk.vrep_to_hrep(pk.linear_image(pk.dd_convert(clp), A))
        if p.closed:
            pieces.append(top_hull)
            continue
        top = pk.rel_interior_hrep(top_hull)
        pieces.append(top)
        for g in _included_open_faces(p):
            if g == clp:
                continue
            v = pk.dd_convert(g)
            rep = A.apply(_relint_rep(v))
            if pk.contains(top, rep):
                continue
            img = pk.linear_image(v, A)
            pieces.append(pk.rel_interior_hrep(pk.vrep_to_hrep(img)))
    return canonicalize(NCSet(A.m, tuple(pieces)))


def nc_preimage(e: NCSet, A: LinMap) -> NCSet:
    """Preimage under an exact map; requires the constraint qualification
    A^{-1}(ri E) nonempty, checked by exact feasibility of the pulled-back
    relative-interior system."""
    ri = rel_interior(e)
    pulled = pk.preimage(ri, A)
    if pk.strict_feasible(pulled) is None:
        raise CQViolationError("A^{-1}(ri E) is empty")
    pieces = [pk.preimage(p, A) for p in canonicalize(e).pieces]
    return canonicalize(NCSet(A.n, tuple(pieces)))


def raw_intersect(es) -> NCSet:
    """Piecewise intersection with no constraint qualification: the exact
    point set ⋂ Eᵢ (which may fail to be nearly convex)."""
    es = list(es)
    dim = es[0].dim
    combos = [HRep(dim)]
    for e in es:
        combos = [
            HRep(dim, c.eq + p.eq, c.weak + p.weak, c.strict + p.strict)
            for c in combos
            for p in canonicalize(e).pieces
        ]
        combos = [c for c in combos if pk.strict_feasible(c) is not None]
    return canonicalize(NCSet(dim, tuple(combos)))


def nc_intersect(es) -> NCSet:
    """Intersection of nearly convex sets under the CQ ⋂ ri Eᵢ ≠ ∅."""
    es = list(es)
    if not es:
        raise ValueError("need at least one operand")
    dim = es[0].dim
    ri_rows_eq, ri_rows_weak, ri_rows_strict = [], [], []
    for e in es:
        ri = rel_interior(e)
        ri_rows_eq += list(ri.eq)
        ri_rows_weak += list(ri.weak)
        ri_rows_strict += list(ri.strict)
    cq = HRep(dim, tuple(ri_rows_eq), tuple(ri_rows_weak), tuple(ri_rows_strict))
    if pk.strict_feasible(cq) is None:
        raise CQViolationError("⋂ ri Eᵢ is empty")
    return raw_intersect(es)


# ---------------------------------------------------------------------------
# recession


def is_bounded(e: NCSet) -> bool:
    """Boundedness of a nearly convex set: rec(cl E) = {0}."""
    _require_nearly_convex(e)
    hull = closure(e)
    if hull == pk.empty_hrep(e.dim):
        return True
    rec = pk.recession(hull)
    rays, lin = pk.cone_generators(rec)
    return not rays and not lin


def rec_membership(e: NCSet, y) -> bool:
    """Exact test of λy + E ⊆ E for every λ ≥ 0, decided by lifting λ to a
    coordinate: for each piece Q the set {(λ,x): λ ≥ 0, x ∈ λy + Q, x ∉ E}
    is refined to cells; y is a recession direction iff all cells vanish."""
    y = asvec(y)
    n = e.dim
    ce = canonicalize(e)
    if not ce.pieces:
        return True
    if not any(y):
        return True
    zero = Fraction(0)
    lam_row = ((zero,) * n + (Fraction(-1),), zero)

    def lift_translated(p: HRep) -> HRep:
        def rows(rs):
            return tuple((tuple(a) + (-sum(a[i] * y[i] for i in range(n)),), b) for a, b in rs)
        return HRep(n + 1, rows(p.eq), rows(p.weak) + (lam_row,), rows(p.strict))

    def lift_static(p: HRep) -> HRep:
        def rows(rs):
            return tuple((tuple(a) + (zero,), b) for a, b in rs)
        return HRep(n + 1, rows(p.eq), rows(p.weak), rows(p.strict))

    statics = [lift_static(p) for p in ce.pieces]
    for p in ce.pieces:
        cells = difference_cells([lift_translated(p)], statics)
        if cells:
            return False
    return True


def rec_classify(e: NCSet) -> RecessionReport:
    """Recession data of a nearly convex set: rec(cl E), its lineality, the
    span condition span[rec(cl E)] = span(cl E - cl E), the inner bound
    ri[rec(cl E)], and exact membership answers for the probe directions."""
    _require_nearly_convex(e)
    hull = closure(e)
    if hull == pk.empty_hrep(e.dim):
        raise EmptySetError("recession classification of the empty set")
    rec_cl = pk.recession(hull)
    lin = pk.lineality_basis(rec_cl)
    rays, rlin = pk.cone_generators(rec_cl)
    v = pk.dd_convert(hull)
    p0 = v.points[0]
    dirs = [tuple(p[i] - p0[i] for i in range(e.dim)) for p in v.points[1:]]
    dirs += list(v.rays) + list(v.lineality)
    span_rec = list(rays) + list(rlin)
    from ncx import kernel

    ra = kernel.rank_int([tuple(x) for x in span_rec], e.dim) if span_rec else 0
    rb = kernel.rank_int([tuple(x) for x in dirs], e.dim) if dirs else 0
    rc = kernel.rank_int([tuple(x) for x in span_rec + dirs], e.dim) if (span_rec or dirs) else 0
    span_condition = ra == rb == rc
    inner = pk.rel_interior_hrep(rec_cl)
    zero = (Fraction(0),) * e.dim
    rbar = zero
    for r in rays:
        rbar = tuple(rbar[i] + r[i] for i in range(e.dim))
    probes = {rbar}
    for r in rays:
        probes.add(tuple(r))
    for l in rlin:
        probes.add(tuple(l))
        probes.add(_neg(l))
        probes.add(tuple(rbar[i] + l[i] for i in range(e.dim)))
        probes.add(tuple(rbar[i] - l[i] for i in range(e.dim)))
    answers = {}
    for d in sorted(probes):
        answers[d] = rec_membership(e, d)
    if span_condition:
        for d, ok in answers.items():
            if pk.contains(inner, d):
                assert ok, f"inner-bound direction {d} rejected despite span condition"
    return RecessionReport(rec_cl, lin, span_condition, inner, answers)


def closedness_check(e: NCSet, A: LinMap) -> bool:
    """Hypothesis check for closedness of the image: every nonzero direction
    of rec(cl E) killed by A must lie in the lineality space of cl E.  When
    the hypothesis holds, cl(AE) = A(cl E) and rec A(cl E) = A[rec(cl E)] are
    verified exactly."""
    _require_nearly_convex(e)
    hull = closure(e)
    if hull == pk.empty_hrep(e.dim):
        raise EmptySetError("closedness check of the empty set")
    rec_cl = pk.recession(hull)
    zero = Fraction(0)
    ker_rows = tuple((tuple(A.matrix[i]), zero) for i in range(A.m))
    K = HRep(e.dim, rec_cl.eq + ker_rows, rec_cl.weak, ())
    krays, klin = pk.cone_generators(K)
    lin_space = pk.lineality_basis(hull)
    from ncx import kernel

    base_rank = kernel.rank_int([tuple(x) for x in lin_space], e.dim) if lin_space else 0
    hypothesis = True
    for g in list(krays) + list(klin):
        rows = [tuple(x) for x in lin_space] + [tuple(g)]
        if kernel.rank_int(rows, e.dim) != base_rank:
            hypothesis = False
            break
    if hypothesis:
        lin_part = LinMap(A.matrix)
        left = closure(nc_image(e, A))
        right = pk.vrep_to_hrep(pk.linear_image(pk.dd_convert(hull), A))
        assert pk.poly_equal(left, right), "cl(AE) = A(cl E) failed under the hypothesis"
        rec_img = pk.recession(right)
        img_rec = pk.vrep_to_hrep(pk.linear_image(pk.dd_convert(rec_cl), lin_part))
        assert pk.poly_equal(rec_img, img_rec), "rec A(cl E) = A[rec(cl E)] failed"
    return hypothesis
