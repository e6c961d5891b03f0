"""Exact rational polyhedra: H- and V-representations, conversions,
feasibility, canonical forms, and elementary operations.

Conventions
-----------
* Scalars are ``fractions.Fraction`` (ints accepted, floats rejected: this
  module never rounds).
* A row is ``(coeffs, rhs)`` and means ``<coeffs, x> REL rhs``.  ``HRep``
  keeps three row groups: equalities, weak inequalities (<=) and strict
  inequalities (<).  A closed polyhedron has an empty strict group; a
  relatively open piece carries its facet rows in the strict group.
* ``VRep`` represents conv(points) + cone(rays) + span(lineality); it is
  nonempty iff ``points`` is nonempty.

The canonical form of an ``HRep`` is intrinsic to the point set: affine-hull
equalities in integer RREF, facet rows of the closure reduced into the
orthogonal complement of the equality span, each marked weak or strict
according to whether the facet's relative interior belongs to the set, all
rows coprime-integer scaled and sorted.  Two HReps describe the same point
set iff their canonical forms are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ncx import kernel
from ncx.errors import EmptySetError

Vec = tuple
Row = tuple


def Q(x) -> Fraction:
    """Exact scalar from int, Fraction, or 'p/q' string.  Floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"exact rational required, got {type(x).__name__}: {x!r}")


def vec(*coords) -> Vec:
    return tuple(Q(c) for c in coords)


def asvec(seq) -> Vec:
    return tuple(Q(c) for c in seq)


def row(coeffs, rhs) -> Row:
    return (asvec(coeffs), Q(rhs))


@dataclass(frozen=True)
class HRep:
    dim: int
    eq: tuple = ()
    weak: tuple = ()
    strict: tuple = ()

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("dimension must be >= 0")
        for group in (self.eq, self.weak, self.strict):
            for a, b in group:
                if len(a) != self.dim:
                    raise ValueError("row dimension mismatch")

    @property
    def closed(self) -> bool:
        return not self.strict

    def rows(self):
        """All rows as (kind, coeffs, rhs) with kind in {'eq','le','lt'}."""
        for a, b in self.eq:
            yield ("eq", a, b)
        for a, b in self.weak:
            yield ("le", a, b)
        for a, b in self.strict:
            yield ("lt", a, b)


@dataclass(frozen=True)
class VRep:
    dim: int
    points: tuple = ()
    rays: tuple = ()
    lineality: tuple = ()

    @property
    def is_empty(self) -> bool:
        return not self.points


@dataclass(frozen=True)
class LinMap:
    """Exact linear (optionally affine) map x -> matrix @ x + offset."""

    matrix: tuple
    offset: tuple | None = None

    @property
    def m(self) -> int:
        return len(self.matrix)

    @property
    def n(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    def __post_init__(self):
        if not self.matrix:
            raise ValueError("matrix must have at least one row")
        w = len(self.matrix[0])
        for r in self.matrix:
            if len(r) != w:
                raise ValueError("ragged matrix")
        if self.offset is not None and len(self.offset) != self.m:
            raise ValueError("offset dimension mismatch")

    def apply(self, x) -> Vec:
        out = [sum(self.matrix[i][j] * x[j] for j in range(self.n)) for i in range(self.m)]
        if self.offset is not None:
            out = [out[i] + self.offset[i] for i in range(self.m)]
        return tuple(out)


def linmap(rows, offset=None) -> LinMap:
    mat = tuple(asvec(r) for r in rows)
    off = asvec(offset) if offset is not None else None
    return LinMap(mat, off)


def identity_map(n: int) -> LinMap:
    return LinMap(tuple(tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)))


def hrep(dim, eq=(), weak=(), strict=()) -> HRep:
    return HRep(
        dim,
        tuple(row(a, b) for a, b in eq),
        tuple(row(a, b) for a, b in weak),
        tuple(row(a, b) for a, b in strict),
    )


def vrep(dim, points=(), rays=(), lineality=()) -> VRep:
    return VRep(
        dim,
        tuple(asvec(p) for p in points),
        tuple(asvec(r) for r in rays),
        tuple(asvec(l) for l in lineality),
    )


def empty_hrep(dim: int) -> HRep:
    """Canonical empty polyhedron: 0 <= -1."""
    return HRep(dim, (), (((Fraction(0),) * dim, Fraction(-1)),), ())


def whole_space(dim: int) -> HRep:
    return HRep(dim)


# ---------------------------------------------------------------------------
# integer row forms


def _irow(a, b):
    return kernel.qvec_to_ivec(tuple(a) + (b,))


def _irows(h: HRep):
    eq = [_irow(a, b) for a, b in h.eq]
    le = [_irow(a, b) for a, b in h.weak]
    lt = [_irow(a, b) for a, b in h.strict]
    return eq, le, lt


def _qrow(ir) -> Row:
    return (tuple(Fraction(c) for c in ir[:-1]), Fraction(ir[-1]))


def _eval_row(a, b, x):
    return sum(a[i] * x[i] for i in range(len(a))) - b


def contains(h: HRep, x) -> bool:
    x = asvec(x)
    for a, b in h.eq:
        if _eval_row(a, b, x) != 0:
            return False
    for a, b in h.weak:
        if _eval_row(a, b, x) > 0:
            return False
    for a, b in h.strict:
        if _eval_row(a, b, x) >= 0:
            return False
    return True


def strict_feasible(h: HRep):
    """A point satisfying every equality, weak row, and strict row (strictly),
    or None when no such point exists."""
    eq, le, lt = _irows(h)
    return kernel.fm_feasible(h.dim, eq, le, lt)


def is_empty(h: HRep) -> bool:
    return strict_feasible(h) is None


# ---------------------------------------------------------------------------
# H <-> V conversion (double description on the homogenization cone)


def _closed_vrep(h: HRep) -> VRep:
    n = h.dim
    eq, le, lt = _irows(h)
    if lt:
        raise ValueError("conversion requires a closed polyhedron (no strict rows)")
    hom_le = [r[:-1] + (-r[-1],) for r in le]
    hom_le.append((0,) * n + (-1,))
    hom_eq = [r[:-1] + (-r[-1],) for r in eq]
    rays, lin = kernel.dd_cone(n + 1, hom_le, hom_eq)
    pts = []
    vrays = []
    for r in rays:
        t = r[n]
        if t > 0:
            pts.append(tuple(Fraction(r[i], t) for i in range(n)))
        else:
            v = tuple(Fraction(c) for c in r[:n])
            if any(v):
                vrays.append(v)
    vlin = []
    for l in lin:
        assert l[n] == 0
        vlin.append(tuple(Fraction(c) for c in l[:n]))
    if not pts:
        return VRep(n)
    return VRep(n, tuple(sorted(pts)), tuple(sorted(vrays)), tuple(sorted(vlin)))


@lru_cache(maxsize=None)
def dd_convert(h: HRep) -> VRep:
    """Minkowski-Weyl H -> V for closed polyhedra.  Empty input gives an
    empty VRep (no points)."""
    return _closed_vrep(h)


def _canonical_eq_rows(dlin, n):
    # dlin: integer homogeneous vectors (a..., beta) meaning <a,x> = -beta.
    aug = [tuple(Fraction(c) for c in v[:n]) + (Fraction(-v[n]),) for v in dlin if any(v[:n])]
    red, piv = kernel.rref(aug, n + 1)
    out = []
    for r in red:
        ir = kernel.qvec_to_ivec(r)
        out.append((tuple(Fraction(c) for c in ir[:-1]), Fraction(ir[-1])))
    return tuple(sorted(out))


def _reduce_row_mod_eqs(a, b, eqs):
    """Unique representative of an inequality row modulo the span of the
    equality rows (RREF pivots eliminated).  Returns None when the row is
    trivial on the affine hull."""
    a = list(a)
    b = Fraction(b)
    for ea, eb in eqs:
        piv = next(j for j in range(len(ea)) if ea[j] != 0)
        if a[piv] != 0:
            f = Fraction(a[piv], ea[piv])
            for j in range(len(a)):
                a[j] -= f * ea[j]
            b -= f * eb
    if not any(a):
        return None, b
    ir = kernel.qvec_to_ivec(tuple(a) + (b,))
    return tuple(Fraction(c) for c in ir[:-1]), Fraction(ir[-1])


def vrep_to_hrep(v: VRep) -> HRep:
    """Facet enumeration via the polar of the homogenization cone.  Output is
    canonical: affine-hull equalities plus irredundant facet rows."""
    n = v.dim
    if v.is_empty:
        return empty_hrep(n)
    gens_le = [kernel.qvec_to_ivec(tuple(p) + (Fraction(1),)) for p in v.points]
    gens_le += [kernel.qvec_to_ivec(tuple(r) + (Fraction(0),)) for r in v.rays if any(r)]
    gens_eq = [kernel.qvec_to_ivec(tuple(l) + (Fraction(0),)) for l in v.lineality if any(l)]
    drays, dlin = kernel.dd_cone(n + 1, gens_le, gens_eq)
    eqs = _canonical_eq_rows(dlin, n)
    weak = set()
    for r in drays:
        a = tuple(Fraction(c) for c in r[:n])
        b = Fraction(-r[n])
        ra, rb = _reduce_row_mod_eqs(a, b, eqs)
        if ra is None:
            assert rb >= 0, "polar ray infeasible on the affine hull"
            continue
        weak.add((ra, rb))
    return HRep(n, eqs, tuple(sorted(weak)), ())


@lru_cache(maxsize=None)
def canonical(h: HRep) -> HRep:
    """Intrinsic canonical form; equal point sets yield identical HReps."""
    if strict_feasible(h) is None:
        return empty_hrep(h.dim)
    closed = HRep(h.dim, h.eq, h.weak + h.strict, ())
    base = vrep_to_hrep(_closed_vrep(closed))
    if not h.strict:
        return base
    # mark each facet strict iff its relative interior is excluded from h
    eqs_i = [_irow(a, b) for a, b in base.eq]
    weak_i = [_irow(a, b) for a, b in base.weak]
    weak_rows = []
    strict_rows = []
    for idx, (a, b) in enumerate(base.weak):
        this_eq = eqs_i + [weak_i[idx]]
        others = [weak_i[j] for j in range(len(weak_i)) if j != idx]
        w = kernel.fm_feasible(h.dim, this_eq, [], others)
        assert w is not None, "facet with empty relative interior"
        included = all(_eval_row(sa, sb, w) < 0 for sa, sb in h.strict)
        if included:
            weak_rows.append((a, b))
        else:
            strict_rows.append((a, b))
    return HRep(h.dim, base.eq, tuple(weak_rows), tuple(strict_rows))


def poly_equal(h1: HRep, h2: HRep) -> bool:
    """Exact point-set equality, strict rows included."""
    if h1.dim != h2.dim:
        raise ValueError("ambient dimension mismatch")
    return canonical(h1) == canonical(h2)


def closure_hrep(h: HRep) -> HRep:
    """Closure of the (possibly partially open) polyhedral set, canonical."""
    c = canonical(h)
    if not c.strict:
        return c
    return HRep(c.dim, c.eq, tuple(sorted(c.weak + c.strict)), ())


def rel_interior_hrep(h: HRep) -> HRep:
    """Relative interior as a relatively open piece (all facet rows strict).

    For a convex polyhedral piece S this is ri(cl S), which equals ri S.
    Raises EmptySetError on empty input.
    """
    c = canonical(h)
    if c == empty_hrep(h.dim):
        raise EmptySetError("relative interior of the empty set")
    return HRep(c.dim, c.eq, (), tuple(sorted(c.weak + c.strict)))


def relint_point(h: HRep) -> Vec:
    """An exact point in the relative interior of cl(h)."""
    p = strict_feasible(rel_interior_hrep(h))
    assert p is not None
    return p


def affine_hull(h: HRep):
    """(dimension, minimal equality system) of the affine hull."""
    c = canonical(h)
    if c == empty_hrep(h.dim):
        raise EmptySetError("affine hull of the empty set")
    return h.dim - len(c.eq), c.eq


def dim_of(h: HRep) -> int:
    return affine_hull(h)[0]


# ---------------------------------------------------------------------------
# elementary operations


def vrep_canonical(v: VRep) -> VRep:
    return _closed_vrep(vrep_to_hrep(v))


def linear_image(v: VRep, A: LinMap) -> VRep:
    if A.n != v.dim:
        raise ValueError("map/operand dimension mismatch")
    if v.is_empty:
        return VRep(A.m)
    zero_off = LinMap(A.matrix)
    pts = [A.apply(p) for p in v.points]
    rays = [zero_off.apply(r) for r in v.rays]
    lin = [zero_off.apply(l) for l in v.lineality]
    out = VRep(
        A.m,
        tuple(sorted(set(pts))),
        tuple(sorted({r for r in rays if any(r)})),
        tuple(sorted({l for l in lin if any(l)})),
    )
    return vrep_canonical(out)


def preimage(h: HRep, A: LinMap) -> HRep:
    """Rows pulled back through the map; kinds (eq/weak/strict) preserved."""
    if A.m != h.dim:
        raise ValueError("map/operand dimension mismatch")
    off = A.offset if A.offset is not None else (Fraction(0),) * A.m

    def pull(a, b):
        coeffs = tuple(sum(a[i] * A.matrix[i][j] for i in range(A.m)) for j in range(A.n))
        rhs = b - sum(a[i] * off[i] for i in range(A.m))
        return (coeffs, rhs)

    out = HRep(
        A.n,
        tuple(pull(a, b) for a, b in h.eq),
        tuple(pull(a, b) for a, b in h.weak),
        tuple(pull(a, b) for a, b in h.strict),
    )
    return canonical(out)


def minkowski_sum(v1: VRep, v2: VRep) -> VRep:
    if v1.dim != v2.dim:
        raise ValueError("dimension mismatch")
    if v1.is_empty or v2.is_empty:
        return VRep(v1.dim)
    pts = [tuple(p[i] + q[i] for i in range(v1.dim)) for p in v1.points for q in v2.points]
    rays = set(v1.rays) | set(v2.rays)
    lin = set(v1.lineality) | set(v2.lineality)
    return vrep_canonical(VRep(v1.dim, tuple(sorted(set(pts))), tuple(sorted(rays)), tuple(sorted(lin))))


def recession(h: HRep) -> HRep:
    """Recession cone {y : Ay <= 0, Cy = 0} of a nonempty closed polyhedron."""
    if h.strict:
        raise ValueError("recession cone is defined here for closed polyhedra")
    if is_empty(h):
        raise EmptySetError("recession cone of the empty set")
    zero = Fraction(0)
    out = HRep(
        h.dim,
        tuple((a, zero) for a, b in h.eq),
        tuple((a, zero) for a, b in h.weak),
        (),
    )
    return canonical(out)


def lineality_basis(h: HRep):
    """Basis of the lineality space rec(h) ∩ -rec(h) of a nonempty closed
    polyhedron."""
    if is_empty(h):
        raise EmptySetError("lineality of the empty set")
    rows = [tuple(a) for a, b in h.eq] + [tuple(a) for a, b in h.weak]
    basis = kernel.nullspace(rows, h.dim) if rows else kernel.nullspace([], h.dim)
    if not rows:
        basis = [tuple(1 if i == j else 0 for j in range(h.dim)) for i in range(h.dim)]
    return tuple(tuple(Fraction(c) for c in v) for v in basis)


def cone_generators(h: HRep):
    """(rays, lineality) generating the cone {y: Ay<=0, Cy=0} built from h's
    rows; h itself is interpreted as that homogeneous system."""
    eq = [tuple(int(c) for c in kernel.qvec_to_ivec(a)) for a, b in h.eq]
    le = [tuple(int(c) for c in kernel.qvec_to_ivec(a)) for a, b in h.weak]
    rays, lin = kernel.dd_cone(h.dim, le, eq)
    conv = lambda vs: tuple(tuple(Fraction(c) for c in v) for v in vs)
    return conv(rays), conv(lin)


def faces(h: HRep):
    """All proper faces of a nonempty closed polyhedron, as canonical HReps,
    ordered by decreasing dimension."""
    c = canonical(h)
    if c == empty_hrep(h.dim):
        raise EmptySetError("faces of the empty set")
    if c.strict:
        raise ValueError("faces are defined here for closed polyhedra")
    seen = {}

    def rec(cur: HRep):
        for idx in range(len(cur.weak)):
            a, b = cur.weak[idx]
            sub = canonical(HRep(cur.dim, cur.eq + ((a, b),), cur.weak[:idx] + cur.weak[idx + 1 :], ()))
            if sub == empty_hrep(cur.dim):
                continue
            key = (sub.eq, sub.weak, sub.strict)
            if key in seen:
                continue
            seen[key] = sub
            rec(sub)

    rec(c)
    out = list(seen.values())
    out.sort(key=lambda f: (-(h.dim - len(f.eq)), f.eq, f.weak))
    return tuple(out)


def membership_vrep(v: VRep, x) -> bool:
    """Exact test x in conv(points) + cone(rays) + span(lineality): decided in
    the multiplier space when the generator count is small (elimination cost
    grows quickly in the number of multipliers), through the facet form
    otherwise."""
    x = asvec(x)
    if v.is_empty:
        return False
    npts, nrays, nlin = len(v.points), len(v.rays), len(v.lineality)
    nv = npts + nrays + nlin
    if nv > 10:
        return contains(vrep_to_hrep(v), x)
    eq_rows = []
    for i in range(v.dim):
        coeffs = (
            [v.points[p][i] for p in range(npts)]
            + [v.rays[r][i] for r in range(nrays)]
            + [v.lineality[l][i] for l in range(nlin)]
        )
        eq_rows.append(kernel.qvec_to_ivec(tuple(coeffs) + (x[i],)))
    eq_rows.append(kernel.qvec_to_ivec((Fraction(1),) * npts + (Fraction(0),) * (nrays + nlin) + (Fraction(1),)))
    le_rows = []
    for j in range(npts + nrays):
        r = [0] * (nv + 1)
        r[j] = -1
        le_rows.append(tuple(r))
    return kernel.fm_feasible(nv, eq_rows, le_rows, []) is not None
