"""Closed-form convex functions with known subdifferentials.

The catalog contains the building blocks used to realize prescribed nearly
convex sets as subdifferential domains:

* ``Indicator`` / ``SupportFn`` of a closed polyhedron (dom ∂ι_C = C);
* ``GaugeRecip``: x ↦ 1/(1 - ρ_A(x - x0)) over an open polyhedral C, whose
  subdifferential domain is exactly C;
* ``Interval1d``: the four one-dimensional constructions (closed / open ray /
  open / half-open interval);
* ``Rockafellar``: (ξ1, ξ2) ↦ max{α - ξ1^(1/2), |ξ2|} on ξ1 ≥ 0, with the
  full case table for ∂f, its nonconvex domain, and the five-case conjugate;
* ``HalfStrip``: max{α - x1^(1/2), x2}-type variant whose subdifferential
  domain is a half plane minus an open boundary ray (orientation ±1 mirrors
  the excluded ray);
* ``Precomposed``: h(x) = f(c·R(x - t)) for an exact rotation R, preserving
  exactness through Q(sqrt(n)) scalars;
* ``SumFn``: sums under the subdifferential sum rule (with the polyhedral
  refinement of the constraint qualification);
* ``assemble_polygon_fn``: a 2D polyhedron with selected boundary edges
  removed (vertices kept) as dom ∂f of one assembled function.

Evaluation returns exact Fractions where the formula value is rational and
floats (1e-12 accurate) where it is not; case dispatch in ``subdiff`` is
always exact for exact inputs (floats are exactified first: every float is a
dyadic rational).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ncx import ncset as ns
from ncx import polykernel as pk
from ncx.errors import (
    BadIntervalError,
    CQViolationError,
    EmptySetError,
    IrrationalBoundaryError,
    NoClosedFormError,
    Not2DError,
    NotFullDimError,
    NotInteriorError,
)
from ncx.ncset import NCSet
from ncx.polykernel import HRep
from ncx.qext import QE, exact_sqrt, is_exact, num_float, qe_sqrt, sgn, sqrt_cmp, sqrt_decompose, to_exact

INF = math.inf

NEAR_BOUNDARY_TOL = 1e-12


# ---------------------------------------------------------------------------
# numeric helpers over Fraction | QE | float


def _simplify(v):
    if isinstance(v, QE) and v.is_rational:
        return v.as_fraction()
    return v


def _exact_vec(x):
    return tuple(to_exact(c) for c in x)


def _float_key(vs):
    return tuple(num_float(c) for c in vs)


def _sort_vecs(vecs):
    return tuple(sorted(vecs, key=lambda v: (_float_key(v), repr(v))))


@dataclass(frozen=True)
class SubVal:
    """A subdifferential value conv(points) + cone(rays); empty iff it has no
    points.  Coordinates are numbers (Fraction / QE / float): exactness is
    kept whenever the closed form is rational."""

    points: tuple = ()
    rays: tuple = ()

    @property
    def empty(self) -> bool:
        return not self.points

    def as_float(self):
        pts = np.array([[num_float(c) for c in p] for p in self.points], dtype=float) if self.points else np.zeros((0, 0))
        rys = np.array([[num_float(c) for c in r] for r in self.rays], dtype=float) if self.rays else np.zeros((0, 0))
        return pts, rys


EMPTY_SUBVAL = SubVal()


def subval(points=(), rays=()) -> SubVal:
    pts = _sort_vecs({tuple(_simplify(c) for c in p) for p in points})
    rys = _sort_vecs({tuple(_simplify(c) for c in r) for r in rays})
    return SubVal(pts, rys)


def subval_is_exact(s: SubVal) -> bool:
    return all(
        isinstance(_simplify(c), Fraction) or isinstance(c, int)
        for grp in (s.points, s.rays)
        for v in grp
        for c in v
    )


def subval_vrep(s: SubVal, dim: int) -> pk.VRep:
    """Canonical V-representation of an exact-rational SubVal."""
    if s.empty:
        return pk.VRep(dim)
    pts = tuple(tuple(Fraction(_simplify(c)) for c in p) for p in s.points)
    rys = tuple(tuple(Fraction(_simplify(c)) for c in r) for r in s.rays)
    return pk.vrep_canonical(pk.VRep(dim, pts, rys, ()))


def subval_equal(a: SubVal, b: SubVal, dim: int) -> bool:
    """Exact set equality of two rational SubVals."""
    if a.empty or b.empty:
        return a.empty and b.empty
    return subval_vrep(a, dim) == subval_vrep(b, dim)


def subval_minkowski(a: SubVal, b: SubVal) -> SubVal:
    if a.empty or b.empty:
        return EMPTY_SUBVAL
    pts = []
    for p in a.points:
        for q in b.points:
            pts.append(tuple(_num_add(p[i], q[i]) for i in range(len(p))))
    return subval(pts, tuple(a.rays) + tuple(b.rays))


def _num_add(x, y):
    if is_exact(x) and is_exact(y):
        try:
            return x + y
        except TypeError:
            pass
    return num_float(x) + num_float(y)


def _num_mul(x, y):
    if is_exact(x) and is_exact(y):
        try:
            return x * y
        except TypeError:
            pass
    return num_float(x) * num_float(y)


@dataclass(frozen=True)
class MonotoneGraphSample:
    """Pairs (x, u) with u ∈ ∂f(x); builders validate the subgradient
    inequality on the grid used to create the sample."""

    pairs: tuple


# ---------------------------------------------------------------------------
# exact row templates -> NCSet


def _rationalize_rows(rows, dim):
    eq, weak, strict = [], [], []
    for kind, coeffs, rhs in rows:
        vals = [to_exact(c) for c in coeffs] + [to_exact(rhs)]
        us, vs = [], []
        root = None
        for c in vals:
            if isinstance(c, QE) and not c.is_rational:
                us.append(c.a)
                vs.append(c.b)
                if root is None:
                    root = c.n
                elif root != c.n:
                    raise IrrationalBoundaryError("mixed quadratic roots in one row")
            else:
                us.append(c.as_fraction() if isinstance(c, QE) else Fraction(c))
                vs.append(Fraction(0))
        if any(vs):
            if any(us):
                raise IrrationalBoundaryError("row boundary is irrational")
            vals = [v * root for v in vs]
        else:
            vals = us
        row = (tuple(vals[:-1]), vals[-1])
        {"eq": eq, "le": weak, "lt": strict}[kind].append(row)
    return HRep(dim, tuple(eq), tuple(weak), tuple(strict))


def _pieces_to_ncset(pieces, dim) -> NCSet:
    return ns.canonicalize(NCSet(dim, tuple(_rationalize_rows(rows, dim) for rows in pieces)))


# ---------------------------------------------------------------------------
# base class


class ConvexFn:
    kind = "abstract"
    dim = 0
    is_polyhedral = False

    def eval(self, x):
        raise NotImplementedError

    def eval_many(self, P: np.ndarray) -> np.ndarray:
        return np.array([num_float(self.eval(tuple(row))) for row in P], dtype=float)

    def subdiff(self, x, diag=None) -> SubVal:
        raise NotImplementedError

    def _dom_subdiff_pieces(self):
        raise NotImplementedError

    def _domain_pieces(self):
        raise NotImplementedError

    def dom_subdiff(self) -> NCSet:
        return _pieces_to_ncset(self._dom_subdiff_pieces(), self.dim)

    def domain(self) -> NCSet:
        return _pieces_to_ncset(self._domain_pieces(), self.dim)

    def conjugate(self, xstar):
        raise NoClosedFormError(f"no closed-form conjugate for kind {self.kind!r}")


def evaluate(f: ConvexFn, x):
    return f.eval(x)


def subdifferential(f: ConvexFn, x, diag=None) -> SubVal:
    return f.subdiff(x, diag=diag)


def dom_subdiff(f: ConvexFn) -> NCSet:
    return f.dom_subdiff()


def conjugate_eval(f: ConvexFn, xstar):
    return f.conjugate(xstar)


# ---------------------------------------------------------------------------
# indicator and support of a closed polyhedron


class Indicator(ConvexFn):
    kind = "indicator"
    is_polyhedral = True

    def __init__(self, P: HRep):
        if P.strict:
            raise ValueError("indicator catalog entry requires a closed polyhedron")
        C = pk.canonical(P)
        if C == pk.empty_hrep(P.dim):
            raise EmptySetError("indicator of the empty set is improper")
        self.P = C
        self.dim = P.dim

    def eval(self, x):
        return Fraction(0) if pk.contains(self.P, _exact_vec(x)) else INF

    def eval_many(self, P):
        out = np.zeros(len(P))
        for a, b in self.P.eq:
            af = np.array([float(c) for c in a])
            out[np.abs(P @ af - float(b)) > 0] = INF
        for a, b in self.P.weak:
            af = np.array([float(c) for c in a])
            out[P @ af > float(b)] = INF
        return out

    def subdiff(self, x, diag=None) -> SubVal:
        x = _exact_vec(x)
        if not pk.contains(self.P, x):
            return EMPTY_SUBVAL
        rays = []
        for a, b in self.P.weak:
            if sum(a[i] * x[i] for i in range(self.dim)) == b:
                rays.append(tuple(a))
        for a, b in self.P.eq:
            rays.append(tuple(a))
            rays.append(tuple(-c for c in a))
        return subval(points=((Fraction(0),) * self.dim,), rays=rays)

    def _dom_subdiff_pieces(self):
        return [_rows_of(self.P)]

    _domain_pieces = _dom_subdiff_pieces

    def conjugate(self, xstar):
        return SupportFn(self.P).eval(xstar)


def _rows_of(h: HRep):
    rows = [("eq", a, b) for a, b in h.eq]
    rows += [("le", a, b) for a, b in h.weak]
    rows += [("lt", a, b) for a, b in h.strict]
    return rows


class SupportFn(ConvexFn):
    kind = "support"
    is_polyhedral = True

    def __init__(self, P: HRep):
        if P.strict:
            raise ValueError("support catalog entry requires a closed polyhedron")
        C = pk.canonical(P)
        if C == pk.empty_hrep(P.dim):
            raise EmptySetError("support function of the empty set is improper")
        self.P = C
        self.dim = P.dim
        self._V = pk.dd_convert(C)
        rec = pk.recession(C)
        self._rec_rays, self._rec_lin = pk.cone_generators(rec)

    def eval(self, x):
        x = _exact_vec(x)
        for r in self._rec_rays:
            if sum(x[i] * r[i] for i in range(self.dim)) > 0:
                return INF
        for l in self._rec_lin:
            if sum(x[i] * l[i] for i in range(self.dim)) != 0:
                return INF
        return max(sum(x[i] * p[i] for i in range(self.dim)) for p in self._V.points)

    def subdiff(self, x, diag=None) -> SubVal:
        x = _exact_vec(x)
        s = self.eval(x)
        if s == INF:
            return EMPTY_SUBVAL
        face = pk.canonical(HRep(self.dim, self.P.eq + ((tuple(x), Fraction(s)),), self.P.weak, ()))
        v = pk.dd_convert(face)
        rays = list(v.rays)
        for l in v.lineality:
            rays.append(tuple(l))
            rays.append(tuple(-c for c in l))
        return subval(points=v.points, rays=rays)

    def _dom_subdiff_pieces(self):
        rows = [("le", tuple(r), Fraction(0)) for r in self._rec_rays]
        rows += [("eq", tuple(l), Fraction(0)) for l in self._rec_lin]
        return [rows]

    _domain_pieces = _dom_subdiff_pieces

    def conjugate(self, xstar):
        return Fraction(0) if pk.contains(self.P, _exact_vec(xstar)) else INF


# ---------------------------------------------------------------------------
# reciprocal-gauge function on an open polyhedral set


class GaugeRecip(ConvexFn):
    kind = "gauge_recip"

    def __init__(self, C: HRep, x0):
        x0 = _exact_vec(x0)
        cC = pk.canonical(C)
        if cC == pk.empty_hrep(C.dim):
            raise EmptySetError("empty open set")
        if cC.eq or cC.weak:
            raise NotInteriorError("the prescribed set must be open (all-strict rows)")
        if not pk.contains(cC, x0):
            raise NotInteriorError(f"{x0} is not interior to the prescribed open set")
        self.C = cC
        self.x0 = x0
        self.dim = C.dim
        rows = []
        for a, b in cC.strict:
            bshift = b - sum(a[i] * x0[i] for i in range(self.dim))
            assert bshift > 0, "strict feasibility of the base point failed"
            rows.append((tuple(a), bshift))
        self._rows = tuple(rows)

    def _rho(self, z):
        best = Fraction(0)
        for a, b in self._rows:
            r = sum(a[i] * z[i] for i in range(self.dim)) / b
            if r > best:
                best = r
        return best

    def eval(self, x):
        x = _exact_vec(x)
        z = tuple(x[i] - self.x0[i] for i in range(self.dim))
        rho = self._rho(z)
        if rho >= 1:
            return INF
        return 1 / (1 - rho)

    def eval_many(self, P):
        Z = P - np.array([float(c) for c in self.x0])
        rho = np.zeros(len(P))
        for a, b in self._rows:
            af = np.array([float(c) for c in a]) / float(b)
            rho = np.maximum(rho, Z @ af)
        with np.errstate(divide="ignore"):
            return np.where(rho < 1, 1.0 / (1.0 - rho), INF)

    def subdiff(self, x, diag=None) -> SubVal:
        x = _exact_vec(x)
        z = tuple(x[i] - self.x0[i] for i in range(self.dim))
        rho = self._rho(z)
        if rho >= 1:
            return EMPTY_SUBVAL
        grads = []
        if rho == 0:
            grads.append((Fraction(0),) * self.dim)
        for a, b in self._rows:
            r = sum(a[i] * z[i] for i in range(self.dim)) / b
            if r == rho:
                grads.append(tuple(c / b for c in a))
        scale = 1 / (1 - rho) ** 2
        return subval(points=[tuple(scale * c for c in g) for g in grads])

    def _dom_subdiff_pieces(self):
        return [_rows_of(self.C)]

    _domain_pieces = _dom_subdiff_pieces


def make_gauge_recip(C: HRep, x0) -> GaugeRecip:
    return GaugeRecip(C, x0)


# ---------------------------------------------------------------------------
# one-dimensional interval constructions


def _x1(x):
    if isinstance(x, (int, float, Fraction, QE)):
        return to_exact(x)
    if len(x) != 1:
        raise ValueError("one-dimensional point expected")
    return to_exact(x[0])


class Interval1d(ConvexFn):
    kind = "interval1d"
    dim = 1

    def __init__(self, interval_kind: str, a=None, b=None, closed_side: str = "right"):
        self.interval_kind = interval_kind
        self.a = to_exact(a) if a is not None else None
        self.b = to_exact(b) if b is not None else None
        self.closed_side = closed_side
        if self.a is not None and self.b is not None and not self.a < self.b:
            raise BadIntervalError("need a < b")
        if interval_kind == "closed":
            pass
        elif interval_kind == "open":
            if self.a is None or self.b is None:
                raise BadIntervalError("open interval needs both endpoints (use 'ray' otherwise)")
        elif interval_kind == "ray":
            if (self.a is None) == (self.b is None):
                raise BadIntervalError("open ray needs exactly one endpoint")
        elif interval_kind == "halfopen":
            if self.a is None or self.b is None:
                raise BadIntervalError("half-open interval needs both endpoints")
            if closed_side not in ("left", "right"):
                raise BadIntervalError("closed_side must be 'left' or 'right'")
        else:
            raise BadIntervalError(f"unknown interval kind {interval_kind!r}")

    @property
    def is_polyhedral(self):
        return self.interval_kind == "closed"

    def _in_interval(self, t):
        k = self.interval_kind
        if k == "closed":
            return (self.a is None or t >= self.a) and (self.b is None or t <= self.b)
        if k == "open":
            return self.a < t < self.b
        if k == "ray":
            return t > self.a if self.a is not None else t < self.b
        if self.closed_side == "right":
            return self.a < t <= self.b
        return self.a <= t < self.b

    def eval(self, x):
        t = _x1(x)
        if not self._in_interval(t):
            return INF
        k = self.interval_kind
        if k == "closed":
            return Fraction(0)
        if k == "ray":
            return 1 / (t - self.a) if self.a is not None else 1 / (self.b - t)
        if k == "open":
            a, b = self.a, self.b
            if 2 * t == a + b:
                return Fraction(0)
            arg = math.pi * num_float((t - a) / (b - a)) - math.pi / 2
            return -num_float(b - a) / math.pi * math.log(math.cos(arg))
        # half-open
        if self.closed_side == "right":
            a, b = self.a, self.b
            return -(math.log(num_float(t - a)) - num_float(t / (b - a)))
        a, b = self.a, self.b
        m = a + b - t
        return -(math.log(num_float(m - a)) - num_float(m / (b - a)))

    def subdiff(self, x, diag=None) -> SubVal:
        t = _x1(x)
        if not self._in_interval(t):
            return EMPTY_SUBVAL
        k = self.interval_kind
        zero = Fraction(0)
        if k == "closed":
            rays = []
            if self.a is not None and t == self.a:
                rays.append((Fraction(-1),))
            if self.b is not None and t == self.b:
                rays.append((Fraction(1),))
            return subval(points=((zero,),), rays=rays)
        if k == "ray":
            if self.a is not None:
                return subval(points=((-1 / (t - self.a) ** 2,),))
            return subval(points=((1 / (self.b - t) ** 2,),))
        if k == "open":
            a, b = self.a, self.b
            if 2 * t == a + b:
                return subval(points=((zero,),))
            arg = math.pi * num_float((t - a) / (b - a)) - math.pi / 2
            return subval(points=((math.tan(arg),),))
        # half-open
        if self.closed_side == "right":
            a, b = self.a, self.b
            if t == b:
                return subval(points=((zero,),), rays=((Fraction(1),),))
            return subval(points=((1 / (a - t) - 1 / (a - b),),))
        a, b = self.a, self.b
        if t == a:
            return subval(points=((zero,),), rays=((Fraction(-1),),))
        m = a + b - t
        return subval(points=((-(1 / (a - m) - 1 / (a - b)),),))

    def _interval_rows(self, open_left: bool, open_right: bool):
        rows = []
        if self.a is not None:
            rows.append(("lt" if open_left else "le", (Fraction(-1),), -self.a))
        if self.b is not None:
            rows.append(("lt" if open_right else "le", (Fraction(1),), self.b))
        return [rows]

    def _dom_subdiff_pieces(self):
        k = self.interval_kind
        if k == "closed":
            return self._interval_rows(False, False)
        if k in ("open", "ray"):
            return self._interval_rows(True, True)
        if self.closed_side == "right":
            return self._interval_rows(True, False)
        return self._interval_rows(False, True)

    _domain_pieces = _dom_subdiff_pieces

    def conjugate(self, xstar):
        if self.interval_kind != "closed":
            raise NoClosedFormError("conjugate catalog covers the closed interval case")
        t = _x1(xstar)
        if t > 0:
            return self.b * t if self.b is not None else INF
        if t < 0:
            return self.a * t if self.a is not None else INF
        return Fraction(0)


def make_interval_fn(interval_kind: str, a=None, b=None, closed_side: str = "right") -> Interval1d:
    return Interval1d(interval_kind, a, b, closed_side)


# ---------------------------------------------------------------------------
# the modified Rockafellar function and its half-strip variant


def _grad_sqrt_coord(xi1):
    """-1/(2 sqrt(xi1)) as an exact value when sqrt(xi1) is rational, float
    otherwise."""
    r = exact_sqrt(xi1)
    if r is not None:
        return Fraction(-1, 2) / r
    return -0.5 / math.sqrt(num_float(xi1))


class Rockafellar(ConvexFn):
    """f(ξ1, ξ2) = max{α - ξ1^(1/2), |ξ2|} for ξ1 >= 0, +∞ otherwise (α > 0).

    dom ∂f = {ξ1 > 0} ∪ {0} × {|ξ2| >= α} is nearly convex but not convex;
    ran ∂f = {ξ1 <= 0, |ξ2| <= 1} is its closed range square.
    """

    kind = "rockafellar"
    dim = 2

    def __init__(self, alpha):
        alpha = to_exact(alpha)
        if sgn(alpha) <= 0:
            raise ValueError("alpha must be positive")
        self.alpha = alpha

    def eval(self, x):
        xi1, xi2 = _exact_vec(x)
        if sgn(xi1) < 0:
            return INF
        a2 = abs(xi2)
        r = exact_sqrt(xi1)
        if r is not None:
            try:
                return _simplify(max(self.alpha - r, a2))
            except TypeError:
                pass
        return max(num_float(self.alpha) - math.sqrt(num_float(xi1)), num_float(a2))

    def eval_many(self, P):
        X1, X2 = P[:, 0], P[:, 1]
        with np.errstate(invalid="ignore"):
            vals = np.maximum(float(self.alpha) - np.sqrt(np.maximum(X1, 0.0)), np.abs(X2))
        return np.where(X1 < 0, INF, vals)

    def _flag_near_boundary(self, x, diag):
        if diag is None or not any(isinstance(c, float) for c in x):
            return
        x1, x2 = (num_float(c) for c in x)
        af = num_float(self.alpha)
        resid = [abs(x1), abs(x1 - af * af)]
        if x1 > 0:
            resid.append(abs(abs(x2) - (af - math.sqrt(x1))))
        else:
            resid.append(abs(abs(x2) - af))
        if min(resid) < NEAR_BOUNDARY_TOL and min(resid) != 0.0:
            diag.append("NEAR_BOUNDARY")

    def subdiff(self, x, diag=None) -> SubVal:
        self._flag_near_boundary(tuple(x), diag)
        xi1, xi2 = _exact_vec(x)
        one = Fraction(1)
        zero = Fraction(0)
        s1 = sgn(xi1)
        if s1 < 0:
            return EMPTY_SUBVAL
        if s1 == 0:
            if xi2 >= self.alpha:
                return subval(points=((zero, one),), rays=(((-one), zero),))
            if -xi2 >= self.alpha:
                return subval(points=((zero, -one),), rays=(((-one), zero),))
            return EMPTY_SUBVAL
        a2 = abs(xi2)
        cmpv = -sqrt_cmp(self.alpha - a2, xi1)  # sign(|ξ2| - (α - sqrt(ξ1)))
        if cmpv < 0:
            return subval(points=((_grad_sqrt_coord(xi1), zero),))
        if cmpv > 0:
            s2 = sgn(xi2)
            if s2 > 0:
                return subval(points=((zero, one),))
            if s2 < 0:
                return subval(points=((zero, -one),))
            return subval(points=((zero, one), (zero, -one)))
        if sgn(xi2) == 0:
            # sqrt(ξ1) = α exactly
            g = _simplify(Fraction(-1, 2) / self.alpha)
            return subval(points=((g, zero), (zero, one), (zero, -one)))
        g = _grad_sqrt_coord(xi1)
        if sgn(xi2) > 0:
            return subval(points=((g, zero), (zero, one)))
        return subval(points=((g, zero), (zero, -one)))

    def _dom_subdiff_pieces(self):
        one = Fraction(1)
        zero = Fraction(0)
        return [
            [("lt", (-one, zero), zero)],
            [("eq", (one, zero), zero), ("le", (zero, -one), -self.alpha)],
            [("eq", (one, zero), zero), ("le", (zero, one), -self.alpha)],
        ]

    def _domain_pieces(self):
        return [[("le", (Fraction(-1), Fraction(0)), Fraction(0))]]

    def range_hrep(self) -> HRep:
        """ran ∂f = {x1 <= 0, |x2| <= 1}, exact."""
        return pk.hrep(2, weak=[((1, 0), 0), ((0, 1), 1), ((0, -1), 1)])

    def conjugate(self, xstar):
        x1, x2 = _exact_vec(xstar)
        al = self.alpha
        a2 = abs(x2)
        if sgn(x1) > 0 or a2 > 1:
            return INF
        if a2 == 1 or (sgn(x1) == 0 and a2 < 1):
            return Fraction(0)
        # now x1 <= 0 and |x2| < 1; x1 = 0 handled above
        thr = 1 + 2 * al * x1
        if x1 >= Fraction(-1) / (2 * al) and a2 <= thr:
            return _simplify(al * al * x1)
        if a2 >= thr:  # the two symmetric curved cases
            return _simplify(-((1 - a2) ** 2) / (4 * x1) - al * (1 - a2))
        return INF


class HalfStrip(ConvexFn):
    """f(x1, x2) = max{α - x1^(1/2), σ·x2} for x1 >= 0 (α >= 0, σ = ±1).

    dom ∂f = {x1 >= 0} minus the open boundary ray {(0, x2): σ·x2 < α}:
    neither open nor closed, but convex.  σ = -1 mirrors the removed ray.
    """

    kind = "halfstrip"
    dim = 2

    def __init__(self, alpha, orientation: int = 1):
        alpha = to_exact(alpha)
        if sgn(alpha) < 0:
            raise ValueError("alpha must be nonnegative")
        if orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        self.alpha = alpha
        self.orientation = orientation

    def eval(self, x):
        x1, x2 = _exact_vec(x)
        if sgn(x1) < 0:
            return INF
        sx2 = x2 if self.orientation == 1 else -x2
        r = exact_sqrt(x1)
        if r is not None:
            try:
                return _simplify(max(self.alpha - r, sx2))
            except TypeError:
                pass
        return max(num_float(self.alpha) - math.sqrt(num_float(x1)), num_float(sx2))

    def eval_many(self, P):
        X1, X2 = P[:, 0], self.orientation * P[:, 1]
        with np.errstate(invalid="ignore"):
            vals = np.maximum(float(self.alpha) - np.sqrt(np.maximum(X1, 0.0)), X2)
        return np.where(X1 < 0, INF, vals)

    def subdiff(self, x, diag=None) -> SubVal:
        x1, x2 = _exact_vec(x)
        sig = Fraction(self.orientation)
        zero = Fraction(0)
        s1 = sgn(x1)
        if s1 < 0:
            return EMPTY_SUBVAL
        sx2 = sig * x2
        if s1 == 0:
            if sx2 >= self.alpha:
                return subval(points=((zero, sig),), rays=(((-Fraction(1)), zero),))
            return EMPTY_SUBVAL
        cmpv = -sqrt_cmp(self.alpha - sx2, x1)  # sign(σx2 - (α - sqrt(x1)))
        if cmpv < 0:
            return subval(points=((_grad_sqrt_coord(x1), zero),))
        if cmpv > 0:
            return subval(points=((zero, sig),))
        return subval(points=((_grad_sqrt_coord(x1), zero), (zero, sig)))

    def _dom_subdiff_pieces(self):
        one = Fraction(1)
        zero = Fraction(0)
        sig = Fraction(self.orientation)
        return [
            [("lt", (-one, zero), zero)],
            [("eq", (one, zero), zero), ("le", (zero, -sig), -self.alpha)],
        ]

    def _domain_pieces(self):
        return [[("le", (Fraction(-1), Fraction(0)), Fraction(0))]]

    def range_ncset(self) -> NCSet:
        """ran ∂f = {x1 <= 0, 0 <= σx2 <= 1} minus {(0, x2): 0 <= σx2 < 1}."""
        sig = self.orientation
        open_part = pk.hrep(
            2,
            weak=[((0, -sig), 0), ((0, sig), 1)],
            strict=[((1, 0), 0)],
        )
        corner = pk.hrep(2, eq=[((1, 0), 0), ((0, sig), 1)])
        return ns.canonicalize(NCSet(2, (open_part, corner)))


# ---------------------------------------------------------------------------
# precomposition with an exact rotation/translation/dilation


def rotation_eighth(k: int):
    """(cos, sin) of k * pi/4 as exact scalars (k any integer)."""
    r = QE(0, Fraction(1, 2), 2)  # sqrt(2)/2
    table = {
        0: (Fraction(1), Fraction(0)),
        1: (r, r),
        2: (Fraction(0), Fraction(1)),
        3: (-r, r),
        4: (Fraction(-1), Fraction(0)),
        5: (-r, -r),
        6: (Fraction(0), Fraction(-1)),
        7: (r, -r),
    }
    return table[k % 8]


class Precomposed(ConvexFn):
    """h(x) = f(c * R(x - t)) for an exact rotation R = [[cos, -sin], [sin, cos]],
    translation t, and dilation c > 0.  Subgradients transform by the adjoint:
    ∂h(x) = c * R^T ∂f(c R (x - t))."""

    kind = "precomposed"
    dim = 2

    def __init__(self, base: ConvexFn, cos_t, sin_t, translation=(0, 0), scale=1):
        if base.dim != 2:
            raise Not2DError("precomposition catalog entry is two-dimensional")
        cos_t = to_exact(cos_t)
        sin_t = to_exact(sin_t)
        if cos_t * cos_t + sin_t * sin_t != 1:
            raise ValueError("(cos, sin) must satisfy cos^2 + sin^2 = 1 exactly")
        scale = to_exact(scale)
        if sgn(scale) <= 0:
            raise ValueError("scale must be positive")
        self.base = base
        self.cos_t = cos_t
        self.sin_t = sin_t
        self.translation = _exact_vec(translation)
        self.scale = scale

    @property
    def is_polyhedral(self):
        return self.base.is_polyhedral

    def _forward(self, x):
        """xi = c R (x - t) over exact scalars."""
        x = _exact_vec(x)
        t = self.translation
        z0 = x[0] - t[0]
        z1 = x[1] - t[1]
        c, s = self.cos_t, self.sin_t
        return (self.scale * (c * z0 - s * z1), self.scale * (s * z0 + c * z1))

    def _adjoint(self, u):
        """c R^T u, exact where possible."""
        c, s, sc = self.cos_t, self.sin_t, self.scale
        try:
            if is_exact(u[0]) and is_exact(u[1]):
                return (
                    _simplify(sc * (c * u[0] + s * u[1])),
                    _simplify(sc * (-s * u[0] + c * u[1])),
                )
        except TypeError:
            pass
        cf, sf, scf = num_float(c), num_float(s), num_float(sc)
        u0, u1 = num_float(u[0]), num_float(u[1])
        return (scf * (cf * u0 + sf * u1), scf * (-sf * u0 + cf * u1))

    def eval(self, x):
        try:
            return self.base.eval(self._forward(x))
        except TypeError:
            pass
        xi = self._forward_float(np.array([[num_float(c) for c in x]]))[0]
        return self.base.eval(tuple(xi))

    def _forward_float(self, P):
        t = np.array([num_float(c) for c in self.translation])
        c, s = num_float(self.cos_t), num_float(self.sin_t)
        R = np.array([[c, -s], [s, c]])
        return num_float(self.scale) * ((P - t) @ R.T)

    def eval_many(self, P):
        return self.base.eval_many(self._forward_float(P))

    def subdiff(self, x, diag=None) -> SubVal:
        sv = self.base.subdiff(self._forward(x), diag=diag)
        if sv.empty:
            return EMPTY_SUBVAL
        return subval(
            points=[self._adjoint(p) for p in sv.points],
            rays=[self._adjoint(r) for r in sv.rays],
        )

    def _substitute_rows(self, pieces):
        out = []
        t = self.translation
        c, s, sc = self.cos_t, self.sin_t, self.scale
        m00, m01 = sc * c, -(sc * s)
        m10, m11 = sc * s, sc * c
        for rows in pieces:
            new_rows = []
            for kind, a, b in rows:
                a0 = to_exact(a[0])
                a1 = to_exact(a[1])
                c0 = a0 * m00 + a1 * m10
                c1 = a0 * m01 + a1 * m11
                rhs = to_exact(b) + c0 * t[0] + c1 * t[1]
                new_rows.append((kind, (c0, c1), rhs))
            out.append(new_rows)
        return out

    def _dom_subdiff_pieces(self):
        return self._substitute_rows(self.base._dom_subdiff_pieces())

    def _domain_pieces(self):
        return self._substitute_rows(self.base._domain_pieces())

    def conjugate(self, xstar):
        # h = g∘A with A(x) = M(x - t), M = cR:  h*(y) = g*((1/c) R y) + <y, t>
        y = _exact_vec(xstar)
        c, s = self.cos_t, self.sin_t
        inv = 1 / self.scale
        w = (inv * (c * y[0] - s * y[1]), inv * (s * y[0] + c * y[1]))
        val = self.base.conjugate(w)
        if val == INF:
            return INF
        shift = y[0] * self.translation[0] + y[1] * self.translation[1]
        return _num_add(val, shift)


def precompose(f: ConvexFn, cos_t, sin_t, translation=(0, 0), scale=1) -> Precomposed:
    return Precomposed(f, cos_t, sin_t, translation, scale)


# ---------------------------------------------------------------------------
# sums under the subdifferential sum rule


class SumFn(ConvexFn):
    """f = f1 + ... + fm with ∂f = ∂f1 + ... + ∂fm, valid under the
    constraint qualification with the polyhedral refinement: the relative
    interiors of the non-polyhedral domains and the polyhedral domains
    themselves must intersect."""

    kind = "sum"

    def __init__(self, terms):
        terms = tuple(terms)
        if not terms:
            raise ValueError("need at least one summand")
        dim = terms[0].dim
        for t in terms:
            if t.dim != dim:
                raise ValueError("summand dimension mismatch")
        self.terms = terms
        self.dim = dim
        self._check_cq()

    @property
    def is_polyhedral(self):
        return all(t.is_polyhedral for t in self.terms)

    def _check_cq(self):
        eq, weak, strict = [], [], []
        for t in self.terms:
            d = t.domain()
            if len(d.pieces) != 1:
                raise ValueError("summand domain is not a single convex piece")
            piece = d.pieces[0]
            if not t.is_polyhedral:
                piece = pk.rel_interior_hrep(piece)
            eq += list(piece.eq)
            weak += list(piece.weak)
            strict += list(piece.strict)
        system = HRep(self.dim, tuple(eq), tuple(weak), tuple(strict))
        if pk.strict_feasible(system) is None:
            raise CQViolationError("sum rule constraint qualification failed")

    def eval(self, x):
        total = Fraction(0)
        for t in self.terms:
            v = t.eval(x)
            if v == INF:
                return INF
            total = _num_add(total, v)
        return total

    def eval_many(self, P):
        out = np.zeros(len(P))
        for t in self.terms:
            out = out + t.eval_many(P)
        return out

    def subdiff(self, x, diag=None) -> SubVal:
        acc = None
        for t in self.terms:
            sv = t.subdiff(x, diag=diag)
            if sv.empty:
                return EMPTY_SUBVAL
            acc = sv if acc is None else subval_minkowski(acc, sv)
        return acc

    def dom_subdiff(self) -> NCSet:
        return ns.raw_intersect([t.dom_subdiff() for t in self.terms])

    def domain(self) -> NCSet:
        return ns.raw_intersect([t.domain() for t in self.terms])


def sum_fn(fs) -> SumFn:
    return SumFn(fs)


# ---------------------------------------------------------------------------
# 2D polygon assembler: remove selected boundary edges, keep all vertices


def _unit_inward(a):
    """Exact unit vector along -a (the inward normal of a facet row a.x <= b),
    as a pair of rationals or QE scalars sharing one square root."""
    n2 = Fraction(a[0] * a[0] + a[1] * a[1])
    coef, root = sqrt_decompose(n2)  # |a| = coef*sqrt(root)
    if root == 1:
        return (-a[0] / coef, -a[1] / coef)
    return (QE(0, -a[0] / (coef * root), root), QE(0, -a[1] / (coef * root), root))


def _find_supporting_row(C: HRep, p, direction=None, q=None):
    for a, b in C.weak:
        if sum(a[i] * p[i] for i in range(2)) != b:
            continue
        if q is not None and sum(a[i] * q[i] for i in range(2)) != b:
            continue
        if direction is not None and sum(a[i] * direction[i] for i in range(2)) != 0:
            continue
        return (a, b)
    raise ValueError("selected edge does not lie on a supporting line of the polyhedron")


def _edge_fn_segment(C: HRep, p, q):
    """Precomposed Rockafellar whose excluded open segment is exactly ]p, q[,
    with half-plane domain containing C."""
    d = tuple(q[i] - p[i] for i in range(2))
    a, b = _find_supporting_row(C, p, q=q)
    u = _unit_inward(a)
    # rotation rows: xi1 = <u, x - t>, xi2 = <u_perp, x - t>
    cos_t, sin_t = u[0], -u[1]
    mid = tuple((p[i] + q[i]) / 2 for i in range(2))
    length2 = Fraction(d[0] * d[0] + d[1] * d[1])
    alpha = qe_sqrt(length2) / 2
    return Precomposed(Rockafellar(alpha), cos_t, sin_t, mid, 1)


def _edge_fn_ray(C: HRep, p, v):
    """Precomposed half-strip whose excluded open ray is {p + tau*v : tau > 0},
    with half-plane domain containing C."""
    a, b = _find_supporting_row(C, p, direction=v)
    u = _unit_inward(a)
    cos_t, sin_t = u[0], -u[1]
    det = -(a[0] * v[1] - a[1] * v[0])  # det[u, v] sign
    orientation = 1 if sgn(det) < 0 else -1
    return Precomposed(HalfStrip(0, orientation), cos_t, sin_t, p, 1)


def _edges_of(C: HRep):
    """Dim-1 faces of a 2D polyhedron as ('segment', p, q) / ('ray', p, v) /
    ('line', p, v) descriptors, in canonical face order."""
    out = []
    for f in pk.faces(C):
        if C.dim - len(f.eq) != 1:
            continue
        v = pk.dd_convert(f)
        if v.lineality:
            out.append(("line", v.points[0], v.lineality[0]))
        elif v.rays:
            out.append(("ray", v.points[0], v.rays[0]))
        else:
            out.append(("segment", v.points[0], v.points[1]))
    return out


def assemble_polygon_fn(C: HRep, remove):
    """Build (f, predicted_dom) with dom ∂f = C minus the selected open
    boundary edges (all vertices kept).

    ``remove`` is "all" (every segment/ray edge), a list of edge indices into
    the canonical edge order, or explicit ("segment", p, q) / ("ray", p, v)
    selectors lying in the boundary of C.
    """
    if C.dim != 2:
        raise Not2DError("polygon assembly works in dimension 2")
    C = pk.canonical(C)
    if C == pk.empty_hrep(2) or C.strict:
        raise NotFullDimError("need a nonempty closed polyhedron")
    if C.eq or pk.strict_feasible(HRep(2, (), (), C.weak)) is None:
        raise NotFullDimError("need a polyhedron with nonempty interior")
    edges = _edges_of(C)
    selected = []
    if remove == "all":
        selected = [e for e in edges if e[0] != "line"]
    else:
        for item in remove:
            if isinstance(item, int):
                e = edges[item]
                if e[0] == "line":
                    raise ValueError("a full-line edge has no vertex and cannot be removed")
                selected.append(e)
            else:
                kind, pt, other = item
                pt = pk.asvec(pt)
                other = pk.asvec(other)
                if kind == "segment":
                    if not (pk.contains(C, pt) and pk.contains(C, other)) or pt == other:
                        raise ValueError("segment endpoints must be distinct boundary points of C")
                    selected.append(("segment", pt, other))
                elif kind == "ray":
                    if not pk.contains(C, pt) or not any(other):
                        raise ValueError("ray must start at a boundary point with nonzero direction")
                    rec = pk.recession(C)
                    if not pk.contains(rec, other):
                        raise ValueError("ray direction must be a recession direction of C")
                    selected.append(("ray", pt, other))
                else:
                    raise ValueError(f"unknown edge selector {item!r}")
    fns = [Indicator(C)]
    removed_pieces = []
    for kind, p, other in selected:
        if kind == "segment":
            q = other
            fns.append(_edge_fn_segment(C, p, q))
            a, b = _find_supporting_row(C, p, q=q)
            d = tuple(q[i] - p[i] for i in range(2))
            lo = sum(d[i] * p[i] for i in range(2))
            hi = sum(d[i] * q[i] for i in range(2))
            removed_pieces.append(
                HRep(2, ((a, b),), (), ((tuple(-c for c in d), -lo), (d, hi)))
            )
        else:
            v = other
            fns.append(_edge_fn_ray(C, p, v))
            a, b = _find_supporting_row(C, p, direction=v)
            lo = sum(v[i] * p[i] for i in range(2))
            removed_pieces.append(HRep(2, ((a, b),), (), ((tuple(-c for c in v), -lo),)))
    predicted = ns.canonicalize(
        NCSet(2, tuple(ns.difference_cells([C], removed_pieces)))
    )
    return SumFn(fns), predicted


# ---------------------------------------------------------------------------
# projection onto a finite set


def project_finite(points, x):
    """All nearest points of a finite set (ties returned in full); the induced
    set-valued map x => P_C(x) is monotone."""
    pts = [tuple(p) for p in points]
    if not pts:
        raise EmptySetError("projection onto the empty set")
    exact = all(is_exact(c) for p in pts for c in p) and all(is_exact(c) for c in x)
    if exact:
        x = _exact_vec(x)
        d2 = [sum((p[i] - x[i]) ** 2 for i in range(len(x))) for p in [_exact_vec(p) for p in pts]]
    else:
        xf = [num_float(c) for c in x]
        d2 = [sum((num_float(p[i]) - xf[i]) ** 2 for i in range(len(xf))) for p in pts]
    m = min(d2)
    return [pts[i] for i in range(len(pts)) if d2[i] == m]
