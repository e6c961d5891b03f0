"""Bundled worked examples: the classic counterexample sets and the polygon
domain with removed edges, with their expected (golden) values constructed
independently of the code paths under test.  Shared by the CLI ``reproduce``
targets and the acceptance suite.
"""

from __future__ import annotations

from fractions import Fraction

from ncx import ncset as ns
from ncx import polykernel as pk
from ncx import subdiff as sd
from ncx.ncset import NCSet
from ncx.polykernel import HRep


def point2(x, y) -> HRep:
    return pk.hrep(2, eq=[((1, 0), x), ((0, 1), y)])


def strip_vertices_set() -> NCSet:
    """{-1 < x1 < 1, x2 > 0} with the two boundary points (±1, 0) kept: the
    standard nearly convex set whose doubling differs from its self-sum."""
    strip = pk.hrep(2, strict=[((1, 0), 1), ((-1, 0), 1), ((0, -1), 0)])
    return ns.ncset(2, [strip, point2(-1, 0), point2(1, 0)])


def strip_vertices_sum_golden() -> NCSet:
    """2C ∪ {(0,0)} for the strip-with-vertices set C."""
    doubled = ns.nc_scale(strip_vertices_set(), 2)
    return ns.canonicalize(NCSet(2, doubled.pieces + (point2(0, 0),)))


def halfplane_slit_set(side: int = 1) -> NCSet:
    """{side*x1 >= 0} minus the open boundary slit {(0, x2): |x2| < 1}."""
    s = Fraction(side)
    return ns.ncset(
        2,
        [
            pk.hrep(2, strict=[((-s, 0), 0)]),
            pk.hrep(2, eq=[((1, 0), 0)], weak=[((0, -1), -1)]),
            pk.hrep(2, eq=[((1, 0), 0)], weak=[((0, 1), -1)]),
        ],
    )


def two_rays_set() -> NCSet:
    """{(0, x2): |x2| >= 1}: two closed vertical rays; not nearly convex."""
    return ns.ncset(
        2,
        [
            pk.hrep(2, eq=[((1, 0), 0)], weak=[((0, -1), -1)]),
            pk.hrep(2, eq=[((1, 0), 0)], weak=[((0, 1), -1)]),
        ],
    )


def strip_recession_set() -> NCSet:
    """[-1,1] × R minus the open segments {x1 = ±1, -1 < x2 < 1}: unbounded
    and nearly convex with rec E = {0} but rec(cl E) = {0} × R."""
    pieces = [pk.hrep(2, strict=[((1, 0), 1), ((-1, 0), 1)])]
    for s in (1, -1):
        for t in (1, -1):
            pieces.append(pk.hrep(2, eq=[((1, 0), s)], weak=[((0, -t), -1)]))
    return ns.ncset(2, pieces)


def halfplane_origin_set() -> NCSet:
    """{x1 > 0} ∪ {(0,0)}: a polyhedral set showing rec E strictly smaller
    than rec(cl E) while the span condition holds."""
    return ns.ncset(2, [pk.hrep(2, strict=[((-1, 0), 0)]), point2(0, 0)])


def rockafellar_dom_golden(alpha) -> NCSet:
    """{ξ1 > 0} ∪ {0} × {|ξ2| >= α}, the nonconvex subdifferential domain."""
    a = Fraction(alpha)
    return ns.ncset(
        2,
        [
            pk.hrep(2, strict=[((-1, 0), 0)]),
            pk.hrep(2, eq=[((1, 0), 0)], weak=[((0, -1), -a)]),
            pk.hrep(2, eq=[((1, 0), 0)], weak=[((0, 1), -a)]),
        ],
    )


def halfstrip_dom_golden(alpha) -> NCSet:
    """{x1 >= 0} minus {(0, x2): x2 < α}: neither open nor closed, convex."""
    a = Fraction(alpha)
    return ns.ncset(
        2,
        [
            pk.hrep(2, strict=[((-1, 0), 0)]),
            pk.hrep(2, eq=[((1, 0), 0)], weak=[((0, -1), -a)]),
        ],
    )


def ncpolygon_polyhedron() -> HRep:
    """The quadrilateral conv{(1,1), (-1,1), (3,-1), (-3,-1)}."""
    return pk.vrep_to_hrep(pk.vrep(2, points=[(1, 1), (-1, 1), (3, -1), (-3, -1)]))


def ncpolygon_golden() -> NCSet:
    """The open quadrilateral {|x|<3, |y|<1, 2+x-y>0, 2-x-y>0} together with
    its four kept vertices."""
    open_piece = pk.hrep(
        2,
        strict=[
            ((1, 0), 3),
            ((-1, 0), 3),
            ((0, 1), 1),
            ((0, -1), 1),
            ((-1, 1), 2),
            ((1, 1), 2),
        ],
    )
    return ns.canonicalize(
        NCSet(
            2,
            (
                open_piece,
                point2(1, 1),
                point2(-1, 1),
                point2(3, -1),
                point2(-3, -1),
            ),
        )
    )


def ncpolygon_assembled():
    """(f, predicted_dom) with every edge of the quadrilateral removed."""
    return sd.assemble_polygon_fn(ncpolygon_polyhedron(), "all")
