"""Deterministic SVG rendering of two-dimensional piece unions.

Closed boundary parts are drawn solid, excluded (open) boundary parts dashed,
kept isolated points and kept vertices as filled dots (radius >= 2px).
Identical input data yields byte-identical SVG text.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ncx import ncset as ns
from ncx import polykernel as pk
from ncx.errors import Not2DError
from ncx.ncset import NCSet


@dataclass(frozen=True)
class FigureSpec:
    viewport: tuple = (-4, 4, -3, 3)
    width: int = 480
    fill: str = "#8db8e8"
    fill_opacity: str = "0.45"
    stroke: str = "#1a3a5c"
    stroke_width: str = "2"
    dash: str = "7,6"
    dot_radius: float = 3.0
    background: str = "#ffffff"


def _clip_to_viewport(h, spec: FigureSpec):
    xmin, xmax, ymin, ymax = (Fraction(v) for v in spec.viewport)
    rows = list(h.weak) + [
        ((Fraction(1), Fraction(0)), xmax),
        ((Fraction(-1), Fraction(0)), -xmin),
        ((Fraction(0), Fraction(1)), ymax),
        ((Fraction(0), Fraction(-1)), -ymin),
    ]
    return pk.canonical(pk.HRep(2, h.eq, tuple(rows), ()))


def _on_frame(p, spec: FigureSpec) -> bool:
    xmin, xmax, ymin, ymax = (Fraction(v) for v in spec.viewport)
    return p[0] in (xmin, xmax) or p[1] in (ymin, ymax)


def _ordered_vertices(points):
    if len(points) <= 2:
        return list(points)
    cx = sum(float(p[0]) for p in points) / len(points)
    cy = sum(float(p[1]) for p in points) / len(points)
    return sorted(points, key=lambda p: math.atan2(float(p[1]) - cy, float(p[0]) - cx))


class _Canvas:
    def __init__(self, spec: FigureSpec):
        xmin, xmax, ymin, ymax = (float(v) for v in spec.viewport)
        self.spec = spec
        self.sx = spec.width / (xmax - xmin)
        self.height = int(round(spec.width * (ymax - ymin) / (xmax - xmin)))
        self.xmin, self.ymax = xmin, ymax
        self.elems = []

    def pt(self, p):
        x = (float(p[0]) - self.xmin) * self.sx
        y = (self.ymax - float(p[1])) * self.sx
        return f"{x:.2f},{y:.2f}"

    def polygon(self, pts):
        s = self.spec
        path = " ".join(self.pt(p) for p in pts)
        self.elems.append(f'<polygon points="{path}" fill="{s.fill}" fill-opacity="{s.fill_opacity}" stroke="none"/>')

    def line(self, a, b, dashed: bool):
        s = self.spec
        dash = f' stroke-dasharray="{s.dash}"' if dashed else ""
        self.elems.append(
            f'<line x1="{self.pt(a).split(",")[0]}" y1="{self.pt(a).split(",")[1]}" '
            f'x2="{self.pt(b).split(",")[0]}" y2="{self.pt(b).split(",")[1]}" '
            f'stroke="{s.stroke}" stroke-width="{s.stroke_width}"{dash}/>'
        )

    def dot(self, p):
        s = self.spec
        x, y = self.pt(p).split(",")
        self.elems.append(f'<circle cx="{x}" cy="{y}" r="{s.dot_radius:.1f}" fill="{s.stroke}"/>')

    def text(self) -> str:
        s = self.spec
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{s.width}" height="{self.height}" '
            f'viewBox="0 0 {s.width} {self.height}">\n'
            f'<rect width="{s.width}" height="{self.height}" fill="{s.background}"/>\n'
        )
        return head + "\n".join(self.elems) + "\n</svg>\n"


def render_svg(e: NCSet, spec: FigureSpec = FigureSpec()) -> str:
    """Render a union of pieces; open boundary parts dashed, kept vertices and
    isolated points as filled dots."""
    if e.dim != 2:
        raise Not2DError("SVG rendering is two-dimensional")
    canvas = _Canvas(spec)
    for piece in ns.canonicalize(e).pieces:
        clipped = _clip_to_viewport(pk.closure_hrep(piece), spec)
        if clipped == pk.empty_hrep(2):
            continue
        v = pk.dd_convert(clipped)
        d = 2 - len(clipped.eq)
        if d == 0:
            canvas.dot(v.points[0])
            continue
        if d == 1:
            pts = _ordered_vertices(v.points)
            if len(pts) == 2:
                canvas.line(pts[0], pts[1], dashed=False)
            for p in pts:
                if not _on_frame(p, spec) and pk.contains(piece, p):
                    canvas.dot(p)
            continue
        pts = _ordered_vertices(v.points)
        canvas.polygon(pts)
        edge_flags = []
        for i in range(len(pts)):
            a, b = pts[i], pts[(i + 1) % len(pts)]
            mid = tuple((a[k] + b[k]) / 2 for k in range(2))
            if _on_frame(mid, spec):
                edge_flags.append(None)
                continue
            solid = pk.contains(piece, mid)
            canvas.line(a, b, dashed=not solid)
            edge_flags.append(solid)
        for i, p in enumerate(pts):
            adjacent = [edge_flags[i - 1], edge_flags[i]]
            if _on_frame(p, spec) or not pk.contains(piece, p):
                continue
            if any(flag is False for flag in adjacent):
                canvas.dot(p)
    return canvas.text()
