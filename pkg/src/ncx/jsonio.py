"""JSON schemas for sets, maps, and function specs.

Rationals are encoded as "p/q" strings (or "p" for integers) so exactness
survives the round trip; Q(sqrt(n)) scalars serialize as
{"a": "p/q", "b": "p/q", "root": n} meaning a + b*sqrt(root).  Angles of
precompositions are stored as exact (cos, sin) pairs, never radians.
``canonical_json`` emits a deterministic byte stream for golden-file tests.
"""

from __future__ import annotations

import json
from fractions import Fraction

from ncx import subdiff as sd
from ncx.ncset import NCSet
from ncx.polykernel import HRep, LinMap, VRep
from ncx.qext import QE


def qstr(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_q(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    return Fraction(str(s))


def scalar_to_json(x):
    if isinstance(x, QE) and not x.is_rational:
        return {"a": qstr(x.a), "b": qstr(x.b), "root": x.n}
    if isinstance(x, QE):
        return qstr(x.as_fraction())
    return qstr(x)


def parse_scalar(obj):
    if isinstance(obj, dict):
        return QE(parse_q(obj["a"]), parse_q(obj["b"]), int(obj["root"]))
    return parse_q(obj)


def _row_to_json(row):
    a, b = row
    return {"a": [qstr(c) for c in a], "b": qstr(b)}


def _parse_row(obj):
    return (tuple(parse_q(c) for c in obj["a"]), parse_q(obj["b"]))


def hrep_to_json(h: HRep, with_dim: bool = True) -> dict:
    out = {
        "eq": [_row_to_json(r) for r in h.eq],
        "le": [_row_to_json(r) for r in h.weak],
        "lt": [_row_to_json(r) for r in h.strict],
    }
    if with_dim:
        out["dim"] = h.dim
    return out


def parse_hrep(obj, dim=None) -> HRep:
    d = obj.get("dim", dim)
    if d is None:
        raise ValueError("missing dimension")
    return HRep(
        int(d),
        tuple(_parse_row(r) for r in obj.get("eq", [])),
        tuple(_parse_row(r) for r in obj.get("le", [])),
        tuple(_parse_row(r) for r in obj.get("lt", [])),
    )


def vrep_to_json(v: VRep) -> dict:
    return {
        "dim": v.dim,
        "points": [[qstr(c) for c in p] for p in v.points],
        "rays": [[qstr(c) for c in r] for r in v.rays],
        "lineality": [[qstr(c) for c in l] for l in v.lineality],
    }


def parse_vrep(obj) -> VRep:
    conv = lambda rows: tuple(tuple(parse_q(c) for c in r) for r in rows)
    return VRep(int(obj["dim"]), conv(obj.get("points", [])), conv(obj.get("rays", [])), conv(obj.get("lineality", [])))


def ncset_to_json(e: NCSet) -> dict:
    return {
        "dim": e.dim,
        "pieces": [hrep_to_json(p, with_dim=False) for p in e.pieces],
    }


def parse_ncset(obj) -> NCSet:
    dim = int(obj["dim"])
    return NCSet(dim, tuple(parse_hrep(p, dim=dim) for p in obj.get("pieces", [])))


def linmap_to_json(A: LinMap) -> dict:
    out = {"matrix": [[qstr(c) for c in row] for row in A.matrix]}
    if A.offset is not None:
        out["offset"] = [qstr(c) for c in A.offset]
    return out


def parse_linmap(obj) -> LinMap:
    mat = tuple(tuple(parse_q(c) for c in row) for row in obj["matrix"])
    off = tuple(parse_q(c) for c in obj["offset"]) if obj.get("offset") else None
    return LinMap(mat, off)


# ---------------------------------------------------------------------------
# function specs


def fn_to_json(f: sd.ConvexFn) -> dict:
    k = f.kind
    if k == "indicator":
        return {"kind": k, "set": hrep_to_json(f.P)}
    if k == "support":
        return {"kind": k, "set": hrep_to_json(f.P)}
    if k == "gauge_recip":
        return {"kind": k, "set": hrep_to_json(f.C), "x0": [qstr(c) for c in f.x0]}
    if k == "interval1d":
        return {
            "kind": k,
            "interval": f.interval_kind,
            "a": None if f.a is None else scalar_to_json(f.a),
            "b": None if f.b is None else scalar_to_json(f.b),
            "closed_side": f.closed_side,
        }
    if k == "rockafellar":
        return {"kind": k, "alpha": scalar_to_json(f.alpha)}
    if k == "halfstrip":
        return {"kind": k, "alpha": scalar_to_json(f.alpha), "orientation": f.orientation}
    if k == "precomposed":
        return {
            "kind": k,
            "base": fn_to_json(f.base),
            "cos": scalar_to_json(f.cos_t),
            "sin": scalar_to_json(f.sin_t),
            "translation": [qstr(c) for c in f.translation],
            "scale": scalar_to_json(f.scale),
        }
    if k == "sum":
        return {"kind": k, "terms": [fn_to_json(t) for t in f.terms]}
    raise ValueError(f"unknown function kind {k!r}")


def parse_fn(obj) -> sd.ConvexFn:
    k = obj["kind"]
    if k == "indicator":
        return sd.Indicator(parse_hrep(obj["set"]))
    if k == "support":
        return sd.SupportFn(parse_hrep(obj["set"]))
    if k == "gauge_recip":
        return sd.GaugeRecip(parse_hrep(obj["set"]), tuple(parse_q(c) for c in obj["x0"]))
    if k == "interval1d":
        return sd.Interval1d(
            obj["interval"],
            None if obj.get("a") is None else parse_scalar(obj["a"]),
            None if obj.get("b") is None else parse_scalar(obj["b"]),
            obj.get("closed_side", "right"),
        )
    if k == "rockafellar":
        return sd.Rockafellar(parse_scalar(obj["alpha"]))
    if k == "halfstrip":
        return sd.HalfStrip(parse_scalar(obj["alpha"]), int(obj.get("orientation", 1)))
    if k == "precomposed":
        return sd.Precomposed(
            parse_fn(obj["base"]),
            parse_scalar(obj["cos"]),
            parse_scalar(obj["sin"]),
            tuple(parse_q(c) for c in obj.get("translation", (0, 0))),
            parse_scalar(obj.get("scale", "1")),
        )
    if k == "sum":
        return sd.SumFn([parse_fn(t) for t in obj["terms"]])
    raise ValueError(f"unknown function kind {k!r}")


def subval_to_json(s: sd.SubVal) -> dict:
    def num(c):
        if isinstance(c, float):
            return float(c)
        return scalar_to_json(c)

    return {
        "empty": s.empty,
        "points": [[num(c) for c in p] for p in s.points],
        "rays": [[num(c) for c in r] for r in s.rays],
    }


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def pretty_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
