"""Exact decision procedures for difference-bound subsets of Z^2.

A :class:`Region` is a conjunction of integer bounds on ``x``, ``y`` and the
difference ``x - y``; a :class:`RegionSet` is a finite union of regions.  This
is a zone / difference-bound-matrix shape restricted to two variables, which
is exactly the shape of every index set and arrow-target set the model uses.

All arithmetic is exact: coordinates are Python integers (arbitrary
precision) and the infinities are ``float('inf')`` sentinels that are never
combined with each other (shortest-path closure only ever adds a finite
weight to a finite-or-plus-infinite weight).

Emptiness, tightest bounds and finiteness are decided by shortest-path
closure over the three-node constraint graph {0, x, y}, never by enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import InfiniteWindow

POS_INF = float("inf")
NEG_INF = float("-inf")

# Bound values are ints, or exactly one of the two float infinity sentinels
# (-inf only as a lower bound, +inf only as an upper bound).


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _check_lower(v, name: str) -> None:
    if not (_is_int(v) or v == NEG_INF):
        raise ValueError(f"{name} must be an integer or -inf, got {v!r}")


def _check_upper(v, name: str) -> None:
    if not (_is_int(v) or v == POS_INF):
        raise ValueError(f"{name} must be an integer or +inf, got {v!r}")


class _EmptyRegion:
    """Marker for the empty region (no point satisfies the constraints)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Empty"


EMPTY = _EmptyRegion()


@dataclass(frozen=True)
class Region:
    """Conjunction lo_x <= x <= hi_x, lo_y <= y <= hi_y, lo_d <= x-y <= hi_d."""

    lo_x: object = NEG_INF
    hi_x: object = POS_INF
    lo_y: object = NEG_INF
    hi_y: object = POS_INF
    lo_d: object = NEG_INF
    hi_d: object = POS_INF

    def __post_init__(self):
        _check_lower(self.lo_x, "lo_x")
        _check_lower(self.lo_y, "lo_y")
        _check_lower(self.lo_d, "lo_d")
        _check_upper(self.hi_x, "hi_x")
        _check_upper(self.hi_y, "hi_y")
        _check_upper(self.hi_d, "hi_d")

    def __repr__(self) -> str:
        def fmt(lo, hi):
            l = "-inf" if lo == NEG_INF else str(lo)
            h = "inf" if hi == POS_INF else str(hi)
            return f"[{l},{h}]"

        return (
            f"Region(x={fmt(self.lo_x, self.hi_x)}, y={fmt(self.lo_y, self.hi_y)},"
            f" d={fmt(self.lo_d, self.hi_d)})"
        )


RegionLike = "Region | _EmptyRegion"

FULL = Region()


def box(lo_x, hi_x, lo_y, hi_y) -> Region:
    """Axis-aligned product [lo_x, hi_x] x [lo_y, hi_y] (no diff constraint)."""
    return Region(lo_x=lo_x, hi_x=hi_x, lo_y=lo_y, hi_y=hi_y)


def point(x: int, y: int) -> Region:
    return Region(lo_x=x, hi_x=x, lo_y=y, hi_y=y)


def member(r, p: tuple) -> bool:
    """True iff p satisfies all six bounds of r."""
    if r is EMPTY:
        return False
    x, y = p
    return (
        r.lo_x <= x <= r.hi_x
        and r.lo_y <= y <= r.hi_y
        and r.lo_d <= x - y <= r.hi_d
    )


def close(r):
    """Tightest equivalent bounds, or EMPTY if the denotation is empty.

    Shortest-path (Floyd-Warshall) closure of the constraint graph on the
    nodes (0, x, y), where an edge u -> v of weight c encodes u - v <= c.
    """
    if r is EMPTY:
        return EMPTY
    # d[i][j]: tightest known upper bound on var_i - var_j; var_0 == 0.
    d = [
        [0, -r.lo_x, -r.lo_y],
        [r.hi_x, 0, r.hi_d],
        [r.hi_y, -r.lo_d, 0],
    ]
    for k in range(3):
        for i in range(3):
            dik = d[i][k]
            if dik == POS_INF:
                continue
            for j in range(3):
                w = dik + d[k][j]
                if w < d[i][j]:
                    d[i][j] = w
    if d[0][0] < 0 or d[1][1] < 0 or d[2][2] < 0:
        return EMPTY

    def neg(v):
        return POS_INF if v == NEG_INF else (NEG_INF if v == POS_INF else -v)

    return Region(
        lo_x=neg(d[0][1]),
        hi_x=d[1][0],
        lo_y=neg(d[0][2]),
        hi_y=d[2][0],
        lo_d=neg(d[2][1]),
        hi_d=d[1][2],
    )


def is_finite(r) -> bool:
    """True iff the denotation is a finite subset of Z^2."""
    if r is EMPTY:
        return True
    c = close(r)
    if c is EMPTY:
        return True
    return (
        c.lo_x != NEG_INF
        and c.hi_x != POS_INF
        and c.lo_y != NEG_INF
        and c.hi_y != POS_INF
    )


def intersect(a, b):
    """Bound-wise meet followed by closure; EMPTY when the meet is empty."""
    if a is EMPTY or b is EMPTY:
        return EMPTY
    return close(
        Region(
            lo_x=max(a.lo_x, b.lo_x),
            hi_x=min(a.hi_x, b.hi_x),
            lo_y=max(a.lo_y, b.lo_y),
            hi_y=min(a.hi_y, b.hi_y),
            lo_d=max(a.lo_d, b.lo_d),
            hi_d=min(a.hi_d, b.hi_d),
        )
    )


@dataclass(frozen=True)
class RegionSet:
    """Finite union of regions.  No canonical form; pieces may be empty-free."""

    regions: tuple = ()

    def __post_init__(self):
        object.__setattr__(
            self, "regions", tuple(r for r in self.regions if r is not EMPTY)
        )

    def member(self, p: tuple) -> bool:
        return any(member(r, p) for r in self.regions)

    def is_finite(self) -> bool:
        return all(is_finite(r) for r in self.regions)

    def is_empty(self) -> bool:
        return all(close(r) is EMPTY for r in self.regions)

    def __iter__(self) -> Iterator[Region]:
        return iter(self.regions)

    def __len__(self) -> int:
        return len(self.regions)


# The six constraint slots of a region, as (attribute, is_lower) pairs.
_SLOTS = (
    ("lo_x", True),
    ("hi_x", False),
    ("lo_y", True),
    ("hi_y", False),
    ("lo_d", True),
    ("hi_d", False),
)


def subtract(a, b) -> RegionSet:
    """Set difference a \\ b as a union of at most six pairwise disjoint regions.

    Piece k keeps the first k-1 constraints of b and violates the k-th
    (not(v >= lo) <=> v <= lo-1, not(v <= hi) <=> v >= hi+1), so the pieces
    are disjoint by construction and cardinalities add up.
    """
    if a is EMPTY:
        return RegionSet(())
    a = close(a)
    if a is EMPTY:
        return RegionSet(())
    if b is EMPTY:
        return RegionSet((a,))
    pieces = []
    kept: dict = {}
    for slot, is_lower in _SLOTS:
        value = getattr(b, slot)
        if (is_lower and value == NEG_INF) or (not is_lower and value == POS_INF):
            continue  # constraint is vacuous, complement is empty
        constraint = dict(kept)
        if is_lower:
            nslot, nval = slot.replace("lo", "hi"), value - 1
            constraint[nslot] = min(constraint.get(nslot, POS_INF), nval)
        else:
            nslot, nval = slot.replace("hi", "lo"), value + 1
            constraint[nslot] = max(constraint.get(nslot, NEG_INF), nval)
        piece = intersect(a, Region(**constraint))
        if piece is not EMPTY:
            pieces.append(piece)
        kept[slot] = value
    return RegionSet(tuple(pieces))


def regionset_subtract(rs: RegionSet, b) -> RegionSet:
    """Subtract one region from every piece of a union."""
    out = []
    for r in rs:
        out.extend(subtract(r, b).regions)
    return RegionSet(tuple(out))


def regionset_contains(inner: RegionSet, outer: RegionSet) -> bool:
    """True iff the denotation of inner is a subset of the denotation of outer."""
    remaining = inner
    for r in outer:
        remaining = regionset_subtract(remaining, r)
    return remaining.is_empty()


def enumerate_points(r, window) -> list:
    """Sorted list of all points of r inside the (finite) window region."""
    if not is_finite(window):
        raise InfiniteWindow(f"window is not finite: {window!r}")
    if r is EMPTY or window is EMPTY:
        return []
    w = close(window)
    if w is EMPTY:
        return []
    pts = []
    for x in range(int(w.lo_x), int(w.hi_x) + 1):
        for y in range(int(w.lo_y), int(w.hi_y) + 1):
            p = (x, y)
            if member(w, p) and member(r, p):
                pts.append(p)
    return pts


def _bound_to_json(v):
    if v == POS_INF:
        return "inf"
    if v == NEG_INF:
        return "-inf"
    return v


def _bound_from_json(v):
    if v == "inf":
        return POS_INF
    if v == "-inf":
        return NEG_INF
    return int(v)


def region_to_json(r) -> dict:
    """Textual form {"x":[lo,hi],"y":[lo,hi],"diff":[lo,hi]} with inf sentinels."""
    if r is EMPTY:
        return {"empty": True}
    return {
        "x": [_bound_to_json(r.lo_x), _bound_to_json(r.hi_x)],
        "y": [_bound_to_json(r.lo_y), _bound_to_json(r.hi_y)],
        "diff": [_bound_to_json(r.lo_d), _bound_to_json(r.hi_d)],
    }


def region_from_json(d: dict):
    if d.get("empty"):
        return EMPTY
    return Region(
        lo_x=_bound_from_json(d["x"][0]),
        hi_x=_bound_from_json(d["x"][1]),
        lo_y=_bound_from_json(d["y"][0]),
        hi_y=_bound_from_json(d["y"][1]),
        lo_d=_bound_from_json(d["diff"][0]),
        hi_d=_bound_from_json(d["diff"][1]),
    )
