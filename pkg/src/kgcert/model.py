"""Coordinate model of the perfect-complex category for a parameter triple.

Objects are vertices tagged by family (X, Y, Z), a cyclic orbit index, and a
point of Z^2; each vertex carries finitely many outgoing-arrow *fans*: per
(target family, target orbit, degree) one difference-bound region of target
coordinates.  Hom spaces have the arrows plus identities as basis, and the
composite of two basis arrows is the unique arrow with the summed degree and
the composed endpoints when that arrow exists, and zero otherwise.  No scalar
arithmetic is needed anywhere: all relations are monomial with coefficient 1,
so images and dimensions are basis-subset combinatorics.

Two modes share this module.  When r < n there are three families and degrees
{0, 1, 2}; degree-1 arrows connect X/Y to Z within an orbit, degree-1 arrows
out of Z and all degree-2 arrows raise the orbit by one (mod r).  When r == n
only the X family exists, with degrees {0, 1}, and degree-1 arrows raise the
orbit (mod n).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import regions
from .errors import InvalidVertex, NotComposable
from .presentation import GentleTriple
from .regions import Region

FAMILY_X = "X"
FAMILY_Y = "Y"
FAMILY_Z = "Z"

_FINITE_FAMILIES = (FAMILY_X, FAMILY_Y, FAMILY_Z)
_INFINITE_FAMILIES = (FAMILY_X,)


def families(t: GentleTriple) -> tuple:
    return _FINITE_FAMILIES if t.is_finite_mode else _INFINITE_FAMILIES


@dataclass(frozen=True)
class VertexId:
    family: str
    orbit: int
    coord: tuple

    def __str__(self) -> str:
        a, b = self.coord
        return f"{self.family}:{self.orbit}:({a},{b})"


@dataclass(frozen=True)
class ZeroMorphism:
    def __str__(self) -> str:
        return "zero"


ZERO = ZeroMorphism()


@dataclass(frozen=True)
class IdentityMorphism:
    vertex: VertexId

    def __str__(self) -> str:
        return f"id@{self.vertex}"


@dataclass(frozen=True)
class ArrowMorphism:
    src: VertexId
    dst: VertexId
    degree: int

    def __str__(self) -> str:
        return f"{self.src}->{self.dst}@{self.degree}"


# MorphismKey = ZeroMorphism | IdentityMorphism | ArrowMorphism


@dataclass(frozen=True)
class FanEntry:
    family: str
    orbit: int
    degree: int
    region: Region
    excludes_src: bool = False


@dataclass(frozen=True)
class ArrowFan:
    src: VertexId
    entries: tuple


def index_region(t: GentleTriple, family: str, orbit: int) -> Region:
    """The coordinate constraint a vertex of this family and orbit satisfies."""
    d0 = 1 if orbit == 0 else 0
    if not t.is_finite_mode:
        if family != FAMILY_X:
            raise InvalidVertex(f"family {family} does not exist when r == n")
        return Region(hi_d=d0 * t.m)  # a <= b + [i=0] m
    if family == FAMILY_X:
        return Region(hi_d=d0 * t.m)  # a <= b + [i=0] m
    if family == FAMILY_Y:
        return Region(hi_d=-d0 * t.n)  # a + [i=0] n <= b
    if family == FAMILY_Z:
        return regions.FULL
    raise InvalidVertex(f"unknown family {family!r}")


def vertex_valid(t: GentleTriple, v: VertexId) -> bool:
    if v.family not in families(t):
        return False
    if not 0 <= v.orbit < t.orbit_count:
        return False
    return regions.member(index_region(t, v.family, v.orbit), v.coord)


@lru_cache(maxsize=65536)
def _fan_entries(t: GentleTriple, v: VertexId) -> tuple:
    a, b = v.coord
    i = v.orbit
    m, n = t.m, t.n
    d0 = 1 if i == 0 else 0
    if not t.is_finite_mode:
        dn = 1 if i == t.n - 1 else 0
        nxt = (i + 1) % t.n
        return (
            FanEntry(FAMILY_X, i, 0, regions.box(a, b + d0 * m, b, regions.POS_INF), True),
            FanEntry(FAMILY_X, nxt, 1, regions.box(regions.NEG_INF, a + dn * m, a, b + d0 * m)),
        )
    dr = 1 if i == t.r - 1 else 0
    nxt = (i + 1) % t.r
    if v.family == FAMILY_X:
        return (
            FanEntry(FAMILY_X, i, 0, regions.box(a, b + d0 * m, b, regions.POS_INF), True),
            FanEntry(FAMILY_Z, i, 1, regions.box(a, b + d0 * m, regions.NEG_INF, regions.POS_INF)),
            FanEntry(FAMILY_X, nxt, 2, regions.box(regions.NEG_INF, a + dr * m, a, b + d0 * m)),
        )
    if v.family == FAMILY_Y:
        return (
            FanEntry(FAMILY_Y, i, 0, regions.box(a, b - d0 * n, b, regions.POS_INF), True),
            FanEntry(FAMILY_Z, i, 1, regions.box(regions.NEG_INF, regions.POS_INF, a, b - d0 * n)),
            FanEntry(FAMILY_Y, nxt, 2, regions.box(regions.NEG_INF, a - dr * n, a, b - d0 * n)),
        )
    # Z family
    return (
        FanEntry(FAMILY_Z, i, 0, regions.box(a, regions.POS_INF, b, regions.POS_INF), True),
        FanEntry(FAMILY_X, nxt, 1, regions.box(regions.NEG_INF, a + dr * m, a, regions.POS_INF)),
        FanEntry(FAMILY_Y, nxt, 1, regions.box(regions.NEG_INF, b - dr * n, b, regions.POS_INF)),
        FanEntry(FAMILY_Z, nxt, 2, regions.box(regions.NEG_INF, a + dr * m, regions.NEG_INF, b - dr * n)),
    )


def arrow_fan(t: GentleTriple, v: VertexId) -> ArrowFan:
    if not vertex_valid(t, v):
        raise InvalidVertex(f"not a vertex of the model: {v}")
    return ArrowFan(v, _fan_entries(t, v))


def arrow_exists(t: GentleTriple, src: VertexId, dst: VertexId, degree: int) -> bool:
    """True iff there is a (unique) basis arrow src -> dst of this degree."""
    if not (vertex_valid(t, src) and vertex_valid(t, dst)):
        return False
    for e in _fan_entries(t, src):
        if e.family == dst.family and e.orbit == dst.orbit and e.degree == degree:
            if e.excludes_src and dst == src:
                return False
            return regions.member(e.region, dst.coord)
    return False


def arrow_or_zero(t: GentleTriple, src: VertexId, dst: VertexId, degree: int):
    """The basis arrow when it exists, else the zero morphism.

    This realises the convention that a named map to an out-of-range target
    denotes the zero morphism.
    """
    if arrow_exists(t, src, dst, degree):
        return ArrowMorphism(src, dst, degree)
    return ZERO


def hom_basis(t: GentleTriple, u: VertexId, v: VertexId) -> list:
    """Basis of Hom(u, v): the identity (if u == v) then arrows by degree."""
    if not vertex_valid(t, u):
        raise InvalidVertex(f"not a vertex of the model: {u}")
    if not vertex_valid(t, v):
        raise InvalidVertex(f"not a vertex of the model: {v}")
    basis = []
    if u == v:
        basis.append(IdentityMorphism(u))
    for d in range(t.max_degree + 1):
        if arrow_exists(t, u, v, d):
            basis.append(ArrowMorphism(u, v, d))
    return basis


def source_of(k):
    if isinstance(k, IdentityMorphism):
        return k.vertex
    if isinstance(k, ArrowMorphism):
        return k.src
    return None


def target_of(k):
    if isinstance(k, IdentityMorphism):
        return k.vertex
    if isinstance(k, ArrowMorphism):
        return k.dst
    return None


def compose(t: GentleTriple, g, f):
    """The composite g o f (f first).

    Zero absorbs.  Identities are neutral when the endpoint matches.  For two
    arrows the composite is the unique arrow with the summed degree between
    the outer endpoints if that arrow exists, and zero otherwise.
    """
    if isinstance(f, ZeroMorphism) or isinstance(g, ZeroMorphism):
        return ZERO
    if isinstance(f, IdentityMorphism):
        if source_of(g) != f.vertex:
            raise NotComposable(f"cannot compose {g} after {f}")
        return g
    if isinstance(g, IdentityMorphism):
        if target_of(f) != g.vertex:
            raise NotComposable(f"cannot compose {g} after {f}")
        return f
    if f.dst != g.src:
        raise NotComposable(f"cannot compose {g} after {f}")
    return arrow_or_zero(t, f.src, g.dst, f.degree + g.degree)


def ar_sink_maps(t: GentleTriple, v: VertexId):
    """The two degree-0 maps v -> v+(1,0) and v -> v+(0,1).

    Each is replaced by the zero morphism when the shifted coordinate leaves
    the family's index set; the surviving pair generates the denominator of
    the simple quotient attached to v.
    """
    if not vertex_valid(t, v):
        raise InvalidVertex(f"not a vertex of the model: {v}")
    a, b = v.coord
    out = []
    for coord in ((a + 1, b), (a, b + 1)):
        w = VertexId(v.family, v.orbit, coord)
        out.append(arrow_or_zero(t, v, w, 0))
    return tuple(out)


def vertices_in_box(t: GentleTriple, x0: int, x1: int, y0: int, y1: int) -> list:
    """All valid vertices with coordinates in [x0,x1] x [y0,y1], ordered."""
    out = []
    for family in families(t):
        for orbit in range(t.orbit_count):
            reg = index_region(t, family, orbit)
            for x in range(x0, x1 + 1):
                for y in range(y0, y1 + 1):
                    if regions.member(reg, (x, y)):
                        out.append(VertexId(family, orbit, (x, y)))
    return out
