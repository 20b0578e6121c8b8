"""Vertices, arrow fans, hom bases, and the monomial composition rule."""

import pytest

from kgcert import model as M
from kgcert import regions as R
from kgcert.engine import WindowEngine
from kgcert.errors import InvalidVertex, NotComposable
from kgcert.model import ArrowMorphism, IdentityMorphism, VertexId, ZERO
from kgcert.presentation import validate_triple

from conftest import ACCEPTANCE_TRIPLES


def V(fam, orbit, a, b):
    return VertexId(fam, orbit, (a, b))


# -- vertex validity -------------------------------------------------------------


def test_vertex_valid_examples(t120):
    assert M.vertex_valid(t120, V("X", 0, 0, 1))
    assert not M.vertex_valid(t120, V("Y", 0, 0, 1))  # needs 0 + 2 <= 1
    assert M.vertex_valid(t120, V("Z", 0, 17, -4))
    assert not M.vertex_valid(t120, V("X", 1, 0, 1))  # orbit out of range


def test_infinite_mode_has_only_x(t110):
    assert M.vertex_valid(t110, V("X", 0, 0, 0))
    assert not M.vertex_valid(t110, V("Y", 0, 0, 5))
    assert not M.vertex_valid(t110, V("Z", 0, 0, 0))


# -- arrow fans -------------------------------------------------------------------


def test_arrow_fan_x_vertex(t120):
    fan = M.arrow_fan(t120, V("X", 0, 0, 1))
    by_key = {(e.family, e.orbit, e.degree): e for e in fan.entries}
    e0 = by_key[("X", 0, 0)]
    assert e0.excludes_src
    assert R.close(e0.region) == R.close(R.box(0, 1, 1, R.POS_INF))
    e1 = by_key[("Z", 0, 1)]
    assert R.close(e1.region) == R.close(R.box(0, 1, R.NEG_INF, R.POS_INF))
    e2 = by_key[("X", 0, 2)]
    assert R.close(e2.region) == R.close(R.box(R.NEG_INF, 0, 0, 1))


def test_arrow_fan_rejects_invalid_vertex(t120):
    with pytest.raises(InvalidVertex):
        M.arrow_fan(t120, V("Y", 0, 0, 1))


@pytest.mark.parametrize("r,n,m", ACCEPTANCE_TRIPLES)
def test_fan_targets_are_valid_vertices(r, n, m):
    """Symbolically: every fan region sits inside the target index set."""
    t = validate_triple(r, n, m)
    for v in M.vertices_in_box(t, -3, 3, -3, 3):
        for e in M.arrow_fan(t, v).entries:
            target_set = M.index_region(t, e.family, e.orbit)
            assert R.subtract(e.region, target_set).is_empty()


@pytest.mark.parametrize("r,n,m", ACCEPTANCE_TRIPLES)
def test_fan_channels_unique(r, n, m):
    """At most one arrow per (source, target, degree): one fan entry per
    (family, orbit, degree) channel."""
    t = validate_triple(r, n, m)
    for v in M.vertices_in_box(t, -2, 2, -2, 2):
        keys = [(e.family, e.orbit, e.degree) for e in M.arrow_fan(t, v).entries]
        assert len(keys) == len(set(keys))


# -- arrow existence and hom bases -------------------------------------------------


def test_arrow_exists_examples(t120):
    x01 = V("X", 0, 0, 1)
    assert M.arrow_exists(t120, x01, V("X", 0, 0, 2), 0)
    assert not M.arrow_exists(t120, x01, x01, 0)  # self-target excluded
    assert M.arrow_exists(t120, x01, x01, 2)


def test_hom_basis_examples(t120):
    x01 = V("X", 0, 0, 1)
    assert [str(k) for k in M.hom_basis(t120, x01, x01)] == [
        "id@X:0:(0,1)",
        "X:0:(0,1)->X:0:(0,1)@2",
    ]
    assert [k.degree for k in M.hom_basis(t120, x01, V("Z", 0, 0, 5))] == [1]
    assert M.hom_basis(t120, V("Z", 0, 0, 0), V("X", 0, 5, 5)) == []


def test_hom_basis_dual_numbers(t110):
    x00 = V("X", 0, 0, 0)
    basis = M.hom_basis(t110, x00, x00)
    assert len(basis) == 2
    assert isinstance(basis[0], IdentityMorphism)
    eps = basis[1]
    assert eps.degree == 1
    assert M.compose(t110, eps, eps) == ZERO


# -- composition --------------------------------------------------------------------


def test_compose_identity_neutral(t120):
    f = ArrowMorphism(V("X", 0, 0, 1), V("X", 0, 0, 2), 0)
    assert M.compose(t120, IdentityMorphism(V("X", 0, 0, 2)), f) == f
    assert M.compose(t120, f, IdentityMorphism(V("X", 0, 0, 1))) == f


def test_compose_through_intermediate(t120):
    f = ArrowMorphism(V("X", 0, 0, 1), V("X", 0, 0, 2), 0)
    g = ArrowMorphism(V("X", 0, 0, 2), V("Z", 0, 0, 5), 1)
    assert M.compose(t120, g, f) == ArrowMorphism(V("X", 0, 0, 1), V("Z", 0, 0, 5), 1)


def test_compose_vanishes_outside_region(t120):
    f = ArrowMorphism(V("X", 0, 0, 2), V("X", 0, 1, 2), 0)
    g = ArrowMorphism(V("X", 0, 1, 2), V("X", 0, 1, 1), 2)
    assert M.compose(t120, g, f) == ZERO


def test_compose_zero_absorbs(t120):
    f = ArrowMorphism(V("X", 0, 0, 1), V("X", 0, 0, 2), 0)
    assert M.compose(t120, ZERO, f) == ZERO
    assert M.compose(t120, f, ZERO) == ZERO


def test_compose_endpoint_mismatch(t120):
    f = ArrowMorphism(V("X", 0, 0, 1), V("X", 0, 0, 2), 0)
    with pytest.raises(NotComposable):
        M.compose(t120, f, f)
    with pytest.raises(NotComposable):
        M.compose(t120, IdentityMorphism(V("X", 0, 0, 1)), f)


@pytest.mark.parametrize("r,n,m", [(1, 2, 0), (1, 1, 0), (2, 3, 1)])
def test_degree_additivity_and_no_identity_composites(r, n, m):
    t = validate_triple(r, n, m)
    verts = M.vertices_in_box(t, -2, 2, -2, 2)
    for u in verts[:30]:
        for v in verts:
            for f in M.hom_basis(t, u, v):
                if not isinstance(f, ArrowMorphism):
                    continue
                for w in verts[:15]:
                    for g in M.hom_basis(t, v, w):
                        if not isinstance(g, ArrowMorphism):
                            continue
                        gf = M.compose(t, g, f)
                        assert not isinstance(gf, IdentityMorphism)
                        if isinstance(gf, ArrowMorphism):
                            assert gf.degree == f.degree + g.degree
                            assert gf.src == u and gf.dst == w


# -- sink maps ---------------------------------------------------------------------


def test_ar_sink_maps_examples(t120):
    up, right = M.ar_sink_maps(t120, V("Z", 0, 0, 0))
    assert (up.dst.coord, right.dst.coord) == ((1, 0), (0, 1))
    z, arrow = M.ar_sink_maps(t120, V("X", 0, 0, 0))
    assert z == ZERO and arrow.dst.coord == (0, 1)
    z, arrow = M.ar_sink_maps(t120, V("Y", 0, 0, 2))
    assert z == ZERO and arrow.dst.coord == (0, 3)


# -- associativity -------------------------------------------------------------------


@pytest.mark.parametrize("r,n,m", [(1, 2, 0), (1, 1, 0)])
def test_associativity_exhaustive(r, n, m):
    t = validate_triple(r, n, m)
    eng = WindowEngine(t, (-4, 4, -4, 4))
    assert eng.associativity_scan() is None


@pytest.mark.parametrize("r,n,m", [(2, 3, 1), (2, 2, 1)])
def test_associativity_multi_orbit(r, n, m):
    # orbit-raising arrows must compose coherently across the cycle
    t = validate_triple(r, n, m)
    eng = WindowEngine(t, (-3, 3, -3, 3))
    assert eng.associativity_scan() is None
