"""Lemma replays: positive instances, mode guards, and perturbation controls."""

import json
import random

import pytest

from kgcert import functors as F
from kgcert import model as M
from kgcert import certifier as C
from kgcert.certifier import (
    KIND_B_INF,
    KIND_BP,
    KIND_BPP,
    KIND_CP,
    KIND_CPP,
    Simple1Instance,
    build_simple0,
    build_simple1,
    certify,
    check_c2_simple,
    check_finite1,
    check_infinite_mode,
    check_nonsimple1,
    check_simple0,
    check_simple1_tower,
)
from kgcert.engine import WindowEngine
from kgcert.errors import (
    InvalidVertex,
    ModeMismatch,
    ParameterRange,
    WrongFamily,
)
from kgcert.functors import FpFunctor, Subfunctor, Window
from kgcert.model import ArrowMorphism, VertexId, ZERO
from kgcert.presentation import validate_triple

from conftest import INFINITE_TRIPLES


def V(fam, orbit, a, b):
    return VertexId(fam, orbit, (a, b))


W6 = Window(-6, 6, -6, 6)
W5 = Window(-5, 5, -5, 5)


# -- builders ---------------------------------------------------------------------


def test_build_simple0_z_vertex(t120):
    A = build_simple0(t120, V("Z", 0, 0, 0))
    assert all(isinstance(g, ArrowMorphism) for g in A.denominators.generators)


def test_build_simple0_border_vertex(t120):
    A = build_simple0(t120, V("X", 0, 0, 0))
    g1, g2 = A.denominators.generators
    assert g1 is ZERO and g2.dst.coord == (0, 1)


def test_build_simple0_random_vertices_have_dim_one(t120):
    rng = random.Random(1)
    verts = M.vertices_in_box(t120, -4, 4, -4, 4)
    for v in rng.sample(verts, 20):
        A = build_simple0(t120, v)
        assert F.eval_fp(t120, A, v) == 1


def test_build_simple0_invalid_vertex(t120):
    with pytest.raises(InvalidVertex):
        build_simple0(t120, V("Y", 0, 0, 1))


def test_build_simple1_bp_generators(t120):
    # both generators are honest arrows here: (1,1) satisfies the index
    # constraint a <= b, so the x-shift map is not zero
    B = build_simple1(t120, KIND_BP, 0, (0, 1), 0)
    g1, g2 = B.denominators.generators
    assert isinstance(g1, ArrowMorphism) and g1.dst == V("X", 0, 1, 1)
    assert isinstance(g2, ArrowMorphism) and g2.dst == V("Z", 0, 0, 0)


def test_build_simple1_cp_zero_second_generator(t120):
    Q = build_simple1(t120, KIND_CP, 0, (0, 0), 1)  # aux at the zero threshold
    g1, g2 = Q.denominators.generators
    assert isinstance(g1, ArrowMorphism)
    assert g2 is ZERO


def test_build_simple1_parameter_range(t120):
    with pytest.raises(ParameterRange):
        build_simple1(t120, KIND_CPP, 0, (0, 0), 5)
    with pytest.raises(ParameterRange):
        build_simple1(t120, KIND_CP, 0, (0, 0), 2)


def test_build_simple1_mode_guards(t120, t110):
    with pytest.raises(ModeMismatch):
        build_simple1(t120, KIND_B_INF, 0, (0, 0), 0)
    with pytest.raises(ModeMismatch):
        build_simple1(t110, KIND_BP, 0, (0, 0), 0)


# -- simple objects ----------------------------------------------------------------


def test_check_simple0_positive(t120):
    for v in [V("X", 0, 0, 1), V("Z", 0, 0, 0), V("Y", 0, 0, 2)]:
        assert check_simple0(t120, v, W6)


def test_check_simple0_outside_window_vacuous(t120):
    # the window excludes the vertex: zero-checks hold vacuously
    assert check_simple0(t120, V("Z", 0, 40, 40), W6)


def test_fake_simple0_fails(t120):
    """Perturbation control: a non-sink generator pair is not simple."""
    v = V("Z", 0, 0, 0)
    fake = FpFunctor(
        v,
        Subfunctor(
            v,
            (
                M.arrow_or_zero(t120, v, V("Z", 0, 2, 0), 0),  # skips (1,0)
                M.arrow_or_zero(t120, v, V("Z", 0, 0, 1), 0),
            ),
        ),
    )
    dims = [F.eval_fp(t120, fake, w) for w in M.vertices_in_box(t120, -3, 3, -3, 3)]
    assert sum(1 for d in dims if d > 0) > 1  # support bigger than a point


# -- towers -------------------------------------------------------------------------


@pytest.mark.parametrize(
    "kind,coord,aux",
    [
        (KIND_BP, (0, 1), 0),
        (KIND_BP, (-2, 0), -5),
        (KIND_BPP, (0, 3), 0),
        (KIND_CP, (0, 0), 1),
        (KIND_CP, (1, -2), -1),
        (KIND_CPP, (0, 0), -1),
        (KIND_CPP, (1, 2), 1),
    ],
)
def test_tower_positive_120(t120, kind, coord, aux):
    inst = Simple1Instance(kind, 0, coord, aux)
    assert check_simple1_tower(t120, inst, 4, W6)


def test_tower_zero_length(t120):
    assert check_simple1_tower(t120, Simple1Instance(KIND_BP, 0, (0, 1), 0), 0, W6)


def test_tower_positive_multi_orbit():
    t = validate_triple(2, 3, 1)
    for orbit in (0, 1):
        inst = Simple1Instance(KIND_BP, orbit, (0, 2), 0)
        assert check_simple1_tower(t, inst, 3, W5)
        dlast = 1 if orbit == 1 else 0
        inst = Simple1Instance(KIND_CP, orbit, (0, 0), 0 + dlast * 1 + 1)
        assert check_simple1_tower(t, inst, 3, W5)


def test_tower_infinite_mode():
    t = validate_triple(2, 2, 1)
    assert check_simple1_tower(t, Simple1Instance(KIND_B_INF, 0, (0, 0), 0), 3, W5)
    assert check_simple1_tower(t, Simple1Instance(KIND_B_INF, 1, (0, 0), 0), 3, W5)


# -- finite-length chains ---------------------------------------------------------------


def test_finite1_examples(t120):
    assert check_finite1(t120, V("X", 0, 0, 3), Window(-8, 8, -8, 8))
    assert check_finite1(t120, V("Y", 0, 0, 5), Window(-8, 8, -8, 8))


def test_finite1_family_guard(t120):
    with pytest.raises(WrongFamily):
        check_finite1(t120, V("Z", 0, 0, 0), W6)


def test_finite1_with_tail():
    """m > 0 exercises the shifted border of the zeroth orbit."""
    t = validate_triple(1, 3, 2)
    for v in [V("X", 0, 0, -2), V("X", 0, 0, 2), V("Y", 0, 0, 3), V("Y", 0, -1, 4)]:
        assert check_finite1(t, v, W6)


def test_finite1_literal_base_case_is_not_exact():
    """With m > 0, the base-case sequence only becomes exact at the border
    b - a = -m: at b - a = +m the x-shift map survives in the quotient
    denominator but not in the image of the degree-1 map."""
    t = validate_triple(1, 3, 2)
    eng = WindowEngine(t, (-6, 6, -6, 6))
    w = V("X", 0, 0, 2)  # b - a = +m
    u = M.arrow_or_zero(t, w, V("Z", 0, 0, 0), 1)
    sub = build_simple1(t, KIND_CP, 0, (0, 0), 0 + 2 + 1)
    quot = build_simple1(t, KIND_BP, 0, (0, 2), 0)
    assert not eng.ses_foreign(
        w, u, sub.top, sub.denominators.generators, (), quot.denominators.generators
    )


# -- descending chains out of Z-vertices ---------------------------------------------------


def test_nonsimple1_positive(t120):
    assert check_nonsimple1(t120, V("Z", 0, 0, 0), 5, W6)
    assert check_nonsimple1(t120, V("Z", 0, -1, 2), 1, W6)


def test_nonsimple1_layers_are_infinite(t120):
    """Negative control: substituting a sink-map simple for a chain layer
    would flip the exact infinitude test that the chain relies on."""
    A = build_simple0(t120, V("Z", 0, 1, 0))
    layer = build_simple1(t120, KIND_CP, 0, (1, 0), 1)
    assert F.is_in_c0(t120, A)
    assert not F.is_in_c0(t120, layer)


def test_nonsimple1_wrong_layer_fails(t120):
    """Kernel comparison against the sink-map denominator (instead of the
    chain layer's) must fail."""
    eng = WindowEngine(t120, (-6, 6, -6, 6))
    v = V("Z", 0, 0, 0)
    u = M.arrow_or_zero(t120, v, V("Z", 0, 1, 0), 0)
    nxt = M.arrow_or_zero(t120, v, V("Z", 0, 2, 0), 0)
    wrong = build_simple0(t120, V("Z", 0, 1, 0))
    assert not eng.kernel_matches(v, u, (nxt,), wrong.denominators.generators)


def test_nonsimple1_guards(t120, t110):
    with pytest.raises(ModeMismatch):
        check_nonsimple1(t110, V("X", 0, 0, 0), 2, W6)
    with pytest.raises(WrongFamily):
        check_nonsimple1(t120, V("X", 0, 0, 0), 2, W6)
    with pytest.raises(ValueError):
        check_nonsimple1(t120, V("Z", 0, 0, 0), 0, W6)


# -- the layer-two case analysis ------------------------------------------------------------


def test_c2_simple_positive(t120):
    assert check_c2_simple(t120, V("Z", 0, 0, 0), W5)


def test_c2_simple_mode_guard(t110):
    with pytest.raises(ModeMismatch):
        check_c2_simple(t110, V("X", 0, 0, 0), W5)


# -- infinite mode -----------------------------------------------------------------------


@pytest.mark.parametrize("r,n,m", INFINITE_TRIPLES)
def test_infinite_mode_replay(r, n, m):
    t = validate_triple(r, n, m)
    assert check_infinite_mode(t, W6, 4)


def test_infinite_mode_guard(t120):
    with pytest.raises(ModeMismatch):
        check_infinite_mode(t120, W6, 4)


# -- perturbation table --------------------------------------------------------------------
#
# Each entry is a deliberately broken instance of one check; all must be
# rejected.  The callables return the check's boolean verdict.


def _perturb_tower_skipped_index(t):
    top = V("X", 0, 0, 1)
    skip = M.arrow_or_zero(t, top, V("X", 0, 0, 3), 0)  # jumps over (0,2)
    return F.ses_check(
        t,
        Subfunctor(top, (skip,)),
        build_simple1(t, KIND_BP, 0, (0, 1), 0).denominators,
        build_simple0(t, top),
        W6,
    )


def _perturb_image_presentation_aux(t):
    f = M.arrow_or_zero(t, V("X", 0, 0, 0), V("Z", 0, 0, 0), 1)
    return F.image_presentation_check(t, f, build_simple1(t, KIND_CP, 0, (0, 0), 0), W6)


def _perturb_ses_wrong_quotient_coordinate(t):
    top = V("X", 0, 0, 1)
    u = M.arrow_or_zero(t, top, V("X", 0, 0, 2), 0)
    wrong_quot = FpFunctor(
        top, Subfunctor(top, (M.arrow_or_zero(t, top, V("X", 0, 1, 1), 0),))
    )
    return F.ses_check(
        t, Subfunctor(top, (u,)), build_simple1(t, KIND_BP, 0, (0, 1), 0).denominators,
        wrong_quot, W6,
    )


def _perturb_chain_layer_replaced_by_sink_simple(t):
    eng = WindowEngine(t, W6.box)
    v = V("Z", 0, 0, 0)
    u = M.arrow_or_zero(t, v, V("Z", 0, 1, 0), 0)
    nxt = M.arrow_or_zero(t, v, V("Z", 0, 2, 0), 0)
    wrong = build_simple0(t, V("Z", 0, 1, 0))
    return eng.kernel_matches(v, u, (nxt,), wrong.denominators.generators)


def _perturb_simple0_non_sink_pair(t):
    v = V("Z", 0, 0, 0)
    fake = FpFunctor(
        v,
        Subfunctor(
            v,
            (
                M.arrow_or_zero(t, v, V("Z", 0, 2, 0), 0),
                M.arrow_or_zero(t, v, V("Z", 0, 0, 1), 0),
            ),
        ),
    )
    eng = WindowEngine(t, (-4, 4, -4, 4))
    dims = eng.dims_at_vertices(eng.dims_cube(v, fake.denominators.generators))
    return all(d == (1 if w == v else 0) for w, d in dims.items())


PERTURBATION_TABLE = [
    ("tower skips one chain index", _perturb_tower_skipped_index),
    ("image presentation with shifted aux", _perturb_image_presentation_aux),
    ("exact sequence with wrong quotient coordinate", _perturb_ses_wrong_quotient_coordinate),
    ("chain layer replaced by a sink-map simple", _perturb_chain_layer_replaced_by_sink_simple),
    ("simple object built from a non-sink pair", _perturb_simple0_non_sink_pair),
]


@pytest.mark.parametrize("name,broken", PERTURBATION_TABLE, ids=[n for n, _ in PERTURBATION_TABLE])
def test_perturbation_rejected(t120, name, broken):
    assert broken(t120) is False


# -- certificates ------------------------------------------------------------------------


def test_certify_small_windows():
    cert = certify(validate_triple(1, 2, 0), W5, 3)
    assert cert.kg == 2 and cert.verdict == "pass"
    cert = certify(validate_triple(1, 1, 0), W5, 3)
    assert cert.kg == 1 and cert.verdict == "pass"


def test_certify_two_orbits_with_tail():
    # r > 1 and m > 0 together: tail-shifted index sets on the zeroth orbit
    cert = certify(validate_triple(2, 3, 1), W6, 4)
    assert cert.kg == 2 and cert.verdict == "pass"


def test_certificate_schema_and_determinism():
    t = validate_triple(1, 1, 0)
    a = certify(t, W5, 3).to_json()
    b = certify(t, W5, 3).to_json()
    assert a == b
    t = validate_triple(1, 2, 0)
    assert certify(t, W5, 3).to_json() == certify(t, W5, 3).to_json()
    assert set(a) == {"triple", "kg", "window", "depth", "checks", "verdict"}
    for c in a["checks"]:
        assert set(c) == {"lemma", "params", "pass", "detail"}
    text = certify(t, W5, 3).to_json_text()
    assert json.dumps(json.loads(text), indent=2, sort_keys=True) == text


def test_checks_monotone_under_window_shrink(t120):
    """A check passing on a window passes on sub-windows."""
    inst = Simple1Instance(KIND_BP, 0, (0, 1), 0)
    for win in [W6, W5, Window(-3, 3, -3, 3)]:
        assert check_simple1_tower(t120, inst, 3, win)
        assert check_finite1(t120, V("X", 0, 0, 2), win)
        assert check_nonsimple1(t120, V("Z", 0, 0, 0), 2, win)
