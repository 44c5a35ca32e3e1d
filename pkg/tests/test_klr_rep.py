import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unfurling.fixtures import get_fixture
from unfurling.klr_rep import (
    KLRElement,
    PolyVec,
    WordError,
    act,
    degree,
    monomials,
    relation_instances,
    vector_degrees,
    verify_relations,
)
from unfurling.polys import Poly

W = KLRElement.word


def poly(F, n, terms):
    return Poly.from_dict(F, n, terms)


def vec(F, label, exps, c=1):
    return PolyVec.basis(F, tuple(label), exps, c)


def test_nilhecke_crossing_is_divided_difference():
    fx = get_fixture("single-vertex")
    F = fx.field
    lab = ("1", "1")
    assert act(fx.pack, W(lab, ("psi", 1)), vec(F, lab, (1, 0))) == vec(F, lab, (0, 0))
    assert act(fx.pack, W(lab, ("psi", 1)), vec(F, lab, (0, 1))) == vec(F, lab, (0, 0), -1)
    assert act(fx.pack, W(lab, ("psi", 1)), vec(F, lab, (0, 0))).is_zero()


def test_dot_crossing_sign_on_equal_labels():
    # psi_1 y_2 - y_1 psi_1 acts as -1; the opposite order gives +1
    fx = get_fixture("single-vertex")
    F = fx.field
    lab = ("1", "1")
    one = vec(F, lab, (0, 0))
    el = W(lab, ("psi", 1), ("y", 2)) - W(lab, ("y", 1), ("psi", 1))
    assert act(fx.pack, el, one) == one.scale(-1)
    el = W(lab, ("y", 1), ("psi", 1)) - W(lab, ("psi", 1), ("y", 2))
    assert act(fx.pack, el, one) == one


def test_sp4_crossing_multiplies_by_parameter():
    fx = get_fixture("sp4")
    F = fx.field
    # e_(2,1) -> e_(1,2) picks up P_12(z_1, z_2) = z_1^2 - z_2
    out = act(fx.pack, W(("2", "1"), ("psi", 1)), vec(F, ("2", "1"), (0, 0)))
    assert out == PolyVec(2, {("1", "2"): poly(F, 2, {(2, 0): 1, (0, 1): -1})})
    # the other direction has P_21 = 1 and only swaps variables
    out = act(fx.pack, W(("1", "2"), ("psi", 1)), vec(F, ("1", "2"), (3, 1)))
    assert out == vec(F, ("2", "1"), (1, 3))


def test_sp4_bigon_is_q():
    fx = get_fixture("sp4")
    F = fx.field
    lab = ("1", "2")
    out = act(fx.pack, W(lab, ("psi", 1), ("psi", 1)), vec(F, lab, (0, 0)))
    assert out == PolyVec(2, {lab: poly(F, 2, {(2, 0): 1, (0, 1): -1})})


def test_sp4_braid_correction_value():
    # hand computation on e_(1,2,1): psi1 psi2 psi1 - psi2 psi1 psi2 sends 1 to z_1 + z_3
    fx = get_fixture("sp4")
    F = fx.field
    lab = ("1", "2", "1")
    lhs = W(lab, ("psi", 1), ("psi", 2), ("psi", 1)) - W(lab, ("psi", 2), ("psi", 1), ("psi", 2))
    out = act(fx.pack, lhs, vec(F, lab, (0, 0, 0)))
    assert out == PolyVec(3, {lab: poly(F, 3, {(1, 0, 0): 1, (0, 0, 1): 1})})
    corrected = [r for fam, _l, r in relation_instances(fx.pack, lab) if fam == "braid_corrected"]
    assert len(corrected) == 1
    assert act(fx.pack, corrected[0], vec(F, lab, (0, 0, 0))) == out


def test_degrees_of_generators():
    D = get_fixture("sp4").datum
    assert degree(D, W(("1", "1"), ("psi", 1))) == -2
    assert degree(D, W(("1", "2"), ("psi", 1))) == 2
    assert degree(D, W(("2", "2"), ("psi", 1))) == -4
    assert degree(D, W(("1", "2"), ("y", 2))) == 4
    assert degree(D, W(("1", "2"), ("y", 2)) + W(("1", "2"), ("y", 1))) is None


def test_bad_words_rejected():
    fx = get_fixture("sp4")
    F = fx.field
    with pytest.raises(WordError):
        act(fx.pack, W(("1", "2"), ("psi", 2)), vec(F, ("1", "2"), (0, 0)))
    with pytest.raises(WordError):
        act(fx.pack, W(("1", "2"), ("e", ("1", "2")), ("psi", 1)), vec(F, ("1", "2"), (0, 0)))


def test_monomial_count():
    assert len(list(monomials(3, 6))) == 84
    assert len(list(monomials(2, 6))) == 28


@pytest.mark.parametrize("name,n", [("single-vertex", 3), ("a2-geometric", 3), ("sp4", 3), ("cycle3-zeta6", 2)])
def test_relations_hold(name, n):
    fx = get_fixture(name)
    rep = verify_relations(fx.datum, fx.pack, n, 3)
    assert rep.passed, rep.failures()


def test_relation_families_reported():
    fx = get_fixture("sp4")
    rep = verify_relations(fx.datum, fx.pack, 3, 1)
    names = {c.name for c in rep.checks}
    assert {"bigon", "braid", "braid_corrected", "nilhecke_left", "nilhecke_right", "dot_crossing_left", "dots_commute"} <= names


def test_sampled_labels_are_reproducible():
    fx = get_fixture("sp4")
    a = verify_relations(fx.datum, fx.pack, 3, 1, sample=3, seed=7)
    b = verify_relations(fx.datum, fx.pack, 3, 1, sample=3, seed=7)
    assert a.to_json() == b.to_json()
    assert a.meta["labels"] == 3


letters3 = st.one_of(st.tuples(st.just("y"), st.integers(1, 3)), st.tuples(st.just("psi"), st.integers(1, 2)))


@settings(max_examples=80, deadline=None)
@given(
    st.sampled_from(["sp4", "a2-geometric", "g2-roots-of-unity"]),
    st.tuples(*[st.sampled_from(["1", "2"])] * 3),
    st.tuples(*[st.integers(0, 2)] * 3),
    st.lists(letters3, max_size=4),
)
def test_degree_additivity(name, label, exps, word):
    fx = get_fixture(name)
    v = vec(fx.field, label, exps)
    el = W(label, *word)
    out = act(fx.pack, el, v)
    if out.is_zero():
        return
    (start,) = vector_degrees(fx.pack, v)
    assert vector_degrees(fx.pack, out) == {start + degree(fx.datum, el)}
