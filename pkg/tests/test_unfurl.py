from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unfurling.cartan_graph import Edge, ValuedGraph, check_cartan_column, is_furling
from unfurling.fixtures import get_fixture, sp4_datum
from unfurling.params import geometric_pack, standard_pack
from unfurling.scalars import FieldError, prime_field
from unfurling.unfurl import (
    IncompleteSpectra,
    NoStabilization,
    Spectra,
    build_unfurled,
    complete_closure,
    is_complete,
    partner_values,
    roots_of_unity_spectra,
    sigma_automorphism,
    verify_unfurl_furling,
)


def edge_set(unf):
    return sorted(((e.src, e.tgt) for e in unf.graph.edges), key=str)


def test_sp4_partner_values():
    fx = get_fixture("sp4")
    F = fx.field
    # u^2 = v on the edge between the short and long root
    assert partner_values(fx.pack, "1", F(2), "2") == [F(4)]
    assert set(partner_values(fx.pack, "2", F(4), "1")) == {F(2), F(-2)}


def test_sp4_unfurls_to_a3_path():
    fx = get_fixture("sp4")
    F = fx.field
    unf = build_unfurled(fx.datum, fx.pack, fx.spectra)
    one, two = ("1", F(2)), ("1", F(-2))
    long = ("2", F(4))
    assert edge_set(unf) == sorted([(one, long), (two, long)], key=str)
    rep = verify_unfurl_furling(unf, fx.datum)
    assert rep.passed


def test_incomplete_spectra_rejected_with_witness():
    fx = get_fixture("sp4-partial")
    ok, witnesses = is_complete(fx.spectra, fx.pack)
    assert not ok
    assert witnesses
    with pytest.raises(IncompleteSpectra):
        build_unfurled(fx.datum, fx.pack, fx.spectra)


def test_closure_rounds():
    fx = get_fixture("sp4-partial")
    closed, rounds = complete_closure(fx.spectra, fx.pack)
    F = fx.field
    assert set(closed.values("1")) == {F(2), F(-2)}
    assert closed.values("2") == [F(4)]
    assert rounds == 2
    again, rounds = complete_closure(closed, fx.pack)
    assert rounds == 1
    assert again.to_json() == closed.to_json()


def test_cycle_q2_does_not_stabilize():
    fx = get_fixture("cycle3-q2")
    with pytest.raises(NoStabilization) as info:
        complete_closure(fx.spectra, fx.pack, max_iter=10)
    assert info.value.spectra.size() > 10


def test_cycle_zeta6_is_one_hexagon():
    fx = get_fixture("cycle3-zeta6")
    unf = build_unfurled(fx.datum, fx.pack, fx.spectra)
    g = unf.graph
    assert len(g.vertices) == 6 and len(g.edges) == 6
    assert len(g.components()) == 1
    assert all(len(g.out_edges(v)) == 1 and len(g.in_edges(v)) == 1 for v in g.vertices)


def test_missing_roots_in_prime_field():
    # over GF(7), 3 is not a square, so the long-root value 3 has no short partner
    F = prime_field(7)
    pack = standard_pack(sp4_datum(), F=F)
    assert partner_values(pack, "2", F(3), "1") == []
    assert set(partner_values(pack, "2", F(2), "1")) == {F(3), F(4)}


def test_spectra_json_roundtrip():
    fx = get_fixture("cycle3-zeta6")
    back = Spectra.from_json(fx.spectra.to_json(), fx.datum, fx.field)
    assert back.to_json() == fx.spectra.to_json()


def test_roots_of_unity_spectra_need_the_field():
    fx = get_fixture("g2-roots-of-unity")
    with pytest.raises(FieldError):
        roots_of_unity_spectra(fx.datum, prime_field(5), 3)


@pytest.mark.parametrize("name,order", [("sp4-roots-of-unity", 2), ("g2-roots-of-unity", 3)])
def test_sigma_quotient_recovers_base(name, order):
    fx = get_fixture(name)
    _sigma, rep, _unf = sigma_automorphism(fx.datum, fx.pack, order)
    assert rep.passed, rep.failures()
    assert rep.meta["quotient_d"] == fx.datum.d


@st.composite
def quivers(draw):
    n = draw(st.integers(2, 4))
    names = [str(k) for k in range(n)]
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] != p[1]), max_size=4))
    one = Fraction(1)
    edges = [Edge(f"e{k}", names[a], names[b], one, one) for k, (a, b) in enumerate(pairs)]
    return ValuedGraph(names, edges)


@settings(max_examples=30, deadline=None)
@given(quivers(), st.sets(st.integers(-4, 6).filter(bool), min_size=1, max_size=3))
def test_geometric_unfurling_is_trivial_cover(quiver, values):
    pack = geometric_pack(quiver)
    F = pack.field
    sp = Spectra.from_values(pack.datum, F, {i: sorted(values) for i in pack.datum.index})
    unf = build_unfurled(pack.datum, pack, sp)
    expected = sorted((((e.src, F(u)), (e.tgt, F(u))) for e in quiver.edges for u in values), key=str)
    assert edge_set(unf) == expected
    assert is_furling(unf.projection).passed
    assert check_cartan_column(unf.projection).passed


@settings(max_examples=30, deadline=None)
@given(st.sets(st.sampled_from([1, -1, 2, -2, 3, 4, 9, 16]), min_size=1, max_size=3), st.sets(st.sampled_from([1, 4, 9, 16]), max_size=2))
def test_closure_is_complete_and_contains_input(short, long):
    fx = get_fixture("sp4")
    sp = Spectra.from_values(fx.datum, fx.field, {"1": sorted(short), "2": sorted(long)})
    closed, _rounds = complete_closure(sp, fx.pack)
    assert is_complete(closed, fx.pack)[0]
    for i in fx.datum.index:
        assert set(sp.values(i)) <= set(closed.values(i))
    assert verify_unfurl_furling(build_unfurled(fx.datum, fx.pack, closed), fx.datum).passed
