from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unfurling.cartan_graph import CartanDatum
from unfurling.fixtures import a2_quiver, get_fixture, g2_datum, sp4_datum
from unfurling.params import CannotFactor, ParamError, ParamPack, base_graph, geometric_pack, solve_univariate, standard_pack, validate_pack
from unfurling.polys import Poly
from unfurling.scalars import FieldError, cyclotomic, primitive_root, rationals

Q = rationals()

RANK_TWO = {
    "A1xA1": ([1, 1], [[2, 0], [0, 2]]),
    "A2": ([1, 1], [[2, -1], [-1, 2]]),
    "B2": ([1, 2], [[2, -2], [-1, 2]]),
    "G2": ([1, 3], [[2, -3], [-1, 2]]),
    "affine A1": ([1, 1], [[2, -2], [-2, 2]]),
    "affine A2(2)": ([1, 4], [[2, -4], [-1, 2]]),
}


def uv(F, coeffs):
    return Poly.from_dict(F, 2, coeffs)


def test_solve_univariate_rational():
    # (x - 2)(x + 3)(2x - 1) = 2x^3 + x^2 - 13x + 6
    roots = solve_univariate([Q(6), Q(-13), Q(1), Q(2)])
    assert Counter(roots) == Counter([Q(2), Q(-3), Q(Fraction(1, 2))])
    assert solve_univariate([Q(0), Q(0), Q(1)]) == [Q(0), Q(0)]
    with pytest.raises(CannotFactor):
        solve_univariate([Q(-2), Q(0), Q(1)])
    with pytest.raises(ParamError):
        solve_univariate([Q(0)])


def test_solve_univariate_cyclotomic():
    F = cyclotomic(3)
    z = F.gen()
    roots = solve_univariate([F(1), F(1), F(1)])
    assert set(roots) == {z, z * z}
    F4 = cyclotomic(4)
    i = F4.gen()
    assert set(solve_univariate([F4(4), F4(0), F4(1)])) == {2 * i, -2 * i}


def test_sp4_standard_pack_values():
    pack = get_fixture("sp4").pack
    assert pack.Q("1", "2") == uv(Q, {(2, 0): 1, (0, 1): -1})
    assert pack.Q("2", "1") == uv(Q, {(0, 2): 1, (1, 0): -1})
    assert (pack.g("1", "2"), pack.h("1", "2"), pack.h("2", "1")) == (1, 2, 1)
    assert pack.lcm_degree("1", "2") == pack.lcm_degree("2", "1") == 2
    assert pack.coarse_roots("1", "2") == [Q(1)]
    assert pack.coarse_roots("2", "1") == []
    assert set(pack.fine_roots("1", "2")) == {Q(1), Q(-1)}
    assert validate_pack(pack).passed


def test_g2_fine_roots_need_cube_roots_of_unity():
    F = cyclotomic(3)
    pack = standard_pack(g2_datum(), F=F)
    z = primitive_root(F, 3)
    assert set(pack.fine_roots("1", "2")) == {F(1), z, z * z}
    with pytest.raises(FieldError):
        standard_pack(g2_datum()).fine_roots("1", "2")


def test_cycle_coarse_root_is_inverse_parameter():
    pack = get_fixture("cycle3-zeta6").pack
    z = pack.field.gen()
    assert pack.coarse_roots("0", "1") == [z**5]
    assert pack.reciprocal_roots("1", "0") == [z]


def test_validate_flags_inhomogeneous_monomials():
    D = sp4_datum()
    bad = ParamPack(D, Q, {("1", "2"): uv(Q, {(2, 0): 1, (0, 1): -1, (1, 0): 1})})
    rep = validate_pack(bad)
    assert not rep.passed
    entry = next(c for c in rep.checks if c.name == "homogeneity[1,2]")
    assert entry.details["offending"] == [{"a": 1, "b": 0, "degree": 2}]


def test_validate_flags_vanishing_leading_value():
    D = sp4_datum()
    rep = validate_pack(ParamPack(D, Q, {("1", "2"): uv(Q, {(0, 1): -1})}))
    assert "leading_nonzero[1,2]" in {c.name for c in rep.failures()}


def test_validate_flags_orthogonal_nonconstant():
    D = CartanDatum.from_matrix(["a", "b"], [1, 1], [[2, 0], [0, 2]])
    rep = validate_pack(ParamPack(D, Q, {("a", "b"): uv(Q, {(1, 0): 1})}))
    assert "orthogonal_constant[a,b]" in {c.name for c in rep.failures()}


def test_supplied_roots_must_reexpand():
    D = sp4_datum()
    with pytest.raises(ParamError):
        ParamPack(D, Q, {("1", "2"): uv(Q, {(2, 0): 1, (0, 1): -1})}, {("1", "2"): [Q(2)]}).coarse_roots("1", "2")


def test_json_roundtrip():
    for name in ("sp4", "cycle3-zeta6", "a2-geometric"):
        pack = get_fixture(name).pack
        back = ParamPack.from_json(pack.to_json(), pack.datum)
        assert back.P == pack.P
        assert back.field == pack.field


def test_base_graph_of_geometric_pack():
    pack = geometric_pack(a2_quiver())
    g = base_graph(pack)
    assert [(e.src, e.tgt, e.eta, e.nu) for e in g.edges] == [("1", "2", 1, 1)]


@pytest.mark.parametrize("name", sorted(RANK_TWO))
def test_standard_packs_validate(name):
    d, c = RANK_TWO[name]
    D = CartanDatum.from_matrix(["1", "2"], d, c)
    F = cyclotomic(12)
    rep = validate_pack(standard_pack(D, F=F))
    assert rep.passed, rep.failures()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(min_value=-6, max_value=6, max_denominator=3).filter(bool), min_size=1, max_size=4))
def test_solver_recovers_rational_roots(roots):
    poly = Poly.const(Q, 1, 1)
    x = Poly.var(Q, 1, 0)
    for r in roots:
        poly = poly * (x - r)
    coeffs = [poly.coeff((k,)) for k in range(len(roots) + 1)]
    assert Counter(solve_univariate(coeffs)) == Counter(Q(r) for r in roots)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(RANK_TWO)), st.sampled_from([1, -1, 2]))
def test_symmetry_and_homogeneity_hold_for_any_sign(name, sign):
    d, c = RANK_TWO[name]
    D = CartanDatum.from_matrix(["1", "2"], d, c)
    pack = standard_pack(D, signs={("1", "2"): sign}, F=cyclotomic(12))
    names = {ch.name.split("[")[0] for ch in validate_pack(pack).checks if ch.passed}
    assert {"symmetry", "homogeneity"} <= names
