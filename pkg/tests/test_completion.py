import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unfurling.completion import (
    TruncatedComponent,
    TruncatedOperator,
    check_dth_root,
    check_idempotents,
    check_parameter_factorization,
    crt_idempotents,
    decompose,
    recompose,
    reduce_vec,
    verify_iso,
)
from unfurling.fixtures import get_fixture
from unfurling.klr_rep import PolyVec
from unfurling.polys import Poly
from unfurling.report import PreconditionError
from unfurling.scalars import rationals

Q = rationals()


def test_idempotents_two_eigenvalues():
    es = crt_idempotents(Q, [Q(1), Q(-1)], 1)
    # e_1 = (z + 1)/2 and e_-1 = (1 - z)/2 modulo (z - 1)(z + 1)
    assert es[Q(1)] == [Q(1) / 2, Q(1) / 2]
    assert es[Q(-1)] == [Q(1) / 2, Q(-1) / 2]
    assert check_idempotents(Q, [Q(1), Q(-1)], 3).passed


def test_decompose_taylor_components():
    fx = get_fixture("single-vertex")
    v = PolyVec(1, {("1",): Poly.var(Q, 1, 0)})
    parts = decompose(v, fx.spectra, 2)
    one = Poly.const(Q, 1, 1)
    t = Poly.var(Q, 1, 0)
    assert parts[(("1", Q(1)),)] == one + t
    assert parts[(("1", Q(-1)),)] == t - one


def test_recompose_inverts_decompose():
    fx = get_fixture("single-vertex")
    z1, z2 = Poly.var(Q, 2, 0), Poly.var(Q, 2, 1)
    v = PolyVec(2, {("1", "1"): z1**3 * z2 + 2 * z2**2 - 5})
    for N in (1, 2, 3):
        assert recompose(decompose(v, fx.spectra, N), fx.spectra, N) == reduce_vec(v, fx.spectra, N)


def test_truncated_operator_algebra():
    comp = TruncatedComponent((("1", Q(1)),), (3,))
    t = TruncatedOperator.multiplication(comp, Poly.var(Q, 1, 0))
    one = TruncatedOperator.identity(comp, Q)
    assert not t.power(2).is_zero()
    assert t.power(3).is_zero()
    assert (t - t).is_zero()
    assert one @ t == t
    assert len(t.matrix()) == comp.dimension == 3
    with pytest.raises(ValueError):
        TruncatedComponent((("1", Q(1)),), (0,))


@pytest.mark.parametrize("name", ["sp4", "sp4-roots-of-unity", "g2-roots-of-unity"])
def test_dth_roots_exact(name):
    fx = get_fixture(name)
    for i in fx.datum.index:
        for u in fx.spectra.values(i):
            rep = check_dth_root(TruncatedComponent(((i, u),), (4,)), 0, fx.spectra)
            assert rep.passed, (i, u, rep.failures())


def test_parameter_factorization_on_sp4():
    fx = get_fixture("sp4")
    F = fx.field
    for label in [(("1", F(2)), ("2", F(4))), (("1", F(-2)), ("2", F(4))), (("2", F(4)), ("1", F(2)))]:
        rep = check_parameter_factorization(fx.pack, fx.spectra, TruncatedComponent(label, (3, 3)), 0)
        assert rep.passed, rep.failures()


def test_verify_iso_single_vertex():
    fx = get_fixture("single-vertex")
    rep = verify_iso(fx.datum, fx.pack, fx.spectra, 2, 2)
    assert rep.passed, rep.failures()
    assert rep.meta["certified_precision"] >= 2


def test_literal_variant_breaks_nilhecke():
    fx = get_fixture("single-vertex")
    rep = verify_iso(fx.datum, fx.pack, fx.spectra, 2, 2, variant="literal")
    failed = {c.name for c in rep.failures()}
    assert "relation:nilhecke_left" in failed
    assert "intertwining" in failed


def test_extra_precision_agrees_on_prefix():
    fx = get_fixture("single-vertex")
    a = verify_iso(fx.datum, fx.pack, fx.spectra, 2, 2)
    b = verify_iso(fx.datum, fx.pack, fx.spectra, 2, 2, extra=2)
    assert a.meta["digests"] == b.meta["digests"]
    assert b.meta["certified_precision"] >= a.meta["certified_precision"]


def test_component_subset():
    fx = get_fixture("sp4-roots-of-unity")
    F = fx.field
    comp = (("1", F(1)), ("2", F(1)))
    rep = verify_iso(fx.datum, fx.pack, fx.spectra, 2, 2, components=[comp])
    assert rep.passed, rep.failures()


def test_nonpositive_precision_rejected():
    fx = get_fixture("single-vertex")
    with pytest.raises(PreconditionError):
        verify_iso(fx.datum, fx.pack, fx.spectra, 2, 0)


@settings(max_examples=30, deadline=None)
@given(st.sets(st.integers(-5, 5), min_size=1, max_size=3), st.integers(1, 3))
def test_idempotents_property(values, N):
    assert check_idempotents(Q, [Q(x) for x in sorted(values)], N).passed
