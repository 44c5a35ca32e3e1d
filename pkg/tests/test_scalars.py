from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unfurling.scalars import (
    FieldError,
    FieldMismatch,
    canonical_root,
    cyclotomic,
    cyclotomic_polynomial,
    field_from_json,
    field_to_json,
    multiplicative_order,
    nth_roots,
    prime_field,
    primitive_root,
    rational_functions,
    rationals,
    scalar_from_json,
    scalar_to_json,
)

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def cyclo_elements(m, degree):
    return st.lists(small, min_size=degree, max_size=degree).map(lambda cs: cyclotomic(m).from_coeffs(cs))


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


def test_zeta6_relations():
    F = cyclotomic(6)
    z = F.gen()
    assert z**6 == F.one()
    assert z**3 == F(-1)
    assert z * z - z + 1 == F.zero()
    assert multiplicative_order(z) == 6
    assert multiplicative_order(z**2) == 3


def test_primitive_root_orders():
    F = cyclotomic(12)
    for k in (1, 2, 3, 4, 6, 12):
        assert multiplicative_order(primitive_root(F, k)) == k
    with pytest.raises(FieldError):
        primitive_root(F, 5)
    assert primitive_root(rationals(), 2) == rationals()(-1)


def test_inverse_in_cyclotomic():
    F = cyclotomic(5)
    z = F.gen()
    x = 1 + z + 2 * z**3
    assert x * x.inverse() == F.one()


def test_prime_field():
    F = prime_field(7)
    assert F(3) / F(5) == F(2)
    assert F(Fraction(1, 2)) == F(4)
    assert nth_roots(F(2), 3) == []
    assert sorted(int(str(r)) for r in nth_roots(F(2), 2)) == [3, 4]
    with pytest.raises(ValueError):
        prime_field(8)


def test_rational_functions():
    F = rational_functions(rationals())
    q = F.gen()
    assert (q * q - 1) / (q - 1) == q + 1
    assert F.ratfunc([1, 2], [3]) == (1 + 2 * q) / 3
    assert nth_roots(q**4, 2)[0] ** 2 == q**4


def test_mixing_fields_rejected():
    with pytest.raises(FieldMismatch):
        cyclotomic(3).gen() + cyclotomic(4).gen()


def test_roots_over_unit_group():
    F = cyclotomic(6)
    z = F.gen()
    # cube roots of -1 in Q(zeta_6): -1, z, z^5 = -z^2
    roots = nth_roots(F(-1), 3)
    assert len(roots) == 3
    assert set(roots) == {F(-1), z, z**5}
    assert all(r**3 == F(-1) for r in roots)
    assert canonical_root(F(-8), 3) ** 3 == F(-8)
    assert nth_roots(z**2, 3) == []
    with pytest.raises(FieldError):
        canonical_root(F(2), 2)


def test_rational_roots():
    Q = rationals()
    assert nth_roots(Q(Fraction(4, 9)), 2) == [Q(Fraction(2, 3)), Q(Fraction(-2, 3))]
    assert nth_roots(Q(-27), 3) == [Q(-3)]
    assert nth_roots(Q(2), 2) == []


@pytest.mark.parametrize("F", [rationals(), cyclotomic(6), prime_field(11), rational_functions(cyclotomic(3))])
def test_json_roundtrip(F):
    assert field_from_json(field_to_json(F)) == F
    x = F.gen() + 3 if F.kind in ("cyclotomic", "rational_functions") else F(Fraction(-7, 3))
    assert scalar_from_json(F, scalar_to_json(x)) == x


@settings(max_examples=60, deadline=None)
@given(cyclo_elements(12, 4), cyclo_elements(12, 4), cyclo_elements(12, 4))
def test_cyclotomic_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    if not a.is_zero():
        assert a * a.inverse() == a.field.one()


@settings(max_examples=60, deadline=None)
@given(small.filter(lambda q: q != 0), st.integers(min_value=1, max_value=6))
def test_rational_root_search_is_sound(q, n):
    Q = rationals()
    x = Q(q) ** n
    roots = nth_roots(x, n)
    assert Q(q) in roots
    assert all(r**n == x for r in roots)
