"""Field arithmetic against an independent polynomial oracle, plus endo spaces."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rangecompat.errors import FieldError
from rangecompat.gf import (endo_from_images, endo_space, field_make, mul_endo,
                            sqrt_endo)

FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1),
          (13, 1), (2, 4)]


def poly_mul_mod(p, k, poly, a_digits, b_digits):
    """Naive polynomial multiplication mod (x^k - reduction), little-endian."""
    prod = [0] * (2 * k - 1)
    for i, a in enumerate(a_digits):
        for j, b in enumerate(b_digits):
            prod[i + j] = (prod[i + j] + a * b) % p
    # reduce: x^k = -poly (poly holds the low k coefficients of the monic
    # reduction polynomial)
    for d in range(2 * k - 2, k - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            for j in range(k):
                prod[d - k + j] = (prod[d - k + j] - c * poly[j]) % p
    return tuple(prod[:k])


@pytest.mark.parametrize("p,k", FIELDS)
def test_multiplication_matches_polynomial_oracle(p, k):
    F = field_make(p, k)
    for a in F.elements():
        for b in F.elements():
            got = F.digits(F.mul(a, b))
            want = poly_mul_mod(p, k, list(F.poly), F.digits(a), F.digits(b))
            assert got == want, (a, b)


@pytest.mark.parametrize("p,k", FIELDS)
def test_addition_is_digitwise(p, k):
    F = field_make(p, k)
    for a in F.elements():
        for b in F.elements():
            want = tuple((x + y) % p for x, y in zip(F.digits(a), F.digits(b)))
            assert F.digits(F.add(a, b)) == want


@pytest.mark.parametrize("p,k", [(2, 1), (3, 1), (2, 2), (3, 2), (2, 4)])
def test_field_axioms_exhaustive(p, k):
    F = field_make(p, k)
    els = list(F.elements())
    for a in els:
        assert F.mul(a, 1) == a and F.add(a, 0) == a
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
    for a in els:
        for b in els:
            assert F.mul(a, b) == F.mul(b, a)
            for c in els[:5]:
                assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
                assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))


@given(st.integers(0, 15), st.integers(0, 15), st.integers(0, 15))
@settings(max_examples=200)
def test_f16_associativity_hypothesis(a, b, c):
    F = field_make(2, 4)
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (3, 2), (2, 4)])
def test_frobenius_is_field_automorphism(p, k):
    F = field_make(p, k)
    for a in F.elements():
        assert F.frobenius(a) == F.pow(a, p)
        for b in F.elements():
            assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a),
                                                     F.frobenius(b))
            assert F.frobenius(F.mul(a, b)) == F.mul(F.frobenius(a),
                                                     F.frobenius(b))
    # order k: applying k times is the identity
    for a in F.elements():
        assert F.frobenius(a, k) == a


@pytest.mark.parametrize("p,k", [(2, 1), (2, 2), (2, 3), (2, 4)])
def test_char2_sqrt(p, k):
    F = field_make(p, k)
    for a in F.elements():
        r = F.char2_sqrt(a)
        assert F.mul(r, r) == a


def test_field_size_guard():
    with pytest.raises(FieldError):
        field_make(17)
    with pytest.raises(FieldError):
        field_make(5, 2)  # 25 > 16
    assert field_make(13).q == 13


@pytest.mark.parametrize("p,k", [(2, 2), (3, 2), (2, 3), (2, 4)])
def test_endo_space_dimensions(p, k):
    F = field_make(p, k)
    assert len(endo_space(F, "additive")) == k * k
    assert len(endo_space(F, "linear")) == k
    if p == 2:
        assert len(endo_space(F, "rootlinear")) == k


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (2, 4)])
def test_rootlinear_defining_property(p, k):
    F = field_make(p, k)
    for alpha in endo_space(F, "rootlinear"):
        assert alpha.is_rootlinear()
        for lam in F.elements():
            for x in F.elements():
                lhs = alpha(F.mul(F.mul(lam, lam), x))
                assert lhs == F.mul(lam, alpha(x))


def test_mul_and_sqrt_endos(F4):
    for c in F4.elements():
        e = mul_endo(F4, c)
        assert e.is_linear()
        for x in F4.elements():
            assert e(x) == F4.mul(c, x)
    s = sqrt_endo(F4)
    assert s.is_rootlinear() and not s.is_linear()
    for x in F4.elements():
        assert F4.mul(s(x), s(x)) == x


def test_endo_from_images_additive(F4):
    alpha = endo_from_images(F4, [1, 0])  # 1 -> 1, t -> 0
    assert not alpha.is_linear()
    for a in F4.elements():
        for b in F4.elements():
            assert alpha(F4.add(a, b)) == F4.add(alpha(a), alpha(b))
