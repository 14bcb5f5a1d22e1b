from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qstab.ncpoly import (
    Alphabet,
    Generator,
    NCPolynomial,
    ParseError,
    StructuralError,
    format_poly,
    parse_polynomial,
    poly_add,
    poly_adjoint,
    poly_mul,
)

from conftest import polynomials

MAGIC = Alphabet([Generator(f"a_{i}{j}", True, (i, j)) for i in (1, 2) for j in (1, 2)])
MIXED = Alphabet([Generator("x", True), Generator("y", False), Generator("z", False)])


def g(name, alphabet=MAGIC):
    return alphabet.gen(name)


def test_add_examples():
    a11, a12 = g("a_11"), g("a_12")
    assert poly_add(a11, -a11).is_zero()
    assert poly_add(a11, a12) == a11 + a12
    assert len(poly_add(a11, a12)) == 2
    half = a11.scale(Fraction(1, 2))
    assert poly_add(half, half) == a11


def test_mul_examples():
    a11, a12, a21 = g("a_11"), g("a_12"), g("a_21")
    assert poly_mul(a11, MAGIC.one()) == a11
    assert poly_mul(a11 + a12, a21) == a11 * a21 + a12 * a21
    w = poly_mul(a11, a12)
    assert w.words() == [(MAGIC.code("a_11"), MAGIC.code("a_12"))]


def test_adjoint_examples():
    a11, a12 = g("a_11"), g("a_12")
    assert poly_adjoint(a11 * a12) == a12 * a11
    assert poly_adjoint(MAGIC.one()) == MAGIC.one()
    y = MIXED.gen("y")
    assert poly_adjoint(y) == MIXED.gen("y", starred=True)
    assert poly_adjoint(MIXED.gen("x") * y) == MIXED.gen("y", starred=True) * MIXED.gen("x")


def test_mismatched_alphabets():
    with pytest.raises(StructuralError):
        poly_add(g("a_11"), MIXED.gen("x"))
    with pytest.raises(StructuralError):
        poly_mul(g("a_11"), MIXED.gen("x"))


def test_zero_coefficients_dropped_and_lowest_terms():
    p = NCPolynomial(MAGIC, {(0,): Fraction(2, 4), (1,): 0})
    assert dict(p.items()) == {(0,): Fraction(1, 2)}
    assert p.coefficient((0,)).denominator == 2


def test_deglex_term_order():
    p = g("a_22") + g("a_11") * g("a_11") + 3
    words = p.words()
    assert words == sorted(words, key=lambda w: (len(w), w))
    assert p.leading_word() == (0, 0)
    assert str(p) == "a_11*a_11 + a_22 + 3"


def test_parse_round_trip():
    p = parse_polynomial("2*a_11*a_12 - 1/2 a_21 + (a_11 + 1)^2", MAGIC)
    a11 = g("a_11")
    assert p == 2 * a11 * g("a_12") - Fraction(1, 2) * g("a_21") + (a11 + 1) * (a11 + 1)
    assert parse_polynomial(format_poly(p), MAGIC) == p
    assert parse_polynomial("y^* x", MIXED) == MIXED.gen("y", starred=True) * MIXED.gen("x")


@pytest.mark.parametrize("text", ["a_11 +", "a_99", "(a_11", "a_11 ^ x", "1/0"])
def test_parse_errors(text):
    with pytest.raises((ParseError, ZeroDivisionError)):
        parse_polynomial(text, MAGIC)


P = polynomials(MIXED)


@given(P, P, P)
def test_ring_axioms(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert (p + q) * r == p * r + q * r
    assert p * MIXED.one() == p == MIXED.one() * p
    assert p + MIXED.zero() == p
    assert p + q == q + p


@given(P, P)
def test_adjoint_is_anti_multiplicative_involution(p, q):
    assert poly_adjoint(poly_adjoint(p)) == p
    assert poly_adjoint(p * q) == poly_adjoint(q) * poly_adjoint(p)
    assert poly_adjoint(p + q) == poly_adjoint(p) + poly_adjoint(q)


@given(P)
def test_canonicalization_idempotent(p):
    assert NCPolynomial(MIXED, dict(p.items())) == p
    assert p.canonical() == p
    assert hash(p.canonical()) == hash(p)


@given(P, st.fractions(max_denominator=5))
def test_scalars_commute(p, c):
    assert p.scale(c) == p * MIXED.scalar(c) == MIXED.scalar(c) * p
