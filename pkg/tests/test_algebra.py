"""Rationals, univariate and multivariate polynomials."""
from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from catalytic.algebra import upoly
from catalytic.algebra.multipoly import MultiPoly, P, Q, T, X, poly
from catalytic.algebra.rational import content, rat, rat_str
from catalytic.errors import DivisibilityFailure

SYMS = sympy.symbols("P Q x t")


def to_sympy(p: MultiPoly):
    return sympy.expand(sympy.sympify(str(p).replace("^", "**"), locals=dict(zip("PQxt", SYMS))))


def random_poly(rng: random.Random, terms=5, deg=3, vars_="PQxt") -> MultiPoly:
    out = MultiPoly.const(0)
    for _ in range(terms):
        mono = MultiPoly.const(rng.randint(-9, 9))
        for v in vars_:
            mono = mono * MultiPoly.var(v, rng.randint(0, deg))
        out = out + mono
    return out


# --- rationals -------------------------------------------------------------


def test_rat_is_reduced_and_rejects_floats():
    r = rat("6/4")
    assert (r.numerator, r.denominator) == (3, 2)
    assert rat(0).denominator == 1
    assert rat(Fraction(-2, 6)) == mpq(-1, 3)
    with pytest.raises(TypeError):
        rat(0.5)
    assert rat_str(mpq(-3, 2)) == "-3/2"
    assert content([mpq(6), mpq(-4)]) == 2


# --- univariate ------------------------------------------------------------


def test_upoly_basic_ops():
    p = upoly.from_ints(1, -1)  # 1 - t
    assert upoly.mul(p, p) == upoly.from_ints(1, -2, 1)
    assert upoly.div_exact(upoly.from_ints(1, -2, 1), p) == p
    with pytest.raises(DivisibilityFailure):
        upoly.div_exact(upoly.from_ints(0, 1), p)
    assert upoly.gcd(upoly.from_ints(-1, 0, 1), upoly.from_ints(1, 1)) == upoly.from_ints(1, 1)
    assert upoly.compose_shift(upoly.from_ints(0, 0, 1), 1) == upoly.from_ints(1, 2, 1)
    assert upoly.to_str(upoly.from_ints(1, -2, 1), "t") == "t^2 - 2*t + 1"


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.integers(-50, 50), min_size=0, max_size=40),
    st.lists(st.integers(-50, 50), min_size=0, max_size=40),
)
def test_upoly_kronecker_matches_schoolbook(a, b):
    pa, pb = upoly.from_ints(*a), upoly.from_ints(*b)
    assert upoly.mul(pa, pb) == upoly.mul_schoolbook(pa, pb)


def test_upoly_long_product_with_fractions():
    rng = random.Random(3)
    a = upoly.trim(mpq(rng.randint(-99, 99), rng.randint(1, 9)) for _ in range(60))
    b = upoly.trim(mpq(rng.randint(-99, 99), rng.randint(1, 9)) for _ in range(50))
    assert upoly.mul(a, b) == upoly.mul_schoolbook(a, b)


# --- multivariate: worked examples ------------------------------------------


def test_multiply_examples():
    assert (X + T) * (X - T) == poly("x^2 - t^2")
    assert (Q - 1) * (X * Q - 1) == poly("x*Q^2 - x*Q - Q + 1")
    rng = random.Random(0)
    for _ in range(20):
        p = random_poly(rng)
        assert p * MultiPoly.const(1) == p


def test_substitute_examples():
    assert poly("x*Q^2 - Q + 1").substitute("Q", 1) == X
    assert ((1 - T) ** 2 * P).substitute("t", 1) == MultiPoly.const(0)
    assert poly("P*t + Q").substitute("P", Q).substitute("t", 1) == 2 * Q


def test_derivative_examples():
    assert poly("x*Q^2 - Q + 1").derivative("Q") == poly("2*x*Q - 1")
    assert MultiPoly.const(5).derivative("x") == MultiPoly.const(0)
    assert ((1 - T) ** 2).derivative("t") == -2 * (1 - T)


def test_exact_divide_examples():
    assert poly("x^2 - t^2").exact_divide(poly("x - t")) == poly("x + t")
    I = poly("x*Q^2 - Q + 1")
    assert (X * I).exact_divide(I) == X
    with pytest.raises(DivisibilityFailure):
        poly("x*Q + 1").exact_divide(poly("Q - 1"))


def test_primitive_part_examples():
    assert poly("6*Q - 4").primitive_part() == poly("3*Q - 2")
    assert poly("-Q + x").primitive_part() == poly("Q - x")
    assert poly("1/2*x*Q^2 - 1/2*Q + 1/2").primitive_part() == poly("x*Q^2 - Q + 1")


def test_canonical_text_round_trip():
    p = poly("3/2*x*t - Q^2 + P^3*x^2 - 7")
    text = str(p)
    assert text == "P^3*x^2 - Q^2 + 3/2*x*t - 7"
    assert MultiPoly.parse(text) == p
    assert str(MultiPoly.parse(text)) == text


# --- multivariate: properties against sympy ------------------------------


def test_ring_axioms_random():
    rng = random.Random(1)
    for _ in range(200):
        a, b, c = (random_poly(rng, terms=4, deg=2) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert (a + b) + c == a + (b + c)


def test_product_matches_sympy():
    rng = random.Random(2)
    for _ in range(30):
        a, b = random_poly(rng), random_poly(rng)
        assert sympy.expand(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0


def test_exact_divide_inverts_multiply():
    rng = random.Random(4)
    for _ in range(100):
        a = random_poly(rng, terms=4, deg=2)
        b = random_poly(rng, terms=3, deg=2)
        if not b:
            continue
        assert (a * b).exact_divide(b) == a


def test_primitive_part_idempotent():
    rng = random.Random(5)
    for _ in range(50):
        p = random_poly(rng).scale(mpq(rng.randint(1, 9), rng.randint(1, 9)))
        if p:
            pp = p.primitive_part()
            assert pp.primitive_part() == pp


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_substitute_is_ring_morphism(seed):
    rng = random.Random(seed)
    a, b = random_poly(rng, terms=3, deg=2), random_poly(rng, terms=3, deg=2)
    v = random_poly(rng, terms=2, deg=1, vars_="xt")
    assert (a * b).substitute("P", v) == a.substitute("P", v) * b.substitute("P", v)
    assert (a + b).substitute("t", 1) == a.substitute("t", 1) + b.substitute("t", 1)


def test_monomial_content():
    p = poly("x^2*P + x^3")
    assert p.monomial_content("x") == 2
    assert p.divide_monomial("x", 2) == poly("P + x")
    assert P.monomial_content("x") == 0
