from __future__ import annotations

import random
from math import factorial

import pytest
from gmpy2 import mpq

from catalytic.algebra import upoly
from catalytic.algebra.multipoly import MultiPoly, poly
from catalytic.errors import InsufficientOrder, NoGuess
from catalytic.frontend import build_equation
from catalytic.guessing import AlgebraicGuess, guess_algebraic_2var, guess_algebraic_3var, guess_recurrence
from catalytic.series import PolySeries, RationalSeries
from catalytic.solver import solve
from catalytic.verify import eliminate_Q
from conftest import solved
from oracles import catalan, two_stack_sortable


def catalan_series(order: int) -> RationalSeries:
    return RationalSeries.from_list([catalan(n) for n in range(order + 1)])


def brute_annihilates(I: MultiPoly, values: list, upto: int) -> bool:
    """I(s(x), x) mod x^(upto+1) with plain integer list arithmetic."""
    acc = [mpq(0)] * (upto + 1)
    for (a, b, j, k), c in I.terms.items():
        power = [mpq(1)] + [mpq(0)] * upto
        for _ in range(b):
            power = [sum(power[i] * values[n - i] for i in range(n + 1)) for n in range(upto + 1)]
        for n in range(j, upto + 1):
            acc[n] += c * power[n - j]
    return not any(acc)


def test_geometric():
    g = guess_algebraic_2var(RationalSeries.from_list([1] * 30), 1, 1)
    assert g.poly in (poly("Q*x - Q + 1"), poly("-Q*x + Q - 1"))


def test_catalan_guess():
    s = catalan_series(40)
    g = guess_algebraic_2var(s, 2, 1)
    assert g.poly == poly("Q^2*x - Q + 1")
    assert brute_annihilates(g.poly, list(s.coeffs), 30)
    assert g.margin >= 10 and g.matched_order == 40 and g.nullspace_dim == 1


def test_west_guess_certifies_shape(west):
    _, sol = west
    g = guess_algebraic_2var(sol.f_x1, 8, 8)
    assert g.bounds == (3, 2)
    assert brute_annihilates(g.poly, list(sol.f_x1.coeffs), 40)


def test_minimality_by_rerunning_smaller_bounds(west):
    _, sol = west
    g = guess_algebraic_2var(sol.f_x1, 8, 8)
    dq, dx = g.bounds
    with pytest.raises(NoGuess):
        guess_algebraic_2var(sol.f_x1, dq - 1, 8)
    with pytest.raises(NoGuess):
        guess_algebraic_2var(sol.f_x1, dq, dx - 1) if dx else None


def test_scaling_invariance():
    s = catalan_series(40)
    g = guess_algebraic_2var(s, 4, 4)
    g2 = guess_algebraic_2var(s.scale(2), 4, 4)
    # I2(Q, x) is I(Q/2, x) up to normalization
    expected = g.poly.substitute("Q", MultiPoly.var("Q").scale(mpq(1, 2))).primitive_part()
    assert g2.poly == expected


def test_no_guess_and_insufficient_order():
    rng = random.Random(5)
    noise = RationalSeries.from_list([rng.randint(-10**6, 10**6) for _ in range(30)])
    with pytest.raises(NoGuess):
        guess_algebraic_2var(noise, 1, 1)
    with pytest.raises(InsufficientOrder):
        guess_algebraic_2var(catalan_series(8), 2, 2)


def test_3var_examples(catalan):
    f = solve(build_equation("P = 1 + x*t*P"), 20).f_xt
    g = guess_algebraic_3var(f, 1, 1, 1)
    assert g.poly in (poly("P*x*t - P + 1"), poly("-P*x*t + P - 1"))
    eq, sol = catalan
    g3 = guess_algebraic_3var(sol.f_xt.truncate(40), 2, 2, 2)
    G = eliminate_Q(eq.F, poly("Q^2*x - Q + 1")).primitive_part()
    assert g3.poly.primitive_part().divides(G)
    rng = random.Random(1)
    noise = PolySeries.from_coeffs([upoly.from_ints(*[rng.randint(-99, 99) for _ in range(3)]) for _ in range(40)])
    with pytest.raises(NoGuess):
        guess_algebraic_3var(noise, 1, 1, 1)


def test_recurrence_examples(west):
    rec = guess_recurrence([catalan(n) for n in range(40)], 3, 3)
    assert str(rec) == "(n + 2)*a(n+1) + (-4*n - 2)*a(n) = 0"
    rec = guess_recurrence([factorial(n) for n in range(30)], 2, 2)
    assert str(rec) == "(1)*a(n+1) + (-n - 1)*a(n) = 0"
    _, sol = west
    rec = guess_recurrence(sol.f_x1.coeffs, 6, 6).without_common_factor()
    assert rec.order == 1 and rec.offset == 1
    assert rec.coeffs == (upoly.from_ints(-6, -27, -27), upoly.from_ints(12, 14, 4))
    # the relation is the ratio of the closed formula on 30 terms
    vals = [two_stack_sortable(n) for n in range(1, 31)]
    assert all(
        upoly.evaluate(rec.coeffs[1], n) * vals[n] + upoly.evaluate(rec.coeffs[0], n) * vals[n - 1] == 0
        for n in range(1, 30)
    )


def test_recurrence_no_guess():
    rng = random.Random(9)
    with pytest.raises(NoGuess):
        guess_recurrence([rng.randint(1, 10**9) for _ in range(40)], 2, 2)
    with pytest.raises(InsufficientOrder):
        guess_recurrence([1, 2, 3], 1, 1)


def test_guess_json_round_trip():
    g = guess_algebraic_2var(catalan_series(30), 2, 2)
    assert AlgebraicGuess.from_json(g.to_json()) == g


def test_corpus_guesses_are_sound():
    for name in ("motzkin", "ternary", "schroeder"):
        _, sol = solved(name)
        g = guess_algebraic_2var(sol.f_x1, 8, 8)
        assert brute_annihilates(g.poly, list(sol.f_x1.coeffs), 60)
