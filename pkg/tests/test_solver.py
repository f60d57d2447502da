from __future__ import annotations

import pytest

from catalytic.errors import CatalyticError, InconsistentOrder, NoContraction, NonUniqueOrder, SolverDisagreement
from catalytic.frontend import build_equation
from catalytic.series import specialize_t1
from catalytic.solver import SolverResult, residual, solve, solve_fixed_point, solve_order_by_order
from conftest import solved
from oracles import catalan as catalan_number, two_stack_sortable


def brute_force_catalan(order: int) -> list[dict]:
    """Iterate f <- 1 + x t f f(x,1) on dicts {(n, k): coeff} of x^n t^k."""
    f = {(0, 0): 1}
    for _ in range(order + 1):
        f1 = {}
        for (n, k), c in f.items():
            f1[n] = f1.get(n, 0) + c
        new = {(0, 0): 1}
        for (n, k), c in f.items():
            for m, d in f1.items():
                if n + m + 1 <= order:
                    key = (n + m + 1, k + 1)
                    new[key] = new.get(key, 0) + c * d
        f = new
    return [{k: c for (n, k), c in f.items() if n == i} for i in range(order + 1)]


def test_catalan_low_orders():
    eq = build_equation("P = 1 + x*t*P*Q")
    sol = solve_fixed_point(eq, 3)
    assert sol.f_xt.to_strings() == ["1", "t", "t^2 + t", "t^3 + 2*t^2 + 2*t"]
    assert sol.f_x1.to_list() == ["1", "1", "2", "5"]


def test_catalan_matches_brute_force_and_binomials(catalan):
    _, sol = catalan
    ref = brute_force_catalan(12)
    for n in range(13):
        assert {k: int(c) for k, c in enumerate(sol.f_xt[n]) if c} == ref[n]
    assert [int(v) for v in sol.f_x1.coeffs] == [catalan_number(n) for n in range(61)]


def test_west_low_orders():
    eq = build_equation("P = 1/(1-x*t) + x*t*(Q-t*P)*(Q-P)/(1-t)^2")
    sol = solve(eq, 2)
    assert sol.f_xt.to_strings() == ["1", "t", "t^2 + t"]
    assert sol.f_x1.to_list() == ["1", "1", "2"]


def test_west_against_formula(west):
    _, sol = west
    assert sol.f_x1[0] == 1
    assert all(sol.f_x1[n] == two_stack_sortable(n) for n in range(1, 61))


def test_solvers_agree_and_residual_vanishes():
    for name in ("west", "catalan", "motzkin", "cubic_divided"):
        eq, sol = solved(name)
        assert sol.method == "both_agree"
        assert solve_order_by_order(eq, 30).f_xt == solve_fixed_point(eq, 30).f_xt
        assert residual(eq, sol.f_xt, sol.f_x1).is_zero()
        assert specialize_t1(sol.f_xt) == sol.f_x1


def test_degenerate_and_constant_equations():
    assert solve_fixed_point(build_equation("P = x"), 4).f_xt.to_strings() == ["0", "1", "0", "0", "0"]
    assert solve(build_equation("P = x", initial=0), 4).f_x1.to_list() == ["0", "1", "0", "0", "0"]
    assert solve_order_by_order(build_equation("P^2 - 1"), 6).f_x1.to_list() == ["1"] + ["0"] * 6


def test_solver_failures():
    with pytest.raises(NoContraction) as info:
        solve_fixed_point(build_equation("P = 2*P - 1"), 3)
    assert info.value.order == 1
    with pytest.raises(NonUniqueOrder):
        solve_order_by_order(build_equation("P - Q"), 3)
    with pytest.raises(InconsistentOrder):
        solve_order_by_order(build_equation("P = x"), 3)
    with pytest.raises(CatalyticError):
        solve_fixed_point(build_equation("P - 1 - x*t*P*Q"), 3)
    assert issubclass(SolverDisagreement, CatalyticError)


def test_result_json_round_trip_and_determinism():
    eq = build_equation("P = 1 + x*t*P*Q")
    a, b = solve(eq, 10), solve(eq, 10)
    assert a.to_json() == b.to_json()
    back = SolverResult.from_json(a.to_json())
    assert back.f_xt == a.f_xt and back.f_x1 == a.f_x1


def test_corpus_sequences_match_their_names():
    from math import comb

    from oracles import motzkin

    def schroeder(n):
        return sum(comb(n + k, 2 * k) * catalan_number(k) for k in range(n + 1))

    expected = {
        "motzkin": [motzkin(n) for n in range(25)],
        "ternary": [comb(3 * n, n) // (2 * n + 1) for n in range(25)],
        "schroeder": [schroeder(n) for n in range(25)],
        "double_catalan": [2**n * catalan_number(n) for n in range(25)],
        "geometric": [1] * 25,
    }
    for name, values in expected.items():
        _, sol = solved(name)
        assert [int(v) for v in sol.f_x1.coeffs[:25]] == values, name
