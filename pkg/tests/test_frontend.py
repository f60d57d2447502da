from __future__ import annotations

import pytest

from catalytic.algebra.multipoly import P, Q, T, X, poly
from catalytic.errors import EquationFileError, EquationSyntaxError, UnknownSymbol
from catalytic.frontend import (
    Add,
    Div,
    Mul,
    Num,
    Pow,
    Sub,
    Var,
    build_equation,
    clear_denominators,
    parse,
    parse_equation,
    parse_equation_file,
    to_polynomial_form,
    to_text,
)

WEST = "1/(1-x*t) + x*t*(Q-t*P)*(Q-P)/(1-t)^2 - P"


def test_parse_quotient():
    e = parse("1/(1-x*t)")
    assert e == Div(Num(1), Sub(Num(1), Mul(Var("x"), Var("t"))))


def test_precedence_and_associativity():
    assert parse("1 - x - t") == Sub(Sub(Num(1), Var("x")), Var("t"))
    assert parse("x*t/P") == Div(Mul(Var("x"), Var("t")), Var("P"))
    assert parse("-x^2") == parse("-(x^2)")
    assert parse("2*x^3") == Mul(Num(2), Pow(Var("x"), 3))
    assert parse("x**2") == parse("x^2")


def test_round_trip_printing():
    for text in ["P - 1 - x*t*P*Q", WEST, "-(x + t)^2/(1 - P)", "3/4*P - Q"]:
        e = parse(text)
        assert parse(to_text(e)) == e


def test_catalan_polynomial_form():
    e = parse("P - 1 - x*t*P*Q")
    assert isinstance(e, Sub)
    assert to_polynomial_form(e) == poly("P*Q*x*t - P + 1").primitive_part()


def test_syntax_errors_with_positions():
    with pytest.raises(EquationSyntaxError) as info:
        parse("x +")
    assert info.value.position == 3
    with pytest.raises(UnknownSymbol):
        parse("P + y")
    with pytest.raises(EquationSyntaxError):
        parse("0.5*x")
    with pytest.raises(EquationSyntaxError):
        parse("(x + 1")
    with pytest.raises(EquationSyntaxError):
        parse("x^P")


def test_west_clearing_matches_hand_expansion():
    F, loci = clear_denominators(parse(WEST))
    hand = (1 - T) ** 2 * (1 - X * T) * P - (1 - T) ** 2 - X * T * (1 - X * T) * (Q - T * P) * (Q - P)
    assert F in (hand.primitive_part(), -hand.primitive_part())
    assert F == F.primitive_part()
    assert {str(a) for a in loci} == {"x*t - 1", "t - 1"}


def test_west_degenerates_at_t_equal_one():
    F = to_polynomial_form(parse(WEST))
    assert F.substitute("t", 1) in (X * (X - 1) * (Q - P) ** 2, -X * (X - 1) * (Q - P) ** 2)


def test_pole_in_P_recorded():
    eq = build_equation("1/P - x")
    assert eq.F in (poly("P*x - 1"), poly("-P*x + 1"))
    assert [str(a) for a in eq.excluded_loci] == ["P"]


def test_fixed_point_form():
    eq = build_equation("P = 1 + x*t*P*Q")
    assert eq.phi == parse("1 + x*t*P*Q")
    assert build_equation("P - 1 - x*t*P*Q").phi is None
    lhs, rhs = parse_equation("P = x")
    assert lhs == Var("P") and rhs == Var("x")


def test_equation_file_parsing():
    spec = parse_equation_file("# comment\nname: cat\nequation: P = 1 + x*t*P*Q\norder: 20\ninitial: 1\n")
    assert (spec.name, spec.order, spec.max_deg_Q) == ("cat", 20, 8)
    assert spec.build().F == build_equation("P = 1 + x*t*P*Q").F
    with pytest.raises(EquationFileError):
        parse_equation_file("equation: P = x\ncolour: red\n")
    with pytest.raises(EquationFileError):
        parse_equation_file("name: a\n")
    with pytest.raises(EquationFileError):
        parse_equation_file("equation: P = x\nequation: P = x\n")
    with pytest.raises(EquationFileError):
        parse_equation_file("equation: P = x\norder: -3\n")


def test_add_node_type():
    assert isinstance(parse("x + t"), Add)
