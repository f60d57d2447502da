"""Equation DSL: parsing, printing, and clearing denominators.

The variables are fixed: P is f(x,t), Q is f(x,1), x counts, t is catalytic.
An equation is either ``expr`` (meaning expr = 0) or ``lhs = rhs``; when the
left side is exactly ``P`` the right side is kept as the fixed-point map.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from gmpy2 import mpq

from .algebra.multipoly import ONE_POLY, MultiPoly
from .algebra.rational import ONE, rat, rat_str
from .errors import (
    CatalyticError,
    EquationFileError,
    EquationSyntaxError,
    NonPolynomialDenominator,
    UnknownSymbol,
)

VARIABLES = ("P", "Q", "x", "t")


# --- expression tree -----------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: mpq


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


Expr = Num | Var | Add | Sub | Mul | Div | Pow | Neg

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4, Num: 5, Var: 5}
_BINOPS = {Add: " + ", Sub: " - ", Mul: "*", Div: "/"}


def to_text(e: Expr) -> str:
    """Print with the minimal parentheses that parse back to the same tree."""
    if isinstance(e, Num):
        v = e.value
        if v.denominator == 1 and v >= 0:
            return str(v.numerator)
        return f"({rat_str(v)})"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return "-" + _wrap(e.operand, 3)
    if isinstance(e, Pow):
        return f"{_wrap(e.base, 5)}^{e.exponent}"
    p = _PREC[type(e)]
    return _wrap(e.left, p) + _BINOPS[type(e)] + _wrap(e.right, p + 1)


def _wrap(e: Expr, min_prec: int) -> str:
    s = to_text(e)
    return f"({s})" if _PREC[type(e)] < min_prec else s


def mentions(e: Expr, names: set[str]) -> bool:
    if isinstance(e, Var):
        return e.name in names
    if isinstance(e, Num):
        return False
    if isinstance(e, (Neg,)):
        return mentions(e.operand, names)
    if isinstance(e, Pow):
        return mentions(e.base, names)
    return mentions(e.left, names) or mentions(e.right, names)


# --- tokenizer and parser ------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\*\*|[-+*/^()=])|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            break
        num, ident, op, bad = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            if m.end() < len(text) and text[m.end()] == ".":
                raise EquationSyntaxError("decimal literals are not allowed", start)
            tokens.append(("num", num, start))
        elif ident is not None:
            if ident not in VARIABLES:
                raise UnknownSymbol(f"unknown symbol {ident!r}", start)
            tokens.append(("var", ident, start))
        elif op is not None:
            tokens.append(("op", "^" if op == "**" else op, start))
        else:
            raise EquationSyntaxError(f"unexpected character {bad!r}", start)
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """expr := term (+|- term)* ; term := unary (*|/ unary)* ;
    unary := -unary | +unary | power ; power := atom (^ INT)*"""

    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise EquationSyntaxError(f"expected {op!r}", pos)

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            rhs = self.unary()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def unary(self) -> Expr:
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return Neg(self.unary())
        if kind == "op" and val == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        node = self.atom()
        while self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            node = Pow(node, self.exponent())
        return node

    def exponent(self) -> int:
        kind, val, pos = self.take()
        if kind == "num":
            return int(val)
        if kind == "op" and val == "(":
            k, v, p = self.take()
            if k != "num":
                raise EquationSyntaxError("exponent must be a nonnegative integer", p)
            self.expect_op(")")
            return int(v)
        raise EquationSyntaxError("exponent must be a nonnegative integer", pos)

    def atom(self) -> Expr:
        kind, val, pos = self.take()
        if kind == "num":
            return Num(mpq(int(val)))
        if kind == "var":
            return Var(val)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        if kind == "end":
            raise EquationSyntaxError("unexpected end of input", pos)
        raise EquationSyntaxError(f"unexpected {val!r}", pos)

    def finish(self):
        kind, val, pos = self.peek()
        if kind != "end":
            raise EquationSyntaxError(f"unexpected {val!r}", pos)


def parse(text: str) -> Expr:
    """Parse one expression (no ``=``)."""
    if not text.strip():
        raise EquationSyntaxError("empty expression", 0)
    p = _Parser(text)
    node = p.expr()
    p.finish()
    return node


def parse_equation(text: str) -> tuple[Expr, Expr | None]:
    """Return (lhs, rhs); rhs is None for the ``expr = 0`` form."""
    if not text.strip():
        raise EquationSyntaxError("empty equation", 0)
    p = _Parser(text)
    lhs = p.expr()
    rhs = None
    if p.peek()[:2] == ("op", "="):
        p.take()
        rhs = p.expr()
    p.finish()
    return lhs, rhs


# --- clearing denominators -----------------------------------------------


class _Factored:
    """scalar * prod(num atoms) / prod(den atoms); atoms are primitive polynomials."""

    __slots__ = ("scalar", "num", "den")

    def __init__(self, scalar, num=None, den=None):
        self.scalar = mpq(scalar)
        self.num = dict(num or {})
        self.den = dict(den or {})
        if not self.scalar:
            self.num, self.den = {}, {}
        for a in set(self.num) & set(self.den):
            k = min(self.num[a], self.den[a])
            for d in (self.num, self.den):
                d[a] -= k
                if not d[a]:
                    del d[a]

    @classmethod
    def of_poly(cls, p: MultiPoly) -> "_Factored":
        if not p:
            return cls(0)
        if p.is_constant():
            return cls(p.constant_value())
        prim = p.primitive_part()
        return cls(p.leading_term()[1] / prim.leading_term()[1], {prim: 1})

    def numerator(self) -> MultiPoly:
        out = ONE_POLY * self.scalar
        for a, e in sorted(self.num.items(), key=lambda kv: str(kv[0])):
            out = out * a**e
        return out


def _merge(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for k, e in b.items():
        out[k] = out.get(k, 0) + sign * e
    return out


class _Clearer:
    def __init__(self):
        self.loci: list[MultiPoly] = []

    def value(self, e: Expr) -> _Factored:
        if isinstance(e, Num):
            return _Factored(e.value)
        if isinstance(e, Var):
            return _Factored(ONE, {MultiPoly.var(e.name): 1})
        if isinstance(e, Neg):
            v = self.value(e.operand)
            return _Factored(-v.scalar, v.num, v.den)
        if isinstance(e, Pow):
            v = self.value(e.base)
            k = e.exponent
            return _Factored(
                v.scalar**k,
                {a: m * k for a, m in v.num.items()} if k else {},
                {a: m * k for a, m in v.den.items()} if k else {},
            )
        if isinstance(e, Mul):
            a, b = self.value(e.left), self.value(e.right)
            return _Factored(a.scalar * b.scalar, _merge(a.num, b.num), _merge(a.den, b.den))
        if isinstance(e, Div):
            a, b = self.value(e.left), self.value(e.right)
            if not b.scalar:
                raise NonPolynomialDenominator(f"denominator {to_text(e.right)} is identically zero")
            for atom in b.num:
                if atom not in self.loci:
                    self.loci.append(atom)
            return _Factored(a.scalar / b.scalar, _merge(a.num, b.den), _merge(a.den, b.num))
        if isinstance(e, (Add, Sub)):
            a, b = self.value(e.left), self.value(e.right)
            if isinstance(e, Sub):
                b = _Factored(-b.scalar, b.num, b.den)
            if not a.scalar:
                return b
            if not b.scalar:
                return a
            den = {k: max(a.den.get(k, 0), b.den.get(k, 0)) for k in set(a.den) | set(b.den)}
            total = MultiPoly()
            for v in (a, b):
                lifted = _Factored(v.scalar, _merge(v.num, {k: den[k] - v.den.get(k, 0) for k in den}))
                total = total + lifted.numerator()
            f = _Factored.of_poly(total)
            return _Factored(f.scalar, f.num, den)
        raise TypeError(f"not an expression node: {e!r}")


def clear_denominators(e: Expr) -> tuple[MultiPoly, tuple[MultiPoly, ...]]:
    """Polynomial F with e = 0 equivalent to F = 0 off the recorded loci.

    Returns (F, loci) where loci are the primitive denominator factors.
    F is primitive and sign-normalized; the zero polynomial is returned as is.
    """
    c = _Clearer()
    v = c.value(e)
    if not v.scalar:
        return MultiPoly(), tuple(c.loci)
    return v.numerator().primitive_part(), tuple(c.loci)


def to_polynomial_form(e: Expr) -> MultiPoly:
    return clear_denominators(e)[0]


# --- functional equations and equation files -----------------------------


@dataclass(frozen=True)
class FunctionalEquation:
    F: MultiPoly
    phi: Expr | None = None
    initial: mpq = ONE
    name: str = "equation"
    text: str = ""
    loci: tuple = field(default=())

    @property
    def excluded_loci(self) -> tuple[MultiPoly, ...]:
        """Denominator factors involving P or Q."""
        return tuple(a for a in self.loci if {"P", "Q"} & set(a.vars))


def build_equation(text: str, initial=1, name: str = "equation") -> FunctionalEquation:
    lhs, rhs = parse_equation(text)
    expr = lhs if rhs is None else Sub(lhs, rhs)
    phi = rhs if rhs is not None and lhs == Var("P") else None
    F, loci = clear_denominators(expr)
    if not F:
        raise CatalyticError("equation is identically zero")
    if F.degree("P") < 1:
        raise CatalyticError("equation does not involve P")
    return FunctionalEquation(F=F, phi=phi, initial=rat(initial), name=name, text=text.strip(), loci=loci)


@dataclass
class EquationFile:
    name: str
    equation: str
    initial: mpq = ONE
    order: int = 60
    max_deg_Q: int = 8
    max_deg_x: int = 8

    def build(self) -> FunctionalEquation:
        return build_equation(self.equation, self.initial, self.name)


_INT_KEYS = {"order", "max_deg_Q", "max_deg_x"}
_KEYS = {"name", "equation", "initial"} | _INT_KEYS


def parse_equation_file(text: str, default_name: str = "equation") -> EquationFile:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, val = line.partition(":")
        key = key.strip()
        if not sep:
            raise EquationFileError(f"line {lineno}: expected 'key: value'")
        if key not in _KEYS:
            raise EquationFileError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise EquationFileError(f"line {lineno}: duplicate key {key!r}")
        values[key] = val.strip()
    if "equation" not in values:
        raise EquationFileError("missing 'equation:' line")
    spec = EquationFile(name=values.get("name", default_name), equation=values["equation"])
    try:
        if "initial" in values:
            spec.initial = rat(values["initial"])
        for key in _INT_KEYS & values.keys():
            v = int(values[key])
            if v < 1:
                raise ValueError
            setattr(spec, key, v)
    except (ValueError, ZeroDivisionError):
        raise EquationFileError(f"bad value in equation file: {values}") from None
    return spec


def load_equation_file(path: str | Path) -> EquationFile:
    path = Path(path)
    return parse_equation_file(path.read_text(encoding="utf-8"), default_name=path.stem)
