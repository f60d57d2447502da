"""Sparse multivariate polynomials over Q in the fixed variables P, Q, x, t.

P stands for f(x,t), Q for f(x,1), x is the counting variable and t the
catalytic one.  Exponent vectors are packed into a single integer (16 bits
per variable, P most significant) so that monomial multiplication is integer
addition and the lexicographic order P > Q > x > t is integer order.
"""
from __future__ import annotations

import re
from types import MappingProxyType
from typing import Mapping

from gmpy2 import mpq

from ..errors import DivisibilityFailure
from . import upoly
from .rational import ONE, ZERO, content, rat, rat_str

VARS = ("P", "Q", "x", "t")
_INDEX = {v: i for i, v in enumerate(VARS)}
_BITS = 16
_FIELD = (1 << _BITS) - 1
_MAX_EXP = 1 << (_BITS - 1)
_SHIFT = {v: _BITS * (len(VARS) - 1 - i) for i, v in enumerate(VARS)}


def pack(exps) -> int:
    key = 0
    for e in exps:
        if not 0 <= e < _MAX_EXP:
            raise OverflowError(f"exponent {e} out of range")
        key = (key << _BITS) | e
    return key


def unpack(key: int) -> tuple[int, int, int, int]:
    return (
        (key >> 48) & _FIELD,
        (key >> 32) & _FIELD,
        (key >> 16) & _FIELD,
        key & _FIELD,
    )


def _exp(key: int, var: str) -> int:
    return (key >> _SHIFT[var]) & _FIELD


def _check_var(var: str) -> None:
    if var not in _INDEX:
        raise ValueError(f"unknown variable {var!r}; expected one of {VARS}")


class MultiPoly:
    """Immutable sparse polynomial; equality is structural on canonical terms."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping | None = None):
        t = {}
        if terms:
            for exps, c in terms.items():
                c = rat(c)
                if c:
                    key = exps if isinstance(exps, int) else pack(_pad(exps))
                    t[key] = t.get(key, ZERO) + c
            t = {k: c for k, c in t.items() if c}
        self._t = t
        self._hash = None

    @classmethod
    def _raw(cls, t: dict) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj._t = t
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c) -> "MultiPoly":
        c = rat(c)
        return cls._raw({0: c} if c else {})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "MultiPoly":
        _check_var(name)
        return cls._raw({power << _SHIFT[name]: ONE})

    @classmethod
    def from_upoly(cls, p, var: str) -> "MultiPoly":
        _check_var(var)
        s = _SHIFT[var]
        return cls._raw({k << s: c for k, c in enumerate(p) if c})

    # --- inspection -----------------------------------------------------

    @property
    def terms(self) -> Mapping[tuple[int, int, int, int], mpq]:
        return MappingProxyType({unpack(k): c for k, c in self._t.items()})

    @property
    def vars(self) -> tuple[str, ...]:
        used = 0
        for k in self._t:
            used |= k
        return tuple(v for v in VARS if (used >> _SHIFT[v]) & _FIELD)

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_constant(self) -> bool:
        return all(k == 0 for k in self._t)

    def constant_value(self) -> mpq:
        return self._t.get(0, ZERO)

    def __len__(self) -> int:
        return len(self._t)

    def degree(self, var: str | None = None) -> int:
        """Degree in ``var`` (total degree if None); -1 for the zero polynomial."""
        if not self._t:
            return -1
        if var is None:
            return max(sum(unpack(k)) for k in self._t)
        _check_var(var)
        s = _SHIFT[var]
        return max((k >> s) & _FIELD for k in self._t)

    def leading_term(self) -> tuple[tuple[int, int, int, int], mpq]:
        k = max(self._t)
        return unpack(k), self._t[k]

    def coefficients(self, var: str) -> dict[int, "MultiPoly"]:
        """Collect in ``var``: {e: coefficient of var^e}."""
        _check_var(var)
        s = _SHIFT[var]
        mask = ~(_FIELD << s)
        out: dict[int, dict] = {}
        for k, c in self._t.items():
            e = (k >> s) & _FIELD
            out.setdefault(e, {})[k & mask] = c
        return {e: MultiPoly._raw(t) for e, t in out.items()}

    def coefficient(self, var: str, e: int) -> "MultiPoly":
        return self.coefficients(var).get(e, ZERO_POLY)

    @classmethod
    def from_coefficients(cls, var: str, coeffs: Mapping[int, "MultiPoly"]) -> "MultiPoly":
        s = _SHIFT[var]
        acc: dict[int, mpq] = {}
        for e, p in coeffs.items():
            for k, c in p._t.items():
                if (k >> s) & _FIELD:
                    raise ValueError(f"coefficient still contains {var}")
                acc[k | (e << s)] = c
        return cls._raw(acc)

    def to_upoly(self, var: str):
        """Dense coefficient tuple, valid when ``var`` is the only variable."""
        others = [v for v in self.vars if v != var]
        if others:
            raise ValueError(f"polynomial is not univariate in {var}: {self}")
        if not self._t:
            return ()
        s = _SHIFT[var]
        out = [ZERO] * (self.degree(var) + 1)
        for k, c in self._t.items():
            out[(k >> s) & _FIELD] = c
        return tuple(out)

    # --- ring operations ------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self._t == other._t
        try:
            return self._t == MultiPoly.const(other)._t
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return other
        return MultiPoly.const(other)

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        t = dict(self._t)
        for k, c in other._t.items():
            v = t.get(k)
            if v is None:
                t[k] = c
            else:
                v += c
                if v:
                    t[k] = v
                else:
                    del t[k]
        return MultiPoly._raw(t)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw({k: -c for k, c in self._t.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            c = rat(other)
            if not c:
                return ZERO_POLY
            return MultiPoly._raw({k: v * c for k, v in self._t.items()})
        a, b = self._t, other._t
        if len(a) < len(b):
            a, b = b, a
        t: dict[int, mpq] = {}
        get = t.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                t[k] = get(k, ZERO) + ca * cb
        return MultiPoly._raw({k: c for k, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative power")
        out = ONE_POLY
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def scale(self, c) -> "MultiPoly":
        return self * rat(c)

    # --- calculus and substitution --------------------------------------

    def derivative(self, var: str) -> "MultiPoly":
        _check_var(var)
        s = _SHIFT[var]
        one = 1 << s
        t = {}
        for k, c in self._t.items():
            e = (k >> s) & _FIELD
            if e:
                t[k - one] = c * e
        return MultiPoly._raw(t)

    def substitute(self, var: str, value) -> "MultiPoly":
        """Replace ``var`` by a polynomial or rational ``value``."""
        _check_var(var)
        coeffs = self.coefficients(var)
        if not isinstance(value, MultiPoly):
            v = rat(value)
            acc: dict[int, mpq] = {}
            for e, p in coeffs.items():
                f = v**e
                if not f:
                    continue
                for k, c in p._t.items():
                    nv = acc.get(k, ZERO) + c * f
                    acc[k] = nv
            return MultiPoly._raw({k: c for k, c in acc.items() if c})
        out = ZERO_POLY
        powers = {0: ONE_POLY}
        top = max(coeffs) if coeffs else 0
        for e in range(1, top + 1):
            powers[e] = powers[e - 1] * value
        for e, p in coeffs.items():
            out = out + p * powers[e]
        return out

    def evaluate(self, **values) -> "MultiPoly":
        out = self
        for var, v in values.items():
            out = out.substitute(var, v)
        return out

    # --- division and normalization -------------------------------------

    def exact_divide(self, d: "MultiPoly") -> "MultiPoly":
        """Return q with self = q*d, or raise DivisibilityFailure."""
        if not d._t:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self._t:
            return ZERO_POLY
        dk = max(d._t)
        dc = d._t[dk]
        dexp = unpack(dk)
        dterms = list(d._t.items())
        if len(dterms) == 1:
            out = {}
            for k, c in self._t.items():
                if any(a < b for a, b in zip(unpack(k), dexp)):
                    raise DivisibilityFailure(f"{d} does not divide {self}")
                out[k - dk] = c / dc
            return MultiPoly._raw(out)
        r = dict(self._t)
        q: dict[int, mpq] = {}
        while r:
            rk = max(r)
            if any(a < b for a, b in zip(unpack(rk), dexp)):
                raise DivisibilityFailure(f"{d} does not divide {self}")
            qk = rk - dk
            qc = r[rk] / dc
            q[qk] = qc
            for k, c in dterms:
                kk = k + qk
                v = r.get(kk, ZERO) - qc * c
                if v:
                    r[kk] = v
                else:
                    r.pop(kk, None)
        return MultiPoly._raw(q)

    def divides(self, other: "MultiPoly") -> bool:
        try:
            other.exact_divide(self)
        except DivisibilityFailure:
            return False
        return True

    def content(self) -> mpq:
        return content(self._t.values())

    def primitive_part(self) -> "MultiPoly":
        """Divide by the rational content; lex-leading coefficient made positive."""
        if not self._t:
            raise ValueError("primitive part of the zero polynomial")
        c = self.content()
        if self._t[max(self._t)] < 0:
            c = -c
        return MultiPoly._raw({k: v / c for k, v in self._t.items()})

    def monomial_content(self, var: str) -> int:
        """Largest e such that var^e divides self."""
        if not self._t:
            return 0
        s = _SHIFT[var]
        return min((k >> s) & _FIELD for k in self._t)

    def divide_monomial(self, var: str, e: int) -> "MultiPoly":
        return self.exact_divide(MultiPoly.var(var, e)) if e else self

    # --- text form ------------------------------------------------------

    def __str__(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for k in sorted(self._t, reverse=True):
            c = self._t[k]
            mono = _mono_str(unpack(k))
            mag = abs(c)
            if not mono:
                body = rat_str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{rat_str(mag)}*{mono}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"MultiPoly({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "MultiPoly":
        """Inverse of ``str`` on canonical forms (also accepts any sum of terms)."""
        s = text.strip()
        if s == "0":
            return ZERO_POLY
        acc: dict[int, mpq] = {}
        pos = 0
        first = True
        for m in _TERM_RE.finditer(s):
            if m.start() != pos:
                raise ValueError(f"cannot parse polynomial {text!r} at {pos}")
            pos = m.end()
            sign, body = m.group(1), m.group(2).strip()
            if not sign and not first:
                raise ValueError(f"missing operator in {text!r}")
            first = False
            coeff = ONE
            exps = [0, 0, 0, 0]
            for i, piece in enumerate(body.split("*")):
                piece = piece.strip()
                if i == 0 and piece[:1].isdigit():
                    coeff = rat(piece)
                    continue
                name, _, power = piece.partition("^")
                if name not in _INDEX:
                    raise ValueError(f"unknown variable {name!r} in {text!r}")
                exps[_INDEX[name]] += int(power) if power else 1
            if sign == "-":
                coeff = -coeff
            key = pack(exps)
            acc[key] = acc.get(key, ZERO) + coeff
        if pos != len(s) or first:
            raise ValueError(f"cannot parse polynomial {text!r}")
        return cls._raw({k: c for k, c in acc.items() if c})


_TERM_RE = re.compile(r"\s*([+-])?\s*([^+-]+)")


def _pad(exps) -> tuple:
    exps = tuple(exps)
    if len(exps) != len(VARS):
        raise ValueError("exponent vectors have one entry per variable P, Q, x, t")
    return exps


def _mono_str(exps) -> str:
    out = []
    for v, e in zip(VARS, exps):
        if e == 1:
            out.append(v)
        elif e:
            out.append(f"{v}^{e}")
    return "*".join(out)


ZERO_POLY = MultiPoly._raw({})
ONE_POLY = MultiPoly._raw({0: ONE})

P = MultiPoly.var("P")
Q = MultiPoly.var("Q")
X = MultiPoly.var("x")
T = MultiPoly.var("t")


def poly(text: str) -> MultiPoly:
    """Shorthand for ``MultiPoly.parse``."""
    return MultiPoly.parse(text)


# functional aliases


def multiply(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return a * b


def substitute(p: MultiPoly, var: str, value) -> MultiPoly:
    return p.substitute(var, value)


def derivative(p: MultiPoly, var: str) -> MultiPoly:
    return p.derivative(var)


def exact_divide(p: MultiPoly, d: MultiPoly) -> MultiPoly:
    return p.exact_divide(d)


def primitive_part(p: MultiPoly) -> MultiPoly:
    return p.primitive_part()


def upoly_to_multipoly(p, var: str) -> MultiPoly:
    return MultiPoly.from_upoly(p, var)


__all__ = [
    "VARS",
    "MultiPoly",
    "ZERO_POLY",
    "ONE_POLY",
    "P",
    "Q",
    "X",
    "T",
    "poly",
    "multiply",
    "substitute",
    "derivative",
    "exact_divide",
    "primitive_part",
    "upoly",
]
