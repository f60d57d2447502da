"""Truncated power series in x.

``RationalSeries`` has rational coefficients (f(x,1)); ``PolySeries`` has
coefficients in Q[t] (f(x,t)), stored as dense ``upoly`` tuples.  A series of
order N is known modulo x^(N+1).  Binary operations truncate to the smaller
order, never inflate it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from gmpy2 import mpq

from .algebra import upoly
from .algebra.multipoly import MultiPoly
from .algebra.rational import ONE, ZERO, rat, rat_str
from .errors import DividedDifferenceFailure, DivisibilityFailure, NotAUnit


@dataclass(frozen=True)
class RationalSeries:
    coeffs: tuple
    order: int

    def __post_init__(self):
        if len(self.coeffs) != self.order + 1:
            raise ValueError("coeffs must have length order + 1")

    @classmethod
    def from_list(cls, values: Sequence, order: int | None = None) -> "RationalSeries":
        vals = [rat(v) for v in values]
        if order is None:
            order = len(vals) - 1
        vals = (vals + [ZERO] * (order + 1))[: order + 1]
        return cls(tuple(vals), order)

    def __getitem__(self, n: int) -> mpq:
        return self.coeffs[n]

    def truncate(self, order: int) -> "RationalSeries":
        if order > self.order:
            raise ValueError("cannot raise the truncation order")
        return RationalSeries(self.coeffs[: order + 1], order)

    def __mul__(self, other: "RationalSeries") -> "RationalSeries":
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(n + 1):
            s = ZERO
            for i in range(k + 1):
                if a[i] and b[k - i]:
                    s += a[i] * b[k - i]
            out.append(s)
        return RationalSeries(tuple(out), n)

    def __add__(self, other: "RationalSeries") -> "RationalSeries":
        n = min(self.order, other.order)
        return RationalSeries(tuple(self.coeffs[i] + other.coeffs[i] for i in range(n + 1)), n)

    def __sub__(self, other: "RationalSeries") -> "RationalSeries":
        n = min(self.order, other.order)
        return RationalSeries(tuple(self.coeffs[i] - other.coeffs[i] for i in range(n + 1)), n)

    def scale(self, c) -> "RationalSeries":
        c = rat(c)
        return RationalSeries(tuple(v * c for v in self.coeffs), self.order)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_list(self) -> list[str]:
        """Plain rational list, e.g. for recurrence guessing or eyeballing."""
        return [rat_str(c) for c in self.coeffs]

    def as_polyseries(self) -> "PolySeries":
        return PolySeries(tuple(upoly.const(c) for c in self.coeffs), self.order)

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": self.to_list()}

    @classmethod
    def from_json(cls, data: dict) -> "RationalSeries":
        return cls.from_list(data["coeffs"], data["order"])


@dataclass(frozen=True)
class PolySeries:
    coeffs: tuple  # of upoly tuples in t
    order: int

    def __post_init__(self):
        if len(self.coeffs) != self.order + 1:
            raise ValueError("coeffs must have length order + 1")

    @classmethod
    def from_coeffs(cls, coeffs: Sequence, order: int | None = None) -> "PolySeries":
        cs = [upoly.trim(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        cs = (cs + [()] * (order + 1))[: order + 1]
        return cls(tuple(cs), order)

    @classmethod
    def from_poly(cls, p: MultiPoly, order: int) -> "PolySeries":
        """Embed a polynomial in x and t."""
        if set(p.vars) - {"x", "t"}:
            raise ValueError(f"{p} is not a polynomial in x and t")
        out = [()] * (order + 1)
        for e, c in p.coefficients("x").items():
            if e <= order:
                out[e] = c.to_upoly("t")
        return cls(tuple(out), order)

    @classmethod
    def one(cls, order: int) -> "PolySeries":
        return cls(((ONE,),) + ((),) * order, order)

    def __getitem__(self, n: int):
        return self.coeffs[n]

    def truncate(self, order: int) -> "PolySeries":
        if order > self.order:
            raise ValueError("cannot raise the truncation order")
        return PolySeries(self.coeffs[: order + 1], order)

    def __add__(self, other: "PolySeries") -> "PolySeries":
        n = min(self.order, other.order)
        return PolySeries(tuple(upoly.add(self.coeffs[i], other.coeffs[i]) for i in range(n + 1)), n)

    def __sub__(self, other: "PolySeries") -> "PolySeries":
        n = min(self.order, other.order)
        return PolySeries(tuple(upoly.sub(self.coeffs[i], other.coeffs[i]) for i in range(n + 1)), n)

    def __neg__(self) -> "PolySeries":
        return PolySeries(tuple(upoly.neg(c) for c in self.coeffs), self.order)

    def __mul__(self, other: "PolySeries") -> "PolySeries":
        return series_multiply(self, other)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient (None for the zero series)."""
        return next((i for i, c in enumerate(self.coeffs) if c), None)

    def t_degree(self) -> int:
        return max((len(c) - 1 for c in self.coeffs), default=-1)

    def to_strings(self) -> list[str]:
        return [upoly.to_str(c, "t") for c in self.coeffs]

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": self.to_strings()}

    @classmethod
    def from_json(cls, data: dict) -> "PolySeries":
        coeffs = [MultiPoly.parse(s).to_upoly("t") for s in data["coeffs"]]
        if len(coeffs) != data["order"] + 1:
            raise ValueError("series length does not match its order")
        return cls(tuple(coeffs), data["order"])


def series_multiply(a: PolySeries, b: PolySeries) -> PolySeries:
    n = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    nz_a = [i for i in range(n + 1) if ac[i]]
    nz_b = {i for i in range(n + 1) if bc[i]}
    out = []
    for k in range(n + 1):
        acc: tuple = ()
        for i in nz_a:
            if i > k:
                break
            if k - i in nz_b:
                acc = upoly.add(acc, upoly.mul(ac[i], bc[k - i]))
        out.append(acc)
    return PolySeries(tuple(out), n)


def series_invert(a: PolySeries) -> PolySeries:
    """Multiplicative inverse; the constant term must be a nonzero rational."""
    a0 = a.coeffs[0]
    if len(a0) != 1:
        raise NotAUnit(f"constant term {upoly.to_str(a0)} is not a nonzero rational")
    inv0 = 1 / a0[0]
    b = [(inv0,)]
    for n in range(1, a.order + 1):
        acc: tuple = ()
        for i in range(1, n + 1):
            if a.coeffs[i] and b[n - i]:
                acc = upoly.add(acc, upoly.mul(a.coeffs[i], b[n - i]))
        b.append(upoly.scale(acc, -inv0))
    return PolySeries(tuple(b), a.order)


def multiply_by_t_factor(a: PolySeries, factor, k: int) -> PolySeries:
    d = upoly.power(upoly.trim(factor), k)
    return PolySeries(tuple(upoly.mul(c, d) for c in a.coeffs), a.order)


def divide_by_t_factor(a: PolySeries, factor, k: int) -> PolySeries:
    """Divide every coefficient exactly by factor(t)^k."""
    if k < 1:
        raise ValueError("multiplicity must be at least 1")
    d = upoly.power(upoly.trim(factor), k)
    out = []
    for n, c in enumerate(a.coeffs):
        try:
            out.append(upoly.div_exact(c, d))
        except DivisibilityFailure:
            raise DividedDifferenceFailure(n) from None
    return PolySeries(tuple(out), a.order)


def specialize_t1(a: PolySeries) -> RationalSeries:
    return RationalSeries(tuple(sum(c, ZERO) for c in a.coeffs), a.order)


def series_power(a: PolySeries, k: int) -> PolySeries:
    out = PolySeries.one(a.order)
    for _ in range(k):
        out = series_multiply(out, a)
    return out


def evaluate_polynomial(F: MultiPoly, P: PolySeries, Q: PolySeries | None = None) -> PolySeries:
    """F(P, Q, x, t) as a series, truncated to the common order."""
    if Q is None:
        if F.degree("Q") > 0:
            raise ValueError("polynomial involves Q but no Q series was given")
        Q = P
    order = min(P.order, Q.order)
    P, Q = P.truncate(order), Q.truncate(order)
    groups: dict[tuple[int, int], dict[int, tuple]] = {}
    for (a, b, j, k), c in F.terms.items():
        g = groups.setdefault((a, b), {})
        g[j] = upoly.add(g.get(j, ()), upoly.monomial(c, k))
    ppow = {0: PolySeries.one(order)}
    qpow = {0: PolySeries.one(order)}
    for a, b in groups:
        for e in range(1, a + 1):
            if e not in ppow:
                ppow[e] = series_multiply(ppow[e - 1], P)
        for e in range(1, b + 1):
            if e not in qpow:
                qpow[e] = series_multiply(qpow[e - 1], Q)
    acc = [()] * (order + 1)
    for (a, b), xcoeffs in sorted(groups.items()):
        s = ppow[a] if b == 0 else (qpow[b] if a == 0 else series_multiply(ppow[a], qpow[b]))
        for j, cj in xcoeffs.items():
            for n in range(j, order + 1):
                if s.coeffs[n - j]:
                    acc[n] = upoly.add(acc[n], upoly.mul(cj, s.coeffs[n - j]))
    return PolySeries(tuple(acc), order)
