"""From an algebraic equation I(Q, x) = 0 to a linear ODE, a recurrence and a closed form.

Elements of K(x)[Q]/(I) are vectors over rational functions of x in the
basis 1, Q, ..., Q^(d-1).  Differentiating repeatedly and looking for the
first linear dependence gives the ODE.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

from gmpy2 import mpq

from .algebra import upoly
from .algebra.linalg import nullspace_field, solve_field
from .algebra.multipoly import MultiPoly
from .algebra.rational import content, rat
from .algebra.resultant import resultant
from .errors import CatalyticError, DegenerateDerivative, NotFirstOrder
from .guessing import guess_recurrence
from .recurrence import Recurrence, closed_form_from_recurrence, rational_roots
from .series import RationalSeries


class RatFunc:
    """num/den in x, kept reduced with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=(mpq(1),)):
        num, den = upoly.trim(num), upoly.trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = (), (mpq(1),)
            return
        g = upoly.gcd(num, den)
        if len(g) > 1:
            num, den = upoly.div_exact(num, g), upoly.div_exact(den, g)
        lc = den[-1]
        self.num = upoly.scale(num, 1 / lc)
        self.den = upoly.scale(den, 1 / lc)

    def __add__(self, o: "RatFunc") -> "RatFunc":
        if self.den == o.den:
            return RatFunc(upoly.add(self.num, o.num), self.den)
        return RatFunc(
            upoly.add(upoly.mul(self.num, o.den), upoly.mul(o.num, self.den)), upoly.mul(self.den, o.den)
        )

    def __neg__(self) -> "RatFunc":
        return RatFunc(upoly.neg(self.num), self.den)

    def __sub__(self, o: "RatFunc") -> "RatFunc":
        return self + (-o)

    def __mul__(self, o: "RatFunc") -> "RatFunc":
        if not self.num or not o.num:
            return RAT_ZERO
        return RatFunc(upoly.mul(self.num, o.num), upoly.mul(self.den, o.den))

    def __truediv__(self, o: "RatFunc") -> "RatFunc":
        if not o.num:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(upoly.mul(self.num, o.den), upoly.mul(self.den, o.num))

    def __eq__(self, o) -> bool:
        return isinstance(o, RatFunc) and self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self) -> bool:
        return bool(self.num)

    def derivative(self) -> "RatFunc":
        # (n/d)' = (n'd - nd') / d^2
        n, d = self.num, self.den
        return RatFunc(upoly.sub(upoly.mul(upoly.derivative(n), d), upoly.mul(n, upoly.derivative(d))), upoly.mul(d, d))

    def __repr__(self) -> str:
        return f"RatFunc(({upoly.to_str(self.num, 'x')})/({upoly.to_str(self.den, 'x')}))"


RAT_ZERO = RatFunc(())
RAT_ONE = RatFunc((mpq(1),))


def _q_coeffs(I: MultiPoly) -> list[RatFunc]:
    cs = I.coefficients("Q")
    return [RatFunc(cs[e].to_upoly("x")) if e in cs else RAT_ZERO for e in range(max(cs, default=0) + 1)]


class _QuotientRing:
    """K(x)[Q]/(I) with I of Q-degree d."""

    def __init__(self, I: MultiPoly):
        self.I = _q_coeffs(I)
        self.d = len(self.I) - 1
        lc = self.I[-1]
        # Q^d = -sum_{k<d} (I_k / lc) Q^k
        self.tail = [-(c / lc) for c in self.I[:-1]]

    def reduce(self, coeffs: list[RatFunc]) -> list[RatFunc]:
        c = list(coeffs)
        d = self.d
        for k in range(len(c) - 1, d - 1, -1):
            top = c[k]
            if top:
                for j in range(d):
                    if self.tail[j]:
                        c[k - d + j] = c[k - d + j] + top * self.tail[j]
        c = c[:d]
        return c + [RAT_ZERO] * (d - len(c))

    def mul(self, a: list[RatFunc], b: list[RatFunc]) -> list[RatFunc]:
        out = [RAT_ZERO] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            if u:
                for j, v in enumerate(b):
                    if v:
                        out[i + j] = out[i + j] + u * v
        return self.reduce(out)

    def inverse(self, a: list[RatFunc]) -> list[RatFunc]:
        d = self.d
        cols = []
        for k in range(d):
            e = [RAT_ZERO] * d
            e[k] = RAT_ONE
            cols.append(self.mul(a, e))
        matrix = [[cols[k][i] for k in range(d)] for i in range(d)]
        rhs = [RAT_ONE] + [RAT_ZERO] * (d - 1)
        sol = solve_field(matrix, rhs, RAT_ZERO, RAT_ONE)
        if sol is None:
            raise DegenerateDerivative("dI/dQ is not invertible modulo I")
        return sol


@dataclass(frozen=True)
class LinearODE:
    """sum_i coeffs[i](x) * Q^(i)(x) = 0; coefficients are upolys in x."""

    coeffs: tuple

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def apply(self, s: RationalSeries) -> RationalSeries:
        """L(s) truncated to order s.order - m (beyond that derivatives are unknown)."""
        N = s.order - self.order
        if N < 0:
            raise ValueError("series too short for this ODE")
        out = [mpq(0)] * (N + 1)
        der = list(s.coeffs)
        for i, q in enumerate(self.coeffs):
            if i:
                der = [k * der[k] for k in range(1, len(der))]
            for j, c in enumerate(q):
                if not c:
                    continue
                for n in range(j, N + 1):
                    if n - j < len(der):
                        out[n] += c * der[n - j]
        return RationalSeries(tuple(out), N)

    def annihilation_order(self, s: RationalSeries) -> int:
        """First order where L(s) is nonzero, or the checked order + 1."""
        r = self.apply(s)
        return next((n for n, c in enumerate(r.coeffs) if c), r.order + 1)

    def __str__(self) -> str:
        parts = []
        for i in range(self.order, -1, -1):
            q = self.coeffs[i]
            if not q:
                continue
            d = "Q" if i == 0 else "Q'" if i == 1 else f"Q^({i})"
            parts.append(f"({upoly.to_str(q, 'x')})*{d}")
        return " + ".join(parts) + " = 0"

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [upoly.to_str(q, "x") for q in self.coeffs], "text": str(self)}

    @classmethod
    def from_json(cls, data: dict) -> "LinearODE":
        return cls(tuple(MultiPoly.parse(s).to_upoly("x") for s in data["coeffs"]))


def _clear(vec: Sequence[RatFunc]) -> tuple:
    den = reduce(lambda a, b: upoly.div_exact(upoly.mul(a, b), upoly.gcd(a, b)), (v.den for v in vec if v))
    polys = [upoly.div_exact(upoly.mul(v.num, den), v.den) if v else () for v in vec]
    g = reduce(upoly.gcd, (p for p in polys if p))
    if len(g) > 1:
        polys = [upoly.div_exact(p, g) if p else () for p in polys]
    c = content(v for p in polys for v in p)
    top = polys[-1] if polys[-1] else next(p for p in reversed(polys) if p)
    if top[-1] < 0:
        c = -c
    return tuple(tuple(v / c for v in p) for p in polys)


def alg_to_ode(I: MultiPoly) -> LinearODE:
    """Linear ODE with polynomial coefficients satisfied by every root Q(x) of I."""
    if I.degree("Q") < 1:
        raise ValueError("I must involve Q")
    I_Q = I.derivative("Q")
    if not I_Q:
        raise DegenerateDerivative("dI/dQ vanishes identically")
    R = _QuotientRing(I)
    d = R.d

    def elem(p: MultiPoly) -> list[RatFunc]:
        return R.reduce(_q_coeffs(p) if p else [RAT_ZERO])

    # Q' = -I_x / I_Q in the quotient ring
    dq = R.mul(elem(-I.derivative("x")), R.inverse(elem(I_Q)))

    def D(a: list[RatFunc]) -> list[RatFunc]:
        out = [c.derivative() for c in a]
        # d/dx Q^k = k Q^(k-1) Q'
        chain = [RAT_ZERO] * d
        for k in range(1, d):
            if a[k]:
                chain[k - 1] = chain[k - 1] + a[k] * RatFunc((mpq(k),))
        extra = R.mul(chain, dq)
        return [u + v for u, v in zip(out, extra)]

    derivs = [elem(MultiPoly.parse("Q"))]
    for m in range(1, d + 1):
        derivs.append(D(derivs[-1]))
        matrix = [[derivs[i][row] for i in range(m + 1)] for row in range(d)]
        basis = nullspace_field(matrix, m + 1, RAT_ZERO, RAT_ONE)
        if basis:
            vec = min(basis, key=lambda v: sum(1 for c in v if c))
            return LinearODE(_clear(vec))
    raise AssertionError("no dependence among d+1 derivatives")


def _falling(shift, i: int):
    """(n + shift)(n + shift - 1)...(n + shift - i + 1) as a upoly in n."""
    out = (mpq(1),)
    for k in range(i):
        out = upoly.mul(out, (mpq(shift - k), mpq(1)))
    return out


def ode_to_recurrence(ode: LinearODE) -> Recurrence:
    """Coefficient recurrence of a power series solution of ``ode``.

    x^j D^i maps sum a_m x^m to sum (m+s)_falling(i) a(m+s) x^m with s = i - j.
    """
    terms: dict[int, tuple] = {}
    for i, q in enumerate(ode.coeffs):
        for j, c in enumerate(q):
            if c:
                s = i - j
                terms[s] = upoly.add(terms.get(s, ()), upoly.scale(_falling(s, i), c))
    terms = {s: p for s, p in terms.items() if p}
    if not terms:
        raise ValueError("ODE has zero recurrence")
    lo, hi = min(terms), max(terms)
    # re-index n = m + lo; the relation holds for m >= 0 with a(k) = 0 for k < 0
    coeffs = tuple(upoly.compose_shift(terms.get(s, ()), -lo) for s in range(lo, hi + 1))
    return Recurrence(coeffs, max(lo, 0)).normalized()


def implies_first_order(big: Recurrence, small: Recurrence, values: Sequence) -> bool:
    """True when ``small`` (order 1) is a consequence of ``big`` on ``values``.

    The hypergeometric term h with h(n+1)/h(n) = -p0/p1 is checked to satisfy
    ``big`` as a rational-function identity in n; since both relations match
    the data and ``big`` determines the sequence once its leading coefficient
    stops vanishing, agreement on the data settles all n.
    """
    small = small.normalized()
    if small.order != 1:
        return False
    values = [rat(v) for v in values]
    if not big.check(values) or not small.check(values):
        return False
    r = RatFunc(upoly.neg(small.coeffs[0]), small.coeffs[1])
    total = RAT_ZERO
    prod = RAT_ONE
    for i, p in enumerate(big.coeffs):
        if i:
            shifted = RatFunc(upoly.compose_shift(r.num, i - 1), upoly.compose_shift(r.den, i - 1))
            prod = prod * shifted
        if p:
            total = total + RatFunc(p) * prod
    if total:
        return False
    # the big recurrence must pin down every term past the data
    roots = rational_roots(big.coeffs[-1])
    small_roots = rational_roots(small.coeffs[1])
    if roots is None or small_roots is None:
        return False
    if any(r.denominator == 1 and r >= len(values) for r, _ in small_roots):
        return False
    last = max((int(r) for r, _ in roots if r.denominator == 1), default=-1)
    need = max(last + big.order, small.offset, big.offset + big.order)
    return need < len(values)


def _has_repeated_factor(I: MultiPoly) -> bool:
    return not resultant(I, I.derivative("Q"), "Q")


def derive_holonomic(I: MultiPoly, values: Sequence, rec_order: int, rec_deg: int, margin: int) -> dict:
    """ODE, recurrences and closed form for the series with coefficients ``values``.

    Both recurrence routes are reported; the one carried forward is the
    first-order guess when the ODE recurrence implies it, else the ODE one,
    else the guess alone.
    """
    values = [rat(v) for v in values]
    series = RationalSeries(tuple(values), len(values) - 1)
    out: dict = {"ode": None, "recurrence_from_ode": None, "recurrence_guessed": None}
    rec_ode = None
    if _has_repeated_factor(I):
        out["ode_skipped"] = "dI/dQ shares a factor with I"
    else:
        ode = alg_to_ode(I)
        ann = ode.annihilation_order(series)
        out["ode"] = ode.to_json()
        out["ode_annihilation_order"] = ann
        out["ode_annihilates_series"] = ann > series.order - ode.order
        rec_ode = ode_to_recurrence(ode).without_common_factor()
        out["recurrence_from_ode"] = rec_ode.to_json()
        out["recurrence_from_ode_holds"] = rec_ode.check(values)
    rec_guess = None
    try:
        rec_guess = guess_recurrence(values, rec_order, rec_deg, margin).without_common_factor()
        out["recurrence_guessed"] = rec_guess.to_json()
    except CatalyticError as exc:
        out["recurrence_guess_error"] = str(exc)
    if rec_ode is not None and rec_guess is not None:
        out["recurrences_agree"] = rec_ode.check(values) and rec_guess.check(values)
    if rec_guess is not None and rec_ode is not None and rec_guess.order < rec_ode.order:
        if implies_first_order(rec_ode, rec_guess, values):
            chosen, source = rec_guess, "guess implied by ode recurrence"
        else:
            chosen, source = rec_ode, "ode"
    elif rec_ode is not None:
        chosen, source = rec_ode, "ode"
    elif rec_guess is not None:
        chosen, source = rec_guess, "guess"
    else:
        chosen, source = None, None
    out["recurrence"] = None if chosen is None else chosen.to_json()
    out["recurrence_source"] = source
    out["closed_form"] = None
    if chosen is not None:
        try:
            cf = closed_form_from_recurrence(chosen, values)
        except (NotFirstOrder, ValueError) as exc:
            out["closed_form_note"] = str(exc)
        else:
            out["closed_form"] = cf.to_json()
            out["closed_form_matches"] = cf.values(len(values)) == values
    return out


__all__ = [
    "derive_holonomic",
    "RatFunc",
    "LinearODE",
    "alg_to_ode",
    "ode_to_recurrence",
    "implies_first_order",
]
