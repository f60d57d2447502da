"""Linear recurrences with polynomial coefficients and first-order closed forms."""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import lcm
from typing import Sequence

from gmpy2 import mpq

from .algebra import upoly
from .algebra.multipoly import MultiPoly
from .algebra.rational import ONE, ZERO, content, rat, rat_str
from .errors import NotFirstOrder


def _poly_str(p) -> str:
    return upoly.to_str(p, "n")


def _parse_npoly(s: str):
    # reuse the canonical polynomial reader with n mapped onto t
    return MultiPoly.parse(s.replace("n", "t")).to_upoly("t")


@dataclass(frozen=True)
class Recurrence:
    """sum_i coeffs[i](n) * a(n+i) = 0 for all n >= offset."""

    coeffs: tuple
    offset: int = 0

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def term(self, seq: Sequence, n: int) -> mpq:
        return sum((upoly.evaluate(p, n) * seq[n + i] for i, p in enumerate(self.coeffs) if p), ZERO)

    def check(self, seq: Sequence) -> bool:
        """True when the relation holds at every n where all terms are known."""
        return all(not self.term(seq, n) for n in range(self.offset, len(seq) - self.order))

    def first_failure(self, seq: Sequence) -> int | None:
        for n in range(self.offset, len(seq) - self.order):
            if self.term(seq, n):
                return n
        return None

    def normalized(self) -> "Recurrence":
        """Trim zero end coefficients, remove rational content, make p_r's leading coefficient positive."""
        cs = list(self.coeffs)
        offset = self.offset
        while cs and not cs[-1]:
            cs.pop()
        if not cs:
            raise ValueError("zero recurrence")
        shift = 0
        while not cs[0]:
            cs.pop(0)
            shift += 1
        if shift:
            # sum_{i>=s} p_i(n) a(n+i) = 0 for n >= offset  <=>  sum_j p_{j+s}(m-s) a(m+j) = 0 for m >= offset+s
            cs = [upoly.compose_shift(p, -shift) for p in cs]
            offset += shift
        c = content(v for p in cs for v in p)
        if cs[-1][-1] < 0:
            c = -c
        return Recurrence(tuple(tuple(v / c for v in p) for p in cs), offset)

    def without_common_factor(self) -> "Recurrence":
        """Divide out the gcd of all coefficients.

        The reduced relation is only implied where the removed factor is
        nonzero, so the offset moves past its nonnegative integer roots.
        """
        g = reduce(upoly.gcd, (p for p in self.coeffs if p))
        if len(g) <= 1:
            return self
        offset = self.offset
        for r, _ in rational_roots(g) or []:
            if r.denominator == 1 and r >= offset:
                offset = int(r) + 1
        return Recurrence(tuple(upoly.div_exact(p, g) for p in self.coeffs), offset).normalized()

    def __str__(self) -> str:
        parts = []
        for i in range(self.order, -1, -1):
            p = self.coeffs[i]
            if not p:
                continue
            shift = "n" if i == 0 else f"n+{i}"
            parts.append(f"({_poly_str(p)})*a({shift})")
        return " + ".join(parts) + " = 0"

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "offset": self.offset,
            "coeffs": [_poly_str(p) for p in self.coeffs],
            "text": str(self),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Recurrence":
        return cls(tuple(_parse_npoly(s) for s in data["coeffs"]), data["offset"])


# --- first-order closed forms ---------------------------------------------


def _integer_poly(p):
    den = reduce(lcm, (int(v.denominator) for v in p), 1)
    return [int(v * den) for v in p]


def _divisors(n: int, limit: int = 10**6) -> list[int] | None:
    n = abs(n)
    if n > limit:
        return None
    return [d for d in range(1, n + 1) if n % d == 0]


def rational_roots(p) -> list[tuple[mpq, int]] | None:
    """All rational roots with multiplicity (None when the search is too costly)."""
    if not p:
        return None
    ints = _integer_poly(p)
    roots = []
    zero_mult = 0
    while ints and ints[0] == 0:
        ints.pop(0)
        zero_mult += 1
    if zero_mult:
        roots.append((ZERO, zero_mult))
    if len(ints) <= 1:
        return roots
    num_d = _divisors(ints[0])
    den_d = _divisors(ints[-1])
    if num_d is None or den_d is None:
        return None
    rest = tuple(mpq(v) for v in ints)
    for q in den_d:
        for pp in num_d:
            for r in (mpq(pp, q), mpq(-pp, q)):
                if r.denominator != q or any(r == x for x, _ in roots):
                    continue
                m = 0
                while len(rest) > 1 and not upoly.evaluate(rest, r):
                    rest = upoly.div_exact(rest, (-r, ONE))
                    m += 1
                if m:
                    roots.append((r, m))
    return roots


@dataclass(frozen=True)
class ClosedForm:
    """a(n) = a(start) * prod_{k=start}^{n-1} num(k)/den(k) for n >= start."""

    num: tuple
    den: tuple
    start: int
    initial: mpq
    prefix: tuple = ()  # values a(0..start-1), not covered by the product

    def ratio(self, k: int) -> mpq:
        return upoly.evaluate(self.num, k) / upoly.evaluate(self.den, k)

    def evaluate(self, n: int) -> mpq:
        if n < self.start:
            return self.prefix[n]
        v = self.initial
        for k in range(self.start, n):
            v *= self.ratio(k)
        return v

    def values(self, count: int) -> list[mpq]:
        out = list(self.prefix[: min(count, self.start)])
        v = self.initial
        for n in range(self.start, count):
            out.append(v)
            v = v * self.ratio(n)
        return out

    def pochhammer_form(self) -> str | None:
        """Best-effort rendering a(n) = a(s) * c^(n-s) * prod (alpha)_(n-s) / prod (beta)_(n-s)."""
        nr = rational_roots(self.num)
        dr = rational_roots(self.den)
        if nr is None or dr is None:
            return None
        if sum(m for _, m in nr) != len(self.num) - 1 or sum(m for _, m in dr) != len(self.den) - 1:
            return None
        c = self.num[-1] / self.den[-1]
        s = self.start
        # (n - r) evaluated from k = s: Pochhammer symbol (s - r)_(n - s)
        up = [(s - r, m) for r, m in nr]
        down = [(s - r, m) for r, m in dr]
        m_str = "n" if s == 0 else f"n-{s}"

        def poch(items):
            out = []
            for a, m in sorted(items):
                out.extend([f"({rat_str(a)})_({m_str})"] * m)
            return "*".join(out)

        text = f"a(n) = {rat_str(self.initial)}"
        if c != 1:
            text += f" * ({rat_str(c)})^({m_str})"
        if up:
            text += " * " + poch(up)
        if down:
            text += " / (" + poch(down) + ")"
        return text

    def factorial_form(self) -> str | None:
        """Rendering as const * K^n * prod (c*n + e)!^(+-1), or None.

        A factor (c*k + b) with c > 1 is grouped with the other members of its
        block c*m+1..c*m+c; a missing member c*(m+1) is supplied as c*(k+m+1).
        """
        sides = []
        K = mpq(1)
        for poly, sign in ((self.num, 1), (self.den, -1)):
            roots = rational_roots(poly)
            if roots is None or sum(m for _, m in roots) != len(poly) - 1:
                return None
            K = K * poly[-1] if sign > 0 else K / poly[-1]
            factors: dict[tuple[int, int], int] = {}
            for r, m in roots:
                c, b = int(r.denominator), -int(r.numerator)
                # (k - r) = (c*k + b) / c
                K = K / c**m if sign > 0 else K * c**m
                factors[(c, b)] = factors.get((c, b), 0) + m
            sides.append(factors)
        top, bottom = sides
        blocks: dict[tuple[int, int], int] = {}
        for side, sign in ((top, 1), (bottom, -1)):
            for (c, b) in sorted(side):
                while side.get((c, b), 0) > 0:
                    m = (b - 1) // c
                    members = [c * m + i for i in range(1, c + 1)]
                    for e in members:
                        if side.get((c, e), 0) > 0:
                            side[(c, e)] -= 1
                        elif c > 1 and e == c * (m + 1):
                            # supply c*k + e = c * (k + m + 1) on this side, (k + m + 1) on the other
                            blocks[(1, m)] = blocks.get((1, m), 0) - sign
                            K = K / c if sign > 0 else K * c
                        else:
                            return None
                    # prod_{k=s}^{n-1} block = (c*n + c*m)! / (c*s + c*m)!
                    key = (c, c * m)
                    blocks[key] = blocks.get(key, 0) + sign
        s = self.start
        if any(c * s + e < 0 for (c, e), v in blocks.items() if v):
            return None
        const = self.initial / K**s
        for (c, e), v in blocks.items():
            const /= mpq(_fact(c * s + e)) ** v
        up = [_fact_str(c, e) for (c, e), v in sorted(blocks.items()) for _ in range(max(v, 0))]
        down = [_fact_str(c, e) for (c, e), v in sorted(blocks.items()) for _ in range(max(-v, 0))]
        parts = [rat_str(const)] if const != 1 else []
        if K != 1:
            parts.append(f"({rat_str(K)})^n")
        text = "*".join(parts + up) or "1"
        if down:
            text += "/(" + "*".join(down) + ")"
        return "a(n) = " + text

    def to_json(self) -> dict:
        return {
            "ratio_numerator": _poly_str(self.num),
            "ratio_denominator": _poly_str(self.den),
            "start": self.start,
            "initial": rat_str(self.initial),
            "prefix": [rat_str(v) for v in self.prefix],
            "product_form": f"a(n) = a({self.start}) * prod_{{k={self.start}}}^{{n-1}} ({_poly_str(self.num)})/({_poly_str(self.den)}) at n=k",
            "pochhammer_form": self.pochhammer_form(),
            "factorial_form": self.factorial_form(),
        }


def _fact(k: int) -> int:
    if k < 0:
        raise ValueError
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def _fact_str(c: int, e: int) -> str:
    n = "n" if c == 1 else f"{c}n"
    if e == 0:
        return f"{n}!" if c == 1 else f"({n})!"
    return f"({n}{e:+d})!"


def closed_form_from_recurrence(rec: Recurrence, values: Sequence) -> ClosedForm:
    """Product formula from a first-order recurrence p1(n) a(n+1) + p0(n) a(n) = 0."""
    rec = rec.normalized()
    if rec.order != 1:
        raise NotFirstOrder(f"recurrence has order {rec.order}")
    p0, p1 = rec.coeffs
    num, den = upoly.neg(p0), p1
    g = upoly.gcd(num, den)
    if len(g) > 1:
        num, den = upoly.div_exact(num, g), upoly.div_exact(den, g)
    # coprime integer coefficients overall, positive leading coefficient in den
    c = content(list(num) + list(den))
    if den[-1] < 0:
        c = -c
    num = tuple(v / c for v in num)
    den = tuple(v / c for v in den)
    start = rec.offset
    # the product is only valid past every nonnegative integer root of p1 (and of the ratio denominator)
    for poly in (p1, den):
        roots = rational_roots(poly)
        if roots is None:
            continue
        for r, _ in roots:
            if r.denominator == 1 and r >= start:
                start = int(r) + 1
    values = [rat(v) for v in values]
    if start >= len(values):
        raise ValueError("not enough values to anchor the closed form")
    return ClosedForm(num, den, start, values[start], tuple(values[:start]))
