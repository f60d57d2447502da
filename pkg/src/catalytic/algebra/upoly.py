"""Dense univariate polynomials over Q.

A polynomial is a tuple of mpq coefficients, lowest degree first, with no
trailing zeros; the zero polynomial is ``()``.  These are used for the
t-coefficients of bivariate series, for x-polynomials in the holonomic code
and for n-polynomials in recurrences.
"""
from __future__ import annotations

from math import gcd as _igcd

from gmpy2 import mpq, mpz

from ..errors import DivisibilityFailure
from .rational import ONE, ZERO, content

UPoly = tuple

# Kronecker substitution pays off once both factors are long
_KRONECKER_MIN = 24


def trim(coeffs) -> UPoly:
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(mpq(c) for c in coeffs)


def const(c) -> UPoly:
    c = mpq(c)
    return (c,) if c else ()


def monomial(c, k: int) -> UPoly:
    c = mpq(c)
    return (ZERO,) * k + (c,) if c else ()


def degree(p: UPoly) -> int:
    return len(p) - 1


def add(p: UPoly, q: UPoly) -> UPoly:
    if len(p) < len(q):
        p, q = q, p
    if not q:
        return p
    out = list(p)
    for i, c in enumerate(q):
        out[i] += c
    if len(p) == len(q):
        while out and not out[-1]:
            out.pop()
    return tuple(out)


def neg(p: UPoly) -> UPoly:
    return tuple(-c for c in p)


def sub(p: UPoly, q: UPoly) -> UPoly:
    return add(p, neg(q))


def scale(p: UPoly, c) -> UPoly:
    if not c:
        return ()
    return tuple(a * c for a in p)


def shift(p: UPoly, k: int) -> UPoly:
    """Multiply by the variable to the k-th power."""
    return (ZERO,) * k + p if p else ()


def _to_ints(p: UPoly):
    den = 1
    for c in p:
        d = c.denominator
        if d != 1:
            den = den * d // _igcd(den, int(d))
    den = mpz(den)
    return [mpz(c * den) for c in p], den


def _kronecker(p: UPoly, q: UPoly) -> UPoly:
    a, da = _to_ints(p)
    b, db = _to_ints(q)
    bound = max(abs(c) for c in a) * max(abs(c) for c in b) * min(len(a), len(b))
    k = int(bound).bit_length() + 2
    pa = mpz(0)
    for c in reversed(a):
        pa = (pa << k) + c
    pb = mpz(0)
    for c in reversed(b):
        pb = (pb << k) + c
    v = pa * pb
    n = len(a) + len(b) - 1
    mask = (mpz(1) << k) - 1
    half = mpz(1) << (k - 1)
    out = []
    for _ in range(n):
        r = v & mask
        if r >= half:
            r -= mpz(1) << k
        out.append(r)
        v = (v - r) >> k
    den = da * db
    if den == 1:
        return trim(out)
    return trim(mpq(c, den) for c in out)


def mul(p: UPoly, q: UPoly) -> UPoly:
    if not p or not q:
        return ()
    if len(p) == 1:
        return scale(q, p[0])
    if len(q) == 1:
        return scale(p, q[0])
    if len(p) >= _KRONECKER_MIN and len(q) >= _KRONECKER_MIN:
        return _kronecker(p, q)
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return tuple(out)


def mul_schoolbook(p: UPoly, q: UPoly) -> UPoly:
    """Reference product used by tests to check the Kronecker path."""
    if not p or not q:
        return ()
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def power(p: UPoly, k: int) -> UPoly:
    out: UPoly = (ONE,)
    for _ in range(k):
        out = mul(out, p)
    return out


def divmod_(p: UPoly, d: UPoly) -> tuple[UPoly, UPoly]:
    if not d:
        raise ZeroDivisionError("polynomial division by zero")
    if len(p) < len(d):
        return (), p
    r = list(p)
    lc = d[-1]
    dd = len(d) - 1
    q = [ZERO] * (len(p) - dd)
    for k in range(len(p) - 1, dd - 1, -1):
        c = r[k]
        if not c:
            continue
        c = c / lc
        q[k - dd] = c
        for i in range(dd + 1):
            r[k - dd + i] -= c * d[i]
    return trim(q), trim(r[:dd])


def div_exact(p: UPoly, d: UPoly) -> UPoly:
    q, r = divmod_(p, d)
    if r:
        raise DivisibilityFailure("nonzero remainder")
    return q


def evaluate(p: UPoly, x):
    acc = ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def compose_shift(p: UPoly, s) -> UPoly:
    """p(v + s)."""
    out: UPoly = ()
    for c in reversed(p):
        out = add(mul(out, (mpq(s), ONE)), const(c))
    return out


def derivative(p: UPoly) -> UPoly:
    return trim(i * p[i] for i in range(1, len(p)))


def monic(p: UPoly) -> UPoly:
    if not p:
        return p
    lc = p[-1]
    return tuple(c / lc for c in p)


def gcd(p: UPoly, q: UPoly) -> UPoly:
    """Monic gcd by the Euclidean algorithm (gcd(0, 0) = 0)."""
    while q:
        p, q = q, divmod_(p, q)[1]
    return monic(p)


def primitive(p: UPoly) -> UPoly:
    """Coprime integer coefficients with positive leading coefficient."""
    if not p:
        return p
    c = content(p)
    if p[-1] < 0:
        c = -c
    return tuple(a / c for a in p)


def from_ints(*coeffs) -> UPoly:
    return trim(mpq(c) for c in coeffs)


def to_str(p: UPoly, var: str = "t") -> str:
    """Canonical text form, highest degree first, e.g. ``t^2 - 2*t + 1``."""
    from .rational import rat_str

    if not p:
        return "0"
    parts = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if not c:
            continue
        mag = abs(c)
        if k == 0:
            body = rat_str(mag)
        elif mag == 1:
            body = var if k == 1 else f"{var}^{k}"
        else:
            body = f"{rat_str(mag)}*" + (var if k == 1 else f"{var}^{k}")
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)
