"""Resultants of multivariate polynomials with respect to one variable.

The production route is the determinant of the Sylvester matrix, computed by
fraction-free (Bareiss) elimination over the polynomial ring of the remaining
variables.  ``subresultant_prs`` is an independent route used as a
cross-check.
"""
from __future__ import annotations

from ..errors import ZeroInput
from .linalg import bareiss_det
from .multipoly import ONE_POLY, ZERO_POLY, MultiPoly


def _dense_in(p: MultiPoly, var: str) -> list[MultiPoly]:
    coeffs = p.coefficients(var)
    d = max(coeffs)
    return [coeffs.get(e, ZERO_POLY) for e in range(d + 1)]


def sylvester_matrix(p: MultiPoly, q: MultiPoly, var: str) -> list[list[MultiPoly]]:
    """Rows: deg q shifted copies of p, then deg p shifted copies of q (top degree first)."""
    a = _dense_in(p, var)[::-1]
    b = _dense_in(q, var)[::-1]
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([ZERO_POLY] * i + a + [ZERO_POLY] * (size - m - 1 - i))
    for i in range(m):
        rows.append([ZERO_POLY] * i + b + [ZERO_POLY] * (size - n - 1 - i))
    return rows


def resultant(p: MultiPoly, q: MultiPoly, var: str) -> MultiPoly:
    """Res_var(p, q) as the Sylvester determinant."""
    if not p or not q:
        raise ZeroInput("resultant of a zero polynomial")
    m, n = p.degree(var), q.degree(var)
    if m == 0:
        return p**n
    if n == 0:
        return q**m
    return bareiss_det(
        sylvester_matrix(p, q, var), lambda a, b: a.exact_divide(b), ONE_POLY
    )


def _prem(a: list[MultiPoly], b: list[MultiPoly]) -> list[MultiPoly]:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b; lists are low-first."""
    r = list(a)
    db = len(b) - 1
    lc = b[-1]
    delta = len(a) - len(b) + 1
    while len(r) - 1 >= db and any(r):
        dr = len(r) - 1
        lr = r[-1]
        shift = dr - db
        r = [c * lc for c in r]
        for i, bc in enumerate(b):
            r[shift + i] = r[shift + i] - lr * bc
        r.pop()
        delta -= 1
        while r and not r[-1]:
            r.pop()
    if delta > 0:
        f = lc**delta
        r = [c * f for c in r]
    return r


def subresultant_prs(p: MultiPoly, q: MultiPoly, var: str) -> MultiPoly:
    """Resultant by the subresultant polynomial remainder sequence."""
    if not p or not q:
        raise ZeroInput("resultant of a zero polynomial")
    a = _dense_in(p, var)
    b = _dense_in(q, var)
    if len(a) == 1:
        return a[0] ** (len(b) - 1)
    if len(b) == 1:
        return b[0] ** (len(a) - 1)
    sign = 1
    if len(a) < len(b):
        a, b = b, a
        if (len(a) - 1) % 2 and (len(b) - 1) % 2:
            sign = -sign
    g = ONE_POLY
    h = ONE_POLY
    while True:
        da, db = len(a) - 1, len(b) - 1
        delta = da - db
        if da % 2 and db % 2:
            sign = -sign
        r = _prem(a, b)
        if not r:
            return ZERO_POLY
        a = b
        div = g * h**delta
        b = [c.exact_divide(div) for c in r]
        g = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = (g**delta).exact_divide(h ** (delta - 1))
        if len(b) == 1:
            da = len(a) - 1
            if da == 0:
                res = b[0]
            else:
                res = (b[0] ** da).exact_divide(h ** (da - 1)) if da > 1 else b[0]
            return res if sign > 0 else -res
