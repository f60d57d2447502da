"""Empirical guessing of algebraic equations and recurrences by exact linear algebra.

Every search walks the degree bounds upward and stops at the first bound
with a nontrivial nullspace, so the returned relation is minimal by
construction.  A bound is only admissible when the number of equations
exceeds the number of unknowns by at least ``margin``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from gmpy2 import mpq

from .algebra import upoly
from .algebra.linalg import nullspace
from .algebra.multipoly import MultiPoly
from .algebra.rational import ZERO, rat
from .errors import InsufficientOrder, NoGuess
from .online import annihilation_order
from .recurrence import Recurrence
from .series import PolySeries, RationalSeries, series_multiply

log = logging.getLogger(__name__)

DEFAULT_MARGIN = 10


@dataclass(frozen=True)
class AlgebraicGuess:
    poly: MultiPoly
    bounds: tuple  # (dQ, dx) or (dP, dx, dt)
    matched_order: int
    margin: int
    nullspace_dim: int

    def to_json(self) -> dict:
        return {
            "poly": str(self.poly),
            "bounds": list(self.bounds),
            "matched_order": self.matched_order,
            "margin": self.margin,
            "nullspace_dim": self.nullspace_dim,
        }

    @classmethod
    def from_json(cls, data: dict) -> "AlgebraicGuess":
        return cls(
            MultiPoly.parse(data["poly"]),
            tuple(data["bounds"]),
            data["matched_order"],
            data["margin"],
            data["nullspace_dim"],
        )


def _pick(basis: list[list]) -> list:
    """Sparsest basis vector; ties broken by the vector itself for reproducibility."""
    return min(basis, key=lambda v: (sum(1 for c in v if c), [int(c) for c in v]))


def _powers(s: RationalSeries, k: int) -> list[RationalSeries]:
    out = [RationalSeries.from_list([1], s.order)]
    for _ in range(k):
        out.append(out[-1] * s)
    return out


def _annihilation_2var(I: MultiPoly, s: RationalSeries) -> int:
    """First x-order where I(s(x), x) is nonzero, or s.order + 1."""
    return annihilation_order(I, s.as_polyseries(), s.as_polyseries())


def guess_algebraic_2var(
    s: RationalSeries, dQ: int, dx: int, margin: int = DEFAULT_MARGIN
) -> AlgebraicGuess:
    """Minimal I(Q, x) with I(s(x), x) = 0 through the known order."""
    N = s.order
    if N + 1 - 2 < margin:
        raise InsufficientOrder(f"order {N} leaves no room for margin {margin}")
    pw = _powers(s, dQ)
    skipped = 0
    for q in range(1, dQ + 1):
        for d in range(0, dx + 1):
            cols = [(i, j) for i in range(q + 1) for j in range(d + 1)]
            slack = N + 1 - len(cols)
            if slack < margin:
                skipped += 1
                continue
            rows = [[pw[i][k - j] if k >= j else ZERO for i, j in cols] for k in range(N + 1)]
            basis = nullspace(rows, len(cols))
            if not basis:
                continue
            v = _pick(basis)
            I = MultiPoly({(0, i, j, 0): c for (i, j), c in zip(cols, v) if c}).primitive_part()
            matched = _annihilation_2var(I, s) - 1
            if matched < N:
                raise AssertionError("nullspace vector fails to annihilate the series")
            log.debug("guessed I with bounds (%d, %d): %s", q, d, I)
            return AlgebraicGuess(I, (q, d), matched, slack, len(basis))
    if skipped and skipped == dQ * (dx + 1):
        raise InsufficientOrder(f"no degree bound up to ({dQ}, {dx}) meets margin {margin} at order {N}")
    raise NoGuess(f"no algebraic relation with deg_Q <= {dQ}, deg_x <= {dx} ({skipped} bounds skipped for margin)")


def guess_algebraic_3var(
    f: PolySeries, dP: int, dx: int, dt: int, margin: int = DEFAULT_MARGIN
) -> AlgebraicGuess:
    """Minimal G(P, x, t) with G(f(x,t), x, t) = 0 through the known order.

    Only the lowest x-orders are used for solving (enough rows for
    unknowns + 2*margin); every candidate is then checked on the full series.
    """
    N = f.order
    pw = [PolySeries.one(N)]
    for _ in range(dP):
        pw.append(series_multiply(pw[-1], f))
    skipped = 0
    for p in range(1, dP + 1):
        for d in range(0, dx + 1):
            for e in range(0, dt + 1):
                cols = [(i, j, k) for i in range(p + 1) for j in range(d + 1) for k in range(e + 1)]
                need = len(cols) + 2 * margin
                rows = []
                n_used = -1
                for n in range(N + 1):
                    block = _rows_at(pw, cols, n)
                    rows.extend(block)
                    n_used = n
                    if len(rows) >= need:
                        break
                if len(rows) - len(cols) < margin:
                    skipped += 1
                    continue
                basis = nullspace(rows, len(cols))
                if not basis:
                    continue
                v = _pick(basis)
                G = MultiPoly({(i, 0, j, k): c for (i, j, k), c in zip(cols, v) if c}).primitive_part()
                matched = annihilation_order(G, f) - 1
                if matched < N:
                    # the truncated system was too permissive; solve with every row
                    rows = [r for n in range(N + 1) for r in _rows_at(pw, cols, n)]
                    basis = nullspace(rows, len(cols))
                    if not basis:
                        continue
                    v = _pick(basis)
                    G = MultiPoly({(i, 0, j, k): c for (i, j, k), c in zip(cols, v) if c}).primitive_part()
                    matched = annihilation_order(G, f) - 1
                total_rows = sum(len(_rows_at(pw, cols, n)) for n in range(N + 1))
                log.debug("guessed G with bounds (%d, %d, %d) using x-orders <= %d", p, d, e, n_used)
                return AlgebraicGuess(G, (p, d, e), matched, total_rows - len(cols), len(basis))
    raise NoGuess(f"no algebraic relation with deg_P <= {dP}, deg_x <= {dx}, deg_t <= {dt}")


def _rows_at(pw: list[PolySeries], cols, n: int) -> list[list]:
    """Equations from the x^n coefficient: one per power of t."""
    polys = []
    for i, j, k in cols:
        c = pw[i].coeffs[n - j] if n >= j else ()
        polys.append(upoly.shift(c, k))
    top = max((len(c) for c in polys), default=0)
    rows = []
    for m in range(top):
        row = [c[m] if m < len(c) else ZERO for c in polys]
        if any(row):
            rows.append(row)
    return rows


def guess_recurrence(
    a: Sequence, r: int, d: int, margin: int = DEFAULT_MARGIN
) -> Recurrence:
    """Minimal (order, then degree) relation sum_i p_i(n) a(n+i) = 0 on all given terms."""
    a = [rat(v) for v in a]
    L = len(a)
    if L - 1 - 2 < margin:
        raise InsufficientOrder(f"{L} terms leave no room for margin {margin}")
    skipped = 0
    for rr in range(1, r + 1):
        for dd in range(0, d + 1):
            cols = [(i, k) for i in range(rr + 1) for k in range(dd + 1)]
            neq = L - rr
            if neq - len(cols) < margin:
                skipped += 1
                continue
            rows = [[mpq(n) ** k * a[n + i] for i, k in cols] for n in range(neq)]
            basis = nullspace(rows, len(cols))
            if not basis:
                continue
            v = _pick(basis)
            coeffs = tuple(upoly.trim(v[i * (dd + 1) + k] for k in range(dd + 1)) for i in range(rr + 1))
            rec = Recurrence(coeffs, 0).normalized()
            if not rec.check(a):
                raise AssertionError("guessed recurrence fails on the data")
            log.debug("guessed recurrence with bounds (%d, %d): %s", rr, dd, rec)
            return rec
    if skipped == r * (d + 1):
        raise InsufficientOrder(f"no bound up to ({r}, {d}) meets margin {margin} with {L} terms")
    raise NoGuess(f"no recurrence with order <= {r}, degree <= {d}")


__all__ = [
    "AlgebraicGuess",
    "guess_algebraic_2var",
    "guess_algebraic_3var",
    "guess_recurrence",
    "DEFAULT_MARGIN",
]
