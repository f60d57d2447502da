"""Exact linear algebra over Q and over polynomial rings."""
from __future__ import annotations

from typing import Callable, Sequence

from gmpy2 import mpq, mpz

from .rational import ZERO, common_denominator, content


def _integer_row(row) -> list:
    den = common_denominator(row)
    return [mpz(mpq(v) * den) for v in row]


def echelon_fraction_free(rows: Sequence[Sequence], ncols: int) -> tuple[list[list], list[int]]:
    """Fraction-free (Bareiss) row echelon form of an integer-cleared matrix.

    Column skipping keeps every entry a minor of the original matrix, so the
    division by the previous pivot stays exact.  Among candidate pivots the
    one with the fewest bits is taken.  Returns (echelon rows, pivot columns).
    """
    m = [r for r in (_integer_row(row) for row in rows) if any(r)]
    pivots: list[int] = []
    prev = mpz(1)
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        best = None
        for i in range(r, nrows):
            v = m[i][c]
            if v and (best is None or v.bit_length() < m[best][c].bit_length()):
                best = i
        if best is None:
            continue
        if best != r:
            m[r], m[best] = m[best], m[r]
        prow = m[r]
        p = prow[c]
        for i in range(r + 1, nrows):
            row = m[i]
            f = row[c]
            if f:
                for j in range(c + 1, ncols):
                    row[j] = (p * row[j] - f * prow[j]) // prev
            else:
                for j in range(c + 1, ncols):
                    row[j] = (p * row[j]) // prev
            row[c] = mpz(0)
        prev = p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[mpz]]:
    """Basis of the right nullspace, each vector scaled to coprime integers."""
    ech, pivots = echelon_fraction_free(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [ZERO] * ncols
        x[f] = mpq(1)
        for i in range(len(pivots) - 1, -1, -1):
            pc = pivots[i]
            row = ech[i]
            s = ZERO
            for j in range(pc + 1, ncols):
                if row[j] and x[j]:
                    s += row[j] * x[j]
            x[pc] = -s / row[pc]
        c = content(x)
        basis.append([mpz(v / c) for v in x])
    return basis


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    return len(echelon_fraction_free(rows, ncols)[1])


def solve_sparse(rows: Sequence[dict], rhs: Sequence, ncols: int):
    """Solve the sparse system rows . x = rhs exactly.

    Rows are {column: coefficient}.  Returns ("unique", x), ("inconsistent",
    None) or ("underdetermined", None).  Each incoming row is reduced against
    earlier pivots at its smallest column, so banded systems stay banded.
    """
    pivots: dict[int, tuple[dict, mpq]] = {}
    for row, b in zip(rows, rhs):
        row = {c: mpq(v) for c, v in row.items() if v}
        b = mpq(b)
        while row:
            c = min(row)
            if c not in pivots:
                inv = 1 / row[c]
                pivots[c] = ({j: v * inv for j, v in row.items()}, b * inv)
                break
            prow, pb = pivots[c]
            f = row[c]
            for j, v in prow.items():
                nv = row.get(j, ZERO) - f * v
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
            b -= f * pb
        else:
            if b:
                return "inconsistent", None
    if len(pivots) < ncols:
        return "underdetermined", None
    x = [ZERO] * ncols
    for c in sorted(pivots, reverse=True):
        prow, pb = pivots[c]
        s = pb
        for j, v in prow.items():
            if j != c:
                s -= v * x[j]
        x[c] = s
    return "unique", x


def bareiss_det(matrix: Sequence[Sequence], exact_div: Callable, one, zero_test: Callable = bool):
    """Determinant over an integral domain by fraction-free elimination.

    ``exact_div(a, b)`` must return a/b when b divides a exactly.
    """
    m = [list(r) for r in matrix]
    n = len(m)
    if n == 0:
        return one
    sign = 1
    prev = one
    for k in range(n - 1):
        if not zero_test(m[k][k]):
            for i in range(k + 1, n):
                if zero_test(m[i][k]):
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return one - one
        p = m[k][k]
        for i in range(k + 1, n):
            row = m[i]
            f = row[k]
            for j in range(k + 1, n):
                row[j] = exact_div(p * row[j] - f * m[k][j], prev)
        prev = p
    d = m[n - 1][n - 1]
    return d if sign > 0 else -d


def integer_det(matrix: Sequence[Sequence]) -> mpz:
    return bareiss_det(
        [[mpz(v) for v in r] for r in matrix], lambda a, b: a // b, mpz(1)
    )


def solve_field(matrix: list[list], rhs: list, zero, one) -> list | None:
    """Gauss-Jordan over any exact field (elements support + - * /).

    Returns the unique solution, or None when the matrix is singular.
    """
    n = len(matrix)
    a = [list(r) + [b] for r, b in zip(matrix, rhs)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != zero), None)
        if piv is None:
            return None
        a[c], a[piv] = a[piv], a[c]
        inv = one / a[c][c]
        a[c] = [v * inv for v in a[c]]
        for i in range(n):
            if i != c and a[i][c] != zero:
                f = a[i][c]
                a[i] = [v - f * w for v, w in zip(a[i], a[c])]
    return [a[i][n] for i in range(n)]


def nullspace_field(matrix: list[list], ncols: int, zero, one) -> list[list]:
    """Right nullspace over an exact field via reduced row echelon form."""
    a = [list(r) for r in matrix]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != zero), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = one / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != zero:
                f = a[i][c]
                a[i] = [v - f * w for v, w in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    basis = []
    for f in (c for c in range(ncols) if c not in pivots):
        x = [zero] * ncols
        x[f] = one
        for i, pc in enumerate(pivots):
            x[pc] = zero - a[i][f]
        basis.append(x)
    return basis
