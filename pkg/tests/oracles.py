"""Independent reference computations used as test oracles.

Nothing here imports the package's algebra; only plain ints and Fractions.
"""
from __future__ import annotations

import random
from fractions import Fraction
from math import comb, factorial


def two_stack_sortable(n: int) -> Fraction:
    """2(3n)!/((n+1)!(2n+1)!) evaluated exactly."""
    return Fraction(2 * factorial(3 * n), factorial(n + 1) * factorial(2 * n + 1))


def catalan(n: int) -> int:
    return factorial(2 * n) // (factorial(n) * factorial(n + 1))


def motzkin(n: int) -> int:
    return sum(comb(n, 2 * k) * catalan(k) for k in range(n // 2 + 1))


def int_det(m: list[list[int]]) -> int:
    """Fraction-free Bareiss determinant over the integers."""
    a = [row[:] for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def sylvester(p: list[int], q: list[int]) -> list[list[int]]:
    """Sylvester matrix of two univariate integer polynomials given low-degree first."""
    m, n = len(p) - 1, len(q) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + p[::-1] + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + q[::-1] + [0] * (size - n - 1 - i))
    return rows


def interpolate(points: list[tuple[int, int]]) -> list[Fraction]:
    """Coefficients (low first) of the interpolating polynomial, via Newton differences."""
    xs = [Fraction(x) for x, _ in points]
    coef = [Fraction(y) for _, y in points]
    n = len(points)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # out = out * (x - xs[i]) + coef[i]
        shifted = [Fraction(0)] + out[:-1]
        out = [s - xs[i] * o for s, o in zip(shifted, out)]
        out[0] += coef[i]
    while out and out[-1] == 0:
        out.pop()
    return out


# bivariate integer polynomials as {(i, j): c} meaning c * Q^i * x^j


def random_bivariate(rng: random.Random, dq: int, dx: int) -> dict:
    while True:
        p = {}
        for i in range(dq + 1):
            for j in range(dx + 1):
                if rng.random() < 0.6:
                    c = rng.randint(-9, 9)
                    if c:
                        p[(i, j)] = c
        if p and max(i for i, _ in p) == dq:
            return p


def _at_x(p: dict, x0: int, deg: int) -> list[int]:
    out = [0] * (deg + 1)
    for (i, j), c in p.items():
        out[i] += c * x0**j
    return out


def resultant_oracle(p: dict, q: dict) -> list[Fraction]:
    """Res_Q(p, q) as a polynomial in x (low first), by evaluation at integer
    points, integer Sylvester determinants, and interpolation."""
    m = max(i for i, _ in p)
    n = max(i for i, _ in q)
    dxp = max(j for _, j in p)
    dxq = max(j for _, j in q)
    bound = n * dxp + m * dxq
    pts = [(x0, int_det(sylvester(_at_x(p, x0, m), _at_x(q, x0, n)))) for x0 in range(-(bound // 2), bound - bound // 2 + 1)]
    return interpolate(pts)


def bivariate_text(p: dict) -> str:
    return " + ".join(f"({c})*Q^{i}*x^{j}" for (i, j), c in sorted(p.items())) or "0"
