"""Exact rational scalars (GMP rationals via gmpy2)."""
from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable

from gmpy2 import mpq, mpz

ZERO = mpq(0)
ONE = mpq(1)

_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def rat(value) -> mpq:
    """Coerce ``value`` (int, str "a/b", Fraction, mpq) to a reduced mpq.

    Floats are rejected: every coefficient in this package is exact.
    """
    if isinstance(value, float):
        raise TypeError("floating-point values are not exact rationals")
    if isinstance(value, str):
        m = _RAT_RE.match(value)
        if not m:
            raise ValueError(f"not a rational literal: {value!r}")
        num, den = m.group(1), m.group(2) or "1"
        if int(den) == 0:
            raise ZeroDivisionError(value)
        return mpq(int(num), int(den))
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return mpq(value)


def rat_str(q) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def content(values: Iterable) -> mpq:
    """Positive rational c such that values/c are coprime integers (0 for all-zero)."""
    nums = []
    dens = []
    for v in values:
        v = mpq(v)
        if v:
            nums.append(int(v.numerator))
            dens.append(int(v.denominator))
    if not nums:
        return ZERO
    return mpq(reduce(gcd, nums), reduce(lcm, dens))


def common_denominator(values: Iterable) -> mpz:
    return mpz(reduce(lcm, (int(mpq(v).denominator) for v in values), 1))
