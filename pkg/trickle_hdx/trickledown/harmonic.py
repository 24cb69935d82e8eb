"""Harmonic numbers and harmonic tails.

``H_n = 1 + 1/2 + ... + 1/n`` and ``H_n(i) = 1/i + ... + 1/n`` with
``H_n(0) = H_n(1)``. Sums are accumulated as exact fractions and rounded once.
"""

from fractions import Fraction
from functools import lru_cache

from trickle_hdx.errors import IndexOutOfRange


@lru_cache(maxsize=None)
def harmonic_fraction(n: int) -> Fraction:
    if n < 0:
        raise IndexOutOfRange(f"H_n needs n >= 0, got {n}")
    return sum((Fraction(1, j) for j in range(1, n + 1)), Fraction(0))


@lru_cache(maxsize=None)
def harmonic_tail_fraction(n: int, i: int) -> Fraction:
    if n < 0 or i < 0 or i > n:
        raise IndexOutOfRange(f"H_n(i) needs 0 <= i <= n, got n={n}, i={i}")
    start = max(i, 1)
    return sum((Fraction(1, j) for j in range(start, n + 1)), Fraction(0))


def harmonic(n: int) -> float:
    """H_n, with H_0 = 0."""
    return float(harmonic_fraction(n))


def harmonic_tail(n: int, i: int) -> float:
    """H_n(i) = sum_{j=i}^{n} 1/j, with H_n(0) = H_n(1) and H_0(0) = 0."""
    return float(harmonic_tail_fraction(n, i))


def harmonic_floor(n: int) -> float:
    """H_n, except 1 when n <= 0."""
    return harmonic(n) if n >= 1 else 1.0
