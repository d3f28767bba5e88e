"""Exact integer helpers for the floor rules used by the iterative procedures.

All fractional-power floors are reduced to integer comparisons so traces are
bit-reproducible and never depend on float rounding.
"""

from __future__ import annotations

from fractions import Fraction


def floor_root_scaled(k: int, scale: int, bound: int) -> int:
    """Largest q >= 0 with ``q**k * scale <= bound``.

    Requires ``k >= 1``, ``scale >= 1``, ``bound >= 0``.
    """
    if k < 1 or scale < 1 or bound < 0:
        raise ValueError("floor_root_scaled arguments out of range")
    if bound < scale:
        return 0
    # Float guess, then exact adjustment.
    q = int(round((bound / scale) ** (1.0 / k)))
    if q < 0:
        q = 0
    while q > 0 and q**k * scale > bound:
        q -= 1
    while (q + 1) ** k * scale <= bound:
        q += 1
    return q


def floor_power(base: int, exponent: Fraction) -> int:
    """Exact ``floor(base ** exponent)`` for ``base >= 1`` and ``exponent >= 0``."""
    if base < 1:
        raise ValueError("base must be >= 1")
    if exponent < 0:
        raise ValueError("exponent must be >= 0")
    num, den = exponent.numerator, exponent.denominator
    return floor_root_scaled(den, 1, base**num)


def pow_leq(a: int, p: int, b: int, q: int) -> bool:
    """Exact test ``a**(p/q) <= b`` for nonnegative integers, i.e. ``a**p <= b**q``."""
    return a**p <= b**q
