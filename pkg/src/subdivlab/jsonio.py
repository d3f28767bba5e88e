"""Serialization helpers: rationals travel as "num/den" strings, never floats."""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse rational {text!r}") from exc
