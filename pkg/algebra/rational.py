"""
Exact rational helpers: parsing, canonical "num/den" formatting, conversion
"""

from fractions import Fraction
from typing import Union

import sympy

RationalLike = Union[int, Fraction, str]


def to_fraction(value) -> Fraction:
    """
    Coerce ints, Fractions, "num/den" strings and sympy rationals to Fraction

    Floats are rejected: exact paths never accept binary approximations.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"Unsupported rational value: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    if hasattr(value, "numerator") and hasattr(value, "denominator") and not isinstance(value, float):
        return Fraction(int(value.numerator), int(value.denominator))
    raise ValueError(f"Unsupported rational value: {value!r}")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("Empty rational literal")
    if "/" in text:
        num, den = text.split("/", 1)
        if int(den) == 0:
            raise ValueError(f"Zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(value: Fraction) -> str:
    """Canonical serialization, always "num/den" (e.g. "-1/96", "2/1")"""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def to_sympy(value: Fraction) -> sympy.Rational:
    return sympy.Rational(value.numerator, value.denominator)


def bit_size(value: Fraction) -> int:
    return max(abs(value.numerator).bit_length(), value.denominator.bit_length())
