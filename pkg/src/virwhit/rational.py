"""Exact rational scalars.

Every coefficient in this package is a ``fractions.Fraction``: arbitrary
precision, automatically reduced, denominator kept positive, zero stored
as 0/1.  Values cross I/O boundaries as the strings ``"p/q"`` (or just
``"p"`` when the denominator is 1), never as floats.  Fractions are
immutable, so they are safe to share between concurrent tasks.
"""

from __future__ import annotations

import re
from fractions import Fraction

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

_RATIONAL_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def normalize(numerator: int, denominator: int = 1) -> Fraction:
    """Reduced representative with positive denominator.

    Raises ZeroDivisionError for a zero denominator.
    """
    return Fraction(numerator, denominator)


def arithmetic(a: Fraction, b: Fraction, op: str) -> Fraction:
    """Exact field arithmetic; ``op`` is one of add, sub, mul, div."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p"; the sign may only sit on the numerator."""
    match = _RATIONAL_RE.match(text.strip())
    if match is None:
        raise ValueError(f"not a rational literal: {text!r}")
    num = int(match.group(1))
    den = int(match.group(2)) if match.group(2) is not None else 1
    if den == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(value: Fraction) -> str:
    """Render as "p/q", or "p" when the denominator is 1."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
