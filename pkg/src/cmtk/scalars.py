"""Scalar layer: exact rationals when the data allows it, binary floats otherwise.

Every sequence operation in this package is generic over the two scalar
kinds.  A value parsed from "p/q" or from a decimal literal is an exact
``fractions.Fraction``; a Python float stays a float.  Exactness is decided
once, at sequence construction, and recorded as a mode flag.
"""

from __future__ import annotations

import math
from decimal import Decimal, InvalidOperation
from fractions import Fraction

EPS = 2.0 ** -52  # double-precision unit roundoff (1 ulp at 1.0)

EXACT = "exact"
FLOAT = "float"


def parse_scalar(text):
    """Parse one scalar token: "p/q", integer or decimal literal.

    Rationals and decimal literals (including exponent notation) are exact;
    only "inf"/"nan"-style tokens fall back to float.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty scalar token")
    if "/" in s:
        num, _, den = s.partition("/")
        return Fraction(int(num.strip()), int(den.strip()))
    try:
        return Fraction(Decimal(s))
    except (InvalidOperation, ValueError):
        pass
    return float(s)


def is_exact(value) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def coerce_values(values, mode=None):
    """Normalize a list of scalars to one mode.

    With ``mode=None`` the mode is inferred: exact iff every entry is an
    int or Fraction.  Returns ``(tuple_of_values, mode)``.
    """
    vals = list(values)
    if not vals:
        raise ValueError("sequence must be nonempty")
    if mode is None:
        mode = EXACT if all(is_exact(v) for v in vals) else FLOAT
    if mode == EXACT:
        out = []
        for v in vals:
            if not is_exact(v):
                raise ValueError(f"exact mode requires rational entries, got {v!r}")
            out.append(Fraction(v))
        return tuple(out), EXACT
    if mode == FLOAT:
        return tuple(float(v) for v in vals), FLOAT
    raise ValueError(f"unknown mode {mode!r}")


def scalar_to_json(value):
    """JSON-friendly form: Fractions as "p/q" strings, floats as floats."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return value
    return float(value)


def scalar_to_float(value) -> float:
    return float(value)


def binomial_row(n: int):
    """Row n of Pascal's triangle as exact integers."""
    return [math.comb(n, i) for i in range(n + 1)]
