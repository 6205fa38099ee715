"""Exact rationals as they travel on the wire.

All rational numbers in input and output documents are decimal strings
"p/q" (or plain integers); serialization is always canonical lowest terms
with a positive denominator, so parse -> serialize -> parse is a fixed
point.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def parse_rational(value: int | str | Fraction) -> Fraction:
    """Parse an exact rational from an int or a "p/q" string.

    Floats are rejected: they carry no exactness guarantee.
    Raises ValueError with an "invalid rational" message on bad input,
    including a zero denominator.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"invalid rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not _RATIONAL_RE.match(text):
            raise ValueError(f"invalid rational: {value!r}")
        if "/" in text:
            num, den = text.split("/")
            if int(den) == 0:
                raise ValueError(f"invalid rational: {value!r} (zero denominator)")
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    raise ValueError(f"invalid rational: {value!r} (expected int or 'p/q' string)")


def format_rational(q: Fraction) -> str:
    """Canonical string form: "p" for integers, "p/q" otherwise."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational_vector(values: Sequence[int | str]) -> tuple[Fraction, ...]:
    return tuple(parse_rational(v) for v in values)


def format_rational_vector(values: Iterable[Fraction]) -> list[str]:
    return [format_rational(v) for v in values]


def format_rational_matrix(rows: Iterable[Iterable[Fraction]]) -> list[list[str]]:
    return [[format_rational(v) for v in row] for row in rows]
