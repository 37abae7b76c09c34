"""Parsing and formatting of exact rationals for the JSON/CLI surfaces.

Authoritative values are always carried as `fractions.Fraction` in lowest
terms; the wire format is the string "n/d" (plain "n" for integers).
Integers embedded in JSON stay JSON numbers while they fit the IEEE-754
safe range and become decimal strings beyond it.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InvalidInputError

__all__ = ["parse_rational", "format_rational", "int_to_json", "int_from_json"]

_JSON_SAFE_INT = 2**53 - 1


def parse_rational(value) -> Fraction:
    """Parse "n/d" or "n" strings (ints and Fractions pass through)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInputError(f"malformed rational {value!r}: {exc}") from None
    raise InvalidInputError(f"cannot interpret {value!r} as a rational")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def int_to_json(n: int):
    """Integers as JSON numbers within the safe range, else decimal strings."""
    return n if abs(n) <= _JSON_SAFE_INT else str(n)


def int_from_json(value) -> int:
    if isinstance(value, bool):
        raise InvalidInputError(f"expected an integer, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value.strip())
        except ValueError:
            raise InvalidInputError(f"malformed integer {value!r}") from None
    if isinstance(value, float) and value.is_integer():
        return int(value)
    raise InvalidInputError(f"expected an integer, got {value!r}")
