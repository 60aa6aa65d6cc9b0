"""Decimal and exact-rational rendering shared by tables and reports.

Magnitudes at or beyond 10^4 (or at or below 10^-4) render in scientific
notation with three significant digits; everything in between renders as a
plain decimal with four significant digits. Trailing zeros are trimmed, so
an exact 4000000 comes out as "4×10^6" rather than "4.00×10^6". The
"machine" style is identical except that it spells scientific notation
with an "e" ("6.42e14") so the output stays ASCII and parseable.
"""

from __future__ import annotations

from fractions import Fraction

SCI_HIGH = Fraction(10_000)
SCI_LOW = Fraction(1, 10_000)


def floor_log10(x: Fraction) -> int:
    """Largest e with 10^e <= x, for exact positive rationals of any size."""
    if x <= 0:
        raise ValueError("floor_log10 requires a positive value")
    e = len(str(x.numerator)) - len(str(x.denominator))
    while Fraction(10) ** e > x:
        e -= 1
    while Fraction(10) ** (e + 1) <= x:
        e += 1
    return e


def _significant_digits(a: Fraction, digits: int) -> tuple[str, int]:
    """Round a positive rational to `digits` significant digits.

    Returns the digit string (length exactly `digits`) and the exponent of
    the leading digit. Ties round half-to-even, exactly.
    """
    e = floor_log10(a)
    scaled = a / Fraction(10) ** (e - digits + 1)
    i = round(scaled)
    if i == 10**digits:
        i //= 10
        e += 1
    return str(i), e


def round_significant(x: Fraction | int, digits: int) -> Fraction:
    """Exact value of x rounded to `digits` significant digits."""
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    sign = -1 if x < 0 else 1
    text, e = _significant_digits(abs(x), digits)
    return sign * int(text) * Fraction(10) ** (e - digits + 1)


def _strip_mantissa(digits: str) -> str:
    stripped = digits.rstrip("0")
    if len(stripped) == 1:
        return stripped
    return stripped[0] + "." + stripped[1:]


def _scientific(a: Fraction, style: str) -> str:
    digits, e = _significant_digits(a, 3)
    mantissa = _strip_mantissa(digits)
    if style == "machine":
        return f"{mantissa}e{e}"
    return f"{mantissa}×10^{e}"


def _plain(a: Fraction) -> str:
    digits, e = _significant_digits(a, 4)
    if e >= 3:
        return digits + "0" * (e - 3)
    if e >= 0:
        text = digits[: e + 1] + "." + digits[e + 1 :]
    else:
        text = "0." + "0" * (-e - 1) + digits
    return text.rstrip("0").rstrip(".")


def decimal_text(value: Fraction | int, style: str = "human") -> str:
    """Render an exact rational as a decimal under the house rules."""
    if style not in ("human", "machine"):
        raise ValueError(f"unknown display style: {style!r}")
    x = Fraction(value)
    if x == 0:
        return "0"
    sign = "-" if x < 0 else ""
    a = abs(x)
    if a >= SCI_HIGH or a <= SCI_LOW:
        return sign + _scientific(a, style)
    return sign + _plain(a)


def exact_text(value: Fraction | int) -> str:
    """Serialize a rational as a decimal-free "numerator/denominator" string."""
    x = Fraction(value)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
