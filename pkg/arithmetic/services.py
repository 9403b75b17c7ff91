from __future__ import annotations

import math
import re
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_DOWN, ROUND_FLOOR, ROUND_HALF_UP, Decimal
from fractions import Fraction

# Every diameter:periphery ratio is an exact, normalized Fraction.
BigRational = Fraction

GROUP_SIZE = 5

_DIGITS_RE = re.compile(r"^[0-9]+$")
_PLAIN_RE = re.compile(r"^(-)?([0-9]+)(?:\.([0-9]*))?$")


class ConstructionError(ValueError):
    pass


class DomainError(ValueError):
    pass


class ParseError(ValueError):
    pass


def make_rational(num: int, den: int) -> Fraction:
    """
    Build a normalized ratio: sign on the numerator, common factor removed.
    """
    if den == 0:
        raise ConstructionError("Denominator must be non-zero.")
    return Fraction(int(num), int(den))


def _scaled_quotient(num: int, den: int, rounding: str) -> int:
    """
    Integer nearest to num/den (den > 0) under one of the supported roundings.
    """
    if rounding == ROUND_FLOOR:
        return num // den
    if rounding == ROUND_CEILING:
        return -((-num) // den)
    if rounding == ROUND_DOWN:
        return num // den if num >= 0 else -((-num) // den)
    if rounding == ROUND_HALF_UP:
        q = (2 * abs(num) + den) // (2 * den)
        return q if num >= 0 else -q
    raise DomainError(f"Unsupported rounding: {rounding}")


@dataclass(frozen=True, eq=False)
class FixedDecimal:
    """
    value = mantissa * 10**(-scale).

    Equality and ordering compare values, so widening the scale never changes
    how two numbers compare.
    """

    mantissa: int
    scale: int = 0

    def __post_init__(self) -> None:
        if self.scale < 0:
            raise DomainError("scale must be >= 0")

    @classmethod
    def from_rational(cls, value: Fraction | int, scale: int, rounding: str = ROUND_DOWN) -> FixedDecimal:
        value = Fraction(value)
        return cls(_scaled_quotient(value.numerator * 10**scale, value.denominator, rounding), scale)

    @classmethod
    def from_string(cls, text: str) -> FixedDecimal:
        m = _PLAIN_RE.match((text or "").strip())
        if not m:
            raise ParseError(f"Not a plain decimal: {text!r}")
        sign, whole, frac = m.group(1), m.group(2), m.group(3) or ""
        mantissa = int(whole + frac)
        return cls(-mantissa if sign else mantissa, len(frac))

    def widen(self, scale: int) -> FixedDecimal:
        if scale < self.scale:
            raise DomainError("widen() cannot reduce the scale; use quantize().")
        return FixedDecimal(self.mantissa * 10 ** (scale - self.scale), scale)

    def quantize(self, scale: int, rounding: str = ROUND_DOWN) -> FixedDecimal:
        if scale >= self.scale:
            return self.widen(scale)
        return FixedDecimal(_scaled_quotient(self.mantissa, 10 ** (self.scale - scale), rounding), scale)

    def to_fraction(self) -> Fraction:
        return Fraction(self.mantissa, 10**self.scale)

    def to_decimal(self) -> Decimal:
        sign = 1 if self.mantissa < 0 else 0
        digits = tuple(int(c) for c in str(abs(self.mantissa)))
        return Decimal((sign, digits, -self.scale))

    @property
    def digits(self) -> str:
        """Mantissa digits with the integer part, no point or sign."""
        return str(abs(self.mantissa)).rjust(self.scale + 1, "0")

    def _aligned(self, other: FixedDecimal) -> tuple[int, int, int]:
        scale = max(self.scale, other.scale)
        return self.widen(scale).mantissa, other.widen(scale).mantissa, scale

    def __add__(self, other: FixedDecimal) -> FixedDecimal:
        if not isinstance(other, FixedDecimal):
            return NotImplemented
        a, b, scale = self._aligned(other)
        return FixedDecimal(a + b, scale)

    def __sub__(self, other: FixedDecimal) -> FixedDecimal:
        if not isinstance(other, FixedDecimal):
            return NotImplemented
        a, b, scale = self._aligned(other)
        return FixedDecimal(a - b, scale)

    def __mul__(self, other: FixedDecimal | int) -> FixedDecimal:
        if isinstance(other, int):
            return FixedDecimal(self.mantissa * other, self.scale)
        if not isinstance(other, FixedDecimal):
            return NotImplemented
        return FixedDecimal(self.mantissa * other.mantissa, self.scale + other.scale)

    __rmul__ = __mul__

    def __neg__(self) -> FixedDecimal:
        return FixedDecimal(-self.mantissa, self.scale)

    def __abs__(self) -> FixedDecimal:
        return FixedDecimal(abs(self.mantissa), self.scale)

    def _value(self, other) -> Fraction | None:
        if isinstance(other, FixedDecimal):
            return other.to_fraction()
        if isinstance(other, (int, Fraction)):
            return Fraction(other)
        return None

    def __eq__(self, other) -> bool:
        value = self._value(other)
        if value is None:
            return NotImplemented
        return self.to_fraction() == value

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    def __lt__(self, other) -> bool:
        value = self._value(other)
        if value is None:
            return NotImplemented
        return self.to_fraction() < value

    def __le__(self, other) -> bool:
        value = self._value(other)
        if value is None:
            return NotImplemented
        return self.to_fraction() <= value

    def __gt__(self, other) -> bool:
        value = self._value(other)
        if value is None:
            return NotImplemented
        return self.to_fraction() > value

    def __ge__(self, other) -> bool:
        value = self._value(other)
        if value is None:
            return NotImplemented
        return self.to_fraction() >= value

    def __str__(self) -> str:
        sign = "-" if self.mantissa < 0 else ""
        if self.scale == 0:
            return f"{sign}{abs(self.mantissa)}"
        digits = self.digits
        return f"{sign}{digits[:-self.scale]}.{digits[-self.scale:]}"


def decimal_expand(r: Fraction | int, scale: int, rounding: str = ROUND_DOWN) -> FixedDecimal:
    """
    Expansion of r with `scale` fraction digits.

    Truncation (toward zero) is the canonical mode: the 1685 tables cut digit
    rows, they never round them. ROUND_HALF_UP exists for audit comparisons only.
    """
    if scale < 0:
        raise DomainError("scale must be >= 0")
    return FixedDecimal.from_rational(r, scale, rounding)


def fixed_floor(r: Fraction | int, scale: int) -> FixedDecimal:
    return FixedDecimal.from_rational(r, scale, ROUND_FLOOR)


def fixed_ceil(r: Fraction | int, scale: int) -> FixedDecimal:
    return FixedDecimal.from_rational(r, scale, ROUND_CEILING)


def integer_sqrt_floor(n: int) -> int:
    if n < 0:
        raise DomainError("Square root of a negative integer.")
    return math.isqrt(n)


def fd_sqrt(x: FixedDecimal, scale: int) -> FixedDecimal:
    """
    Truncated square root: result**2 <= x < (result + 10**-scale)**2.
    """
    if x.mantissa < 0:
        raise DomainError("Square root of a negative value.")
    if scale < 0:
        raise DomainError("scale must be >= 0")
    shift = 2 * scale - x.scale
    if shift >= 0:
        radicand = x.mantissa * 10**shift
    else:
        # floor(sqrt(floor(y))) == floor(sqrt(y)) for y >= 0
        radicand = x.mantissa // 10 ** (-shift)
    return FixedDecimal(integer_sqrt_floor(radicand), scale)


def _fraction_group_lengths(scale: int, group: int) -> list[int]:
    lengths = [group] * (scale // group)
    if scale % group:
        lengths.append(scale % group)
    return lengths


def format_grouped(x: FixedDecimal, group: int = GROUP_SIZE, *, attach_integer: bool = True) -> str:
    """
    Digit rows the way the 1685 tables print them.

    Fraction digits are grouped from the decimal point rightward. With
    attach_integer the integer digits share the first group ("314159 26535",
    the examination table); without it they stand alone ("3 14153 33387 05093",
    the construction). Leading zero groups are dropped, so a defect of
    0.0000002667... reads "2667 64189" at its scale.
    """
    if group < 1:
        raise DomainError("group must be >= 1")
    sign = "-" if x.mantissa < 0 else ""
    digits = x.digits
    if x.scale:
        whole, frac = digits[: -x.scale], digits[-x.scale :]
    else:
        whole, frac = digits, ""
    frac_groups = [frac[i : i + group] for i in range(0, len(frac), group)]
    if attach_integer and frac_groups:
        tokens = [whole + frac_groups[0], *frac_groups[1:]]
    else:
        tokens = [whole, *frac_groups]

    while len(tokens) > 1 and not tokens[0].strip("0"):
        tokens.pop(0)
    tokens[0] = tokens[0].lstrip("0") or "0"
    if tokens == ["0"]:
        sign = ""
    return sign + " ".join(tokens)


def parse_grouped(text: str, scale: int, group: int = GROUP_SIZE, *, attach_integer: bool = True) -> FixedDecimal:
    """
    Inverse of format_grouped for a row printed at `scale` fraction digits.

    The spacing is checked against the grouping so a shifted or truncated
    row is reported rather than silently misread.
    """
    if group < 1:
        raise DomainError("group must be >= 1")
    raw = (text or "").strip()
    negative = raw.startswith("-")
    if negative:
        raw = raw[1:].strip()
    tokens = raw.split()
    if not tokens:
        raise ParseError("Empty digit row.")
    for token in tokens:
        if not _DIGITS_RE.match(token):
            raise ParseError(f"Non-digit group {token!r} in {text!r}.")

    lengths = _fraction_group_lengths(scale, group)
    tail = tokens[1:]
    max_tail = max(len(lengths) - 1, 0) if attach_integer else len(lengths)
    if len(tail) > max_tail:
        raise ParseError(f"Too many digit groups for scale {scale}: {text!r}.")
    expected = lengths[len(lengths) - len(tail) :] if tail else []
    if [len(t) for t in tail] != expected:
        raise ParseError(f"Digit groups of {text!r} do not align with scale {scale}.")

    lead_index = len(lengths) - len(tail) - 1
    holds_integer = lead_index < 0 or (attach_integer and lead_index == 0)
    if not holds_integer and len(tokens[0]) > lengths[lead_index]:
        raise ParseError(f"Leading group of {text!r} is too long for scale {scale}.")

    mantissa = int("".join(tokens))
    return FixedDecimal(-mantissa if negative else mantissa, scale)


def digit_string(text: str) -> str:
    """Printed row with its spacing removed."""
    return "".join((text or "").split())
