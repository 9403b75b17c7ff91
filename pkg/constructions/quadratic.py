from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_DOWN, ROUND_FLOOR, ROUND_HALF_UP
from fractions import Fraction

from arithmetic.services import DomainError, FixedDecimal, fd_sqrt, integer_sqrt_floor
from oracle.services import Enclosure

RADICAND = 3

Scalar = int | Fraction


@dataclass(frozen=True)
class QuadraticSurd:
    """
    a + b*sqrt(3) with rational a, b.

    Every length of the 1685 construction lives in this field, so sums,
    products and order comparisons are all exact.
    """

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @classmethod
    def coerce(cls, value: QuadraticSurd | Scalar) -> QuadraticSurd:
        if isinstance(value, QuadraticSurd):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(Fraction(value), Fraction(0))
        raise TypeError(f"Cannot use {type(value).__name__} as a surd.")

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def conjugate(self) -> QuadraticSurd:
        return QuadraticSurd(self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - RADICAND * self.b * self.b

    def __add__(self, other):
        if not isinstance(other, (QuadraticSurd, int, Fraction)):
            return NotImplemented
        other = QuadraticSurd.coerce(other)
        return QuadraticSurd(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self) -> QuadraticSurd:
        return QuadraticSurd(-self.a, -self.b)

    def __sub__(self, other):
        if not isinstance(other, (QuadraticSurd, int, Fraction)):
            return NotImplemented
        return self + (-QuadraticSurd.coerce(other))

    def __rsub__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return QuadraticSurd.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (QuadraticSurd, int, Fraction)):
            return NotImplemented
        other = QuadraticSurd.coerce(other)
        return QuadraticSurd(
            self.a * other.a + RADICAND * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (QuadraticSurd, int, Fraction)):
            return NotImplemented
        other = QuadraticSurd.coerce(other)
        norm = other.norm()
        if norm == 0:
            raise ZeroDivisionError("Division by zero surd.")
        product = self * other.conjugate()
        return QuadraticSurd(product.a / norm, product.b / norm)

    def __pow__(self, exponent: int) -> QuadraticSurd:
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = QuadraticSurd(Fraction(1))
        for _ in range(exponent):
            result = result * self
        return result

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(3)."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: the larger of a**2 and 3*b**2 wins
        lhs, rhs = self.a * self.a, RADICAND * self.b * self.b
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def _compare(self, other) -> int | None:
        if not isinstance(other, (QuadraticSurd, int, Fraction)):
            return None
        return (self - other).sign()

    def __eq__(self, other) -> bool:
        result = self._compare(other)
        if result is None:
            return NotImplemented
        return result == 0

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __lt__(self, other) -> bool:
        result = self._compare(other)
        if result is None:
            return NotImplemented
        return result < 0

    def __le__(self, other) -> bool:
        result = self._compare(other)
        if result is None:
            return NotImplemented
        return result <= 0

    def __gt__(self, other) -> bool:
        result = self._compare(other)
        if result is None:
            return NotImplemented
        return result > 0

    def __ge__(self, other) -> bool:
        result = self._compare(other)
        if result is None:
            return NotImplemented
        return result >= 0

    def __floor__(self) -> int:
        # estimate through isqrt, then settle exactly
        b2 = RADICAND * self.b * self.b
        root = integer_sqrt_floor(b2.numerator * b2.denominator) // b2.denominator
        k = math.floor(self.a + (root if self.b >= 0 else -root - 1))
        while (self - k).sign() < 0:
            k -= 1
        while (self - (k + 1)).sign() >= 0:
            k += 1
        return k

    def __ceil__(self) -> int:
        return -math.floor(-self)

    def quantize(self, scale: int, rounding: str = ROUND_DOWN) -> FixedDecimal:
        """Exact rounding of the surd to `scale` fraction digits."""
        if scale < 0:
            raise DomainError("scale must be >= 0")
        scaled = self * 10**scale
        if rounding == ROUND_FLOOR:
            mantissa = math.floor(scaled)
        elif rounding == ROUND_CEILING:
            mantissa = math.ceil(scaled)
        elif rounding == ROUND_DOWN:
            mantissa = math.floor(scaled) if scaled.sign() >= 0 else math.ceil(scaled)
        elif rounding == ROUND_HALF_UP:
            half = Fraction(1, 2)
            mantissa = math.floor(scaled + half) if scaled.sign() >= 0 else -math.floor(-scaled + half)
        else:
            raise DomainError(f"Unsupported rounding: {rounding}")
        return FixedDecimal(mantissa, scale)

    def enclosure(self, scale: int) -> Enclosure:
        return Enclosure(lo=self.quantize(scale, ROUND_FLOOR), hi=self.quantize(scale, ROUND_CEILING))

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt({RADICAND})"
        op = "+" if self.b > 0 else "-"
        return f"{self.a} {op} {abs(self.b)}*sqrt({RADICAND})"


SQRT3 = QuadraticSurd(Fraction(0), Fraction(1))


def sqrt_truncated(square: QuadraticSurd, scale: int) -> FixedDecimal:
    """
    floor(sqrt(square) * 10**scale) / 10**scale, exactly.

    sqrt(floor(y)) and sqrt(y) share their floor for y >= 0, so truncating the
    square at twice the scale loses nothing.
    """
    if square.sign() < 0:
        raise DomainError("Square root of a negative surd.")
    return fd_sqrt(square.quantize(2 * scale, ROUND_FLOOR), scale)


def sqrt_enclosure(square: QuadraticSurd, scale: int) -> Enclosure:
    lo = sqrt_truncated(square, scale)
    if square.is_rational and lo * lo == square.a:
        return Enclosure(lo=lo, hi=lo)
    return Enclosure(lo=lo, hi=lo + FixedDecimal(1, scale))
