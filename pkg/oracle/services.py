from __future__ import annotations

import logging
import os
import threading
from collections.abc import Callable
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_DOWN, ROUND_FLOOR
from fractions import Fraction

from django.conf import settings

from arithmetic.services import DomainError, FixedDecimal, fixed_ceil, fixed_floor

from .models import Comparison

logger = logging.getLogger(__name__)


class PrecisionCeilingError(ValueError):
    def __init__(self, message: str, *, digits: int):
        super().__init__(message)
        self.digits = digits


@dataclass(frozen=True)
class Enclosure:
    """
    Closed interval [lo, hi] known to contain a real value.
    """

    lo: FixedDecimal
    hi: FixedDecimal

    def __post_init__(self) -> None:
        if self.lo.scale != self.hi.scale:
            raise DomainError("Enclosure endpoints must share a scale.")
        if self.lo > self.hi:
            raise DomainError("Enclosure lo must be <= hi.")

    @classmethod
    def from_rational(cls, value: Fraction | int, scale: int) -> Enclosure:
        return cls(lo=fixed_floor(value, scale), hi=fixed_ceil(value, scale))

    @property
    def scale(self) -> int:
        return self.lo.scale

    @property
    def width(self) -> Fraction:
        return self.hi.to_fraction() - self.lo.to_fraction()

    def contains(self, value: Fraction | FixedDecimal | int) -> bool:
        return self.lo <= value <= self.hi

    def overlaps(self, other: Enclosure) -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def widen(self, scale: int) -> Enclosure:
        return Enclosure(lo=self.lo.widen(scale), hi=self.hi.widen(scale))

    def intersect(self, other: Enclosure) -> Enclosure:
        scale = max(self.scale, other.scale)
        a, b = self.widen(scale), other.widen(scale)
        lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
        if lo > hi:
            raise DomainError("Enclosures are disjoint.")
        return Enclosure(lo=FixedDecimal(lo.mantissa, scale), hi=FixedDecimal(hi.mantissa, scale))

    def rounded_outward(self, scale: int) -> Enclosure:
        return Enclosure(lo=self.lo.quantize(scale, ROUND_FLOOR), hi=self.hi.quantize(scale, ROUND_CEILING))

    def __add__(self, other: Enclosure) -> Enclosure:
        if not isinstance(other, Enclosure):
            return NotImplemented
        scale = max(self.scale, other.scale)
        a, b = self.widen(scale), other.widen(scale)
        return Enclosure(lo=a.lo + b.lo, hi=a.hi + b.hi)

    def __neg__(self) -> Enclosure:
        return Enclosure(lo=-self.hi, hi=-self.lo)

    def __sub__(self, other: Enclosure) -> Enclosure:
        if not isinstance(other, Enclosure):
            return NotImplemented
        return self + (-other)

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def _arctan_inverse(b: int, unity: int) -> tuple[int, int]:
    """
    unity * arctan(1/b) by its Maclaurin series, in integer fixed point.

    Returns (total, bound) with |unity * arctan(1/b) - total| <= bound.

    power_k = floor(unity / b**(2k+1)) is exact because successive floor
    divisions compose, and term_k = floor(power_k / (2k+1)) is the floor of the
    true term, so each summed term is off by less than 1. Summation stops at the
    first power_k == 0: every remaining true term is then below 1 and they
    alternate with decreasing magnitude, so the tail is below 1 as well.
    The bound is therefore the number of summed terms plus one.
    """
    b2 = b * b
    power = unity // b
    total = 0
    k = 0
    while power:
        term = power // (2 * k + 1)
        total = total - term if k % 2 else total + term
        power //= b2
        k += 1
    return total, k + 1


def _identity_enclosure(precision: int, weights: tuple[tuple[int, int], ...]) -> Enclosure:
    """
    Enclosure of sum(weight * arctan(1/b)) of width below 10**-precision.
    """
    guard = 8
    while True:
        scale = precision + guard
        unity = 10**scale
        total = 0
        bound = 0
        for weight, b in weights:
            part, err = _arctan_inverse(b, unity)
            total += weight * part
            bound += abs(weight) * err
        if 2 * bound < 10**guard:
            return Enclosure(lo=FixedDecimal(total - bound, scale), hi=FixedDecimal(total + bound, scale))
        guard = len(str(2 * bound)) + 1


# pi = 16 arctan(1/5) - 4 arctan(1/239)
_MACHIN = ((16, 5), (-4, 239))
# pi = 8 arctan(1/3) + 4 arctan(1/7); only used to cross-check the first
_HUTTON = ((8, 3), (4, 7))


def machin_enclosure(precision: int) -> Enclosure:
    return _identity_enclosure(precision, _MACHIN)


def cross_check_enclosure(precision: int) -> Enclosure:
    return _identity_enclosure(precision, _HUTTON)


class PiOracle:
    """
    Cached, thread-safe source of pi enclosures and certified digits.

    The best enclosure computed so far only ever shrinks (new results are
    intersected with it), so answers served later are contained in answers
    served earlier. Certified digits are append-only.
    """

    def __init__(self, *, max_digits: int | None = None, start_digits: int | None = None):
        self._max_digits = max_digits
        self._start_digits = start_digits
        self._lock = threading.RLock()
        self._best: Enclosure | None = None
        self._digits = ""

    @property
    def max_digits(self) -> int:
        if self._max_digits is not None:
            return self._max_digits
        return int(getattr(settings, "CYCLOMETRIA_MAX_DIGITS", 10_000))

    @property
    def start_digits(self) -> int:
        if self._start_digits is not None:
            return self._start_digits
        return max(int(getattr(settings, "CYCLOMETRIA_DEFAULT_DIGITS", 32)), 1)

    def _check_ceiling(self, digits: int) -> None:
        if digits > self.max_digits:
            logger.warning("pi precision ceiling hit digits=%s max=%s", digits, self.max_digits)
            raise PrecisionCeilingError(
                f"{digits} digits requested, ceiling is {self.max_digits} (CYCLOMETRIA_MAX_DIGITS).",
                digits=digits,
            )

    def enclosure(self, digits: int) -> Enclosure:
        """
        lo < pi < hi with hi - lo <= 10**-digits, at scale digits + 1.
        """
        if digits < 1:
            raise DomainError("digits must be >= 1")
        self._check_ceiling(digits)
        target = Fraction(1, 10**digits)
        with self._lock:
            if self._best is not None:
                served = self._best.rounded_outward(digits + 1)
                if served.width <= target:
                    return served
            precision = max(digits + 1, min(self.start_digits, self.max_digits))
            logger.debug("computing pi enclosure precision=%s", precision)
            fresh = machin_enclosure(precision)
            self._best = fresh if self._best is None else self._best.intersect(fresh)
            return self._best.rounded_outward(digits + 1)

    def escalate(self, digits: int) -> int:
        """Next precision in the doubling schedule; raises at the ceiling."""
        if digits >= self.max_digits:
            self._check_ceiling(digits + 1)
        return min(digits * 2, self.max_digits)

    def compare(self, r: Fraction | int) -> Comparison:
        """
        LESS iff r < pi. Rationals never equal pi, so this always terminates
        below the ceiling for any r of reasonable size.
        """
        r = Fraction(r)
        digits = min(self.start_digits, self.max_digits)
        while True:
            enc = self.enclosure(digits)
            if r < enc.lo:
                return Comparison.LESS
            if r > enc.hi:
                return Comparison.GREATER
            logger.debug("cmp_pi inconclusive at digits=%s, doubling", digits)
            digits = self.escalate(digits)

    def compare_enclosure(self, v: Enclosure) -> Comparison:
        """
        Order of an enclosed value against pi, or INCONCLUSIVE while v still
        overlaps pi. Only pi is refined here; refining v is the caller's job.
        """
        digits = min(max(v.scale + 1, self.start_digits), self.max_digits)
        while True:
            enc = self.enclosure(digits)
            if v.hi < enc.lo:
                return Comparison.LESS
            if v.lo > enc.hi:
                return Comparison.GREATER
            if v.lo < enc.lo and enc.hi < v.hi:
                return Comparison.INCONCLUSIVE
            if digits >= self.max_digits:
                logger.warning("cmp_value_pi undecided at the ceiling v=%s", v)
                return Comparison.INCONCLUSIVE
            digits = self.escalate(digits)

    def digits(self, n: int) -> str:
        """
        First n significant digits of pi, truncated ("3141..."), certified by
        an enclosure whose endpoints share the prefix.
        """
        if n < 1:
            raise DomainError("n must be >= 1")
        with self._lock:
            if len(self._digits) >= n:
                return self._digits[:n]
            digits = min(max(n, self.start_digits), self.max_digits)
            while True:
                enc = self.enclosure(digits)
                certified = os.path.commonprefix([enc.lo.digits, enc.hi.digits])
                if len(certified) >= n:
                    if not certified.startswith(self._digits):
                        raise AssertionError("pi digit cache would be rewritten")
                    self._digits = certified
                    return certified[:n]
                logger.debug("pi digits %s not certified at digits=%s, doubling", n, digits)
                digits = self.escalate(digits)


_default_oracle = PiOracle()


def default_oracle() -> PiOracle:
    return _default_oracle


def pi_enclosure(digits: int) -> Enclosure:
    return _default_oracle.enclosure(digits)


def cmp_pi(r: Fraction | int) -> Comparison:
    return _default_oracle.compare(r)


def cmp_value_pi(v: Enclosure) -> Comparison:
    return _default_oracle.compare_enclosure(v)


def pi_digits(n: int) -> str:
    return _default_oracle.digits(n)


def agreeing_digits(x: FixedDecimal) -> int:
    """Leading digits of x, its integer part included, that pi shares."""
    digits = x.digits
    shared = 0
    for a, b in zip(digits, pi_digits(len(digits))):
        if a != b:
            break
        shared += 1
    return shared


def certified_quantize(
    value: Callable[[int], Enclosure], scale: int, rounding: str = ROUND_DOWN
) -> FixedDecimal:
    """
    Round a real to `scale` digits given a way to enclose it at any precision.

    Precision is raised until both endpoints of the enclosure round to the same
    FixedDecimal; value(digits) must return an enclosure of width about
    10**-digits.
    """
    oracle = default_oracle()
    digits = min(max(scale + 2, oracle.start_digits), oracle.max_digits)
    while True:
        enc = value(digits)
        lo, hi = enc.lo.quantize(scale, rounding), enc.hi.quantize(scale, rounding)
        if lo == hi:
            return lo
        logger.debug("rounding to scale %s undecided at digits=%s", scale, digits)
        digits = oracle.escalate(digits)
