from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from decimal import ROUND_DOWN, ROUND_FLOOR, ROUND_HALF_UP
from fractions import Fraction

from arithmetic.services import (
    DomainError,
    FixedDecimal,
    decimal_expand,
    fd_sqrt,
    fixed_ceil,
    fixed_floor,
)
from oracle.models import Comparison
from oracle.services import (
    Enclosure,
    certified_quantize,
    cmp_value_pi,
    default_oracle,
    pi_digits,
    pi_enclosure,
)

from .quadratic import SQRT3, QuadraticSurd, sqrt_enclosure, sqrt_truncated

logger = logging.getLogger(__name__)

# The construction's radius AB is 100000 00000 00000: fifteen decimals.
PRINTED_SCALE = 15
CLOSED_FORM = "(1/3)·sqrt(120 − 18·sqrt(3))"
IL_SQUARED = QuadraticSurd(Fraction(120, 9), Fraction(-18, 9))


class ConstructionGeometryError(ValueError):
    pass


@dataclass(frozen=True)
class Point:
    label: str
    x: QuadraticSurd
    y: QuadraticSurd

    def distance_squared(self, other: Point) -> QuadraticSurd:
        dx, dy = other.x - self.x, other.y - self.y
        return dx * dx + dy * dy


def construction_coordinates() -> list[Point]:
    """
    Unit radius, centre A at the origin, diameter BD on the x axis.

    L sits on the tangent at D, beyond H, with HL equal to the diameter; the
    closed form IL = sqrt(4 + (3 - sqrt(3)/3)**2) fixes it at (1, 3).
    """
    zero, one = QuadraticSurd(0), QuadraticSurd(1)
    half = QuadraticSurd(Fraction(1, 2))
    return [
        Point("A", zero, zero),
        Point("B", -one, zero),
        Point("D", one, zero),
        Point("C", zero, one),
        Point("G", -one, one),
        Point("H", one, one),
        Point("E", -SQRT3 / 2, half),
        Point("F", SQRT3 / 2, half),
        Point("I", -one, SQRT3 / 3),
        Point("K", one, SQRT3 / 3),
        Point("L", one, QuadraticSurd(3)),
    ]


def _points() -> dict[str, Point]:
    return {p.label: p for p in construction_coordinates()}


def axis_length(p: Point, q: Point) -> QuadraticSurd:
    """Exact length of a horizontal or vertical segment."""
    if p.x == q.x:
        d = q.y - p.y
    elif p.y == q.y:
        d = q.x - p.x
    else:
        raise ConstructionGeometryError(f"{p.label}{q.label} is not axis-aligned.")
    return d if d.sign() >= 0 else -d


@dataclass(frozen=True)
class NamedLength:
    label: str
    exact: QuadraticSurd
    # IL is carried as its square; it does not live in the sqrt(3) field
    squared: bool
    scale: int
    truncated: FixedDecimal
    rounded: FixedDecimal


def _named(label: str, exact: QuadraticSurd, scale: int) -> NamedLength:
    return NamedLength(
        label=label,
        exact=exact,
        squared=False,
        scale=scale,
        truncated=exact.quantize(scale, ROUND_DOWN),
        rounded=exact.quantize(scale, ROUND_HALF_UP),
    )


def _named_root(label: str, square: QuadraticSurd, scale: int) -> NamedLength:
    return NamedLength(
        label=label,
        exact=square,
        squared=True,
        scale=scale,
        truncated=sqrt_truncated(square, scale),
        rounded=sqrt_truncated(square, scale + 1).quantize(scale, ROUND_HALF_UP),
    )


def defect_z_enclosure(digits: int) -> Enclosure:
    """pi - IL, of width about 10**-digits."""
    return pi_enclosure(digits) - sqrt_enclosure(IL_SQUARED, digits + 1)


def _reciprocal_enclosure(digits: int) -> Enclosure:
    z = defect_z_enclosure(digits)
    return Enclosure(
        lo=fixed_floor(1 / z.hi.to_fraction(), digits),
        hi=fixed_ceil(1 / z.lo.to_fraction(), digits),
    )


@functools.cache
def defect_reciprocal() -> int:
    """floor(1 / Z): how many times the defect fits in the radius."""
    return certified_quantize(_reciprocal_enclosure, 0, ROUND_FLOOR).mantissa


@dataclass(frozen=True)
class ConstructionReport:
    scale: int
    named_lengths: tuple[NamedLength, ...]
    closed_form: str
    il_squared: QuadraticSurd
    il: Enclosure
    defect_z: Enclosure
    defect_z_truncated: FixedDecimal
    defect_z_rounded: FixedDecimal
    reciprocal_x: int
    points: tuple[Point, ...]

    def length(self, label: str) -> NamedLength:
        for item in self.named_lengths:
            if item.label == label:
                return item
        raise KeyError(label)


def kochanski_construction(scale: int = PRINTED_SCALE) -> ConstructionReport:
    if scale < PRINTED_SCALE:
        raise DomainError(f"scale must be >= {PRINTED_SCALE}")
    pts = _points()
    ab = axis_length(pts["A"], pts["B"])
    bi = axis_length(pts["B"], pts["I"])
    ig = axis_length(pts["I"], pts["G"])
    kl = axis_length(pts["K"], pts["L"])
    ik = axis_length(pts["I"], pts["K"])
    total = kl * kl + ik * ik
    il_squared = pts["I"].distance_squared(pts["L"])
    if il_squared != IL_SQUARED or total != IL_SQUARED:
        raise ConstructionGeometryError("IL**2 does not reduce to (120 - 18*sqrt(3))/9.")

    lengths = (
        _named("AB", ab, scale),
        _named("BI", bi, scale),
        _named("IG", ig, scale),
        _named("KL", kl, scale),
        _named("KL2_IK2", total, 2 * scale),
        _named_root("IL", il_squared, scale),
    )
    il = sqrt_enclosure(il_squared, scale)
    if cmp_value_pi(il) != Comparison.LESS:
        raise ConstructionGeometryError("IL must fall short of pi.")

    defect = defect_z_enclosure(scale)
    report = ConstructionReport(
        scale=scale,
        named_lengths=lengths,
        closed_form=CLOSED_FORM,
        il_squared=il_squared,
        il=il,
        defect_z=defect,
        defect_z_truncated=certified_quantize(defect_z_enclosure, scale, ROUND_DOWN),
        defect_z_rounded=certified_quantize(defect_z_enclosure, scale, ROUND_HALF_UP),
        reciprocal_x=defect_reciprocal(),
        points=tuple(pts.values()),
    )
    logger.info("construction evaluated scale=%s X=%s", scale, report.reciprocal_x)
    return report


@dataclass(frozen=True)
class PrintedReplay:
    kl: FixedDecimal
    total: FixedDecimal
    root: FixedDecimal
    defect: FixedDecimal


def replay_from_printed(kl: FixedDecimal) -> PrintedReplay:
    """
    Redo the printed arithmetic from a printed KL: KL**2 + IK**2, its root IL,
    and Z as pi truncated at the same scale minus that root.

    The 1685 sum, root and defect follow from the printed KL exactly, which is
    how the audit tells a carried-forward digit from an arithmetic slip.
    """
    total = kl * kl + FixedDecimal(4)
    root = fd_sqrt(total, kl.scale)
    pi_truncated = FixedDecimal(int(pi_digits(kl.scale + 1)), kl.scale)
    return PrintedReplay(kl=kl, total=total, root=root, defect=pi_truncated - root)


@dataclass(frozen=True)
class YearBoundReport:
    year: int
    passed: bool
    reciprocal_x: int
    lower: Fraction
    upper: Fraction


def year_bound_check(year: int, *, reciprocal_x: int | None = None) -> YearBoundReport:
    """
    1/(10*(year+1)) < Z < 1/(10*year).

    1/Z is irrational, so the test reduces to 10*year <= floor(1/Z) < 10*(year+1).
    """
    if year < 1:
        raise DomainError("year must be >= 1")
    x = defect_reciprocal() if reciprocal_x is None else reciprocal_x
    return YearBoundReport(
        year=year,
        passed=10 * year <= x < 10 * (year + 1),
        reciprocal_x=x,
        lower=Fraction(1, 10 * (year + 1)),
        upper=Fraction(1, 10 * year),
    )


BISECTION_PARTS = 32
BISECTION_RATIO = Fraction(3217, 1024)
# "Peripheria P. 314160156": the bisection check is printed to eight decimals
BISECTION_ALIGNMENT = 8


@dataclass(frozen=True)
class BisectionReport:
    scale: int
    ratio: Fraction
    parts: int
    periphery_parts: Fraction
    decomposition: tuple[tuple[str, Fraction], ...]
    periphery: FixedDecimal
    excess_q: Enclosure
    q_truncated: FixedDecimal
    q_rounded: FixedDecimal
    comparison_to_z: bool

    @property
    def eighth(self) -> Fraction:
        return self.decomposition[1][1]


def _excess_q_enclosure(digits: int) -> Enclosure:
    return Enclosure.from_rational(BISECTION_RATIO, digits + 1) - pi_enclosure(digits)


def _q_below_z() -> bool:
    oracle = default_oracle()
    digits = oracle.start_digits
    while True:
        q, z = _excess_q_enclosure(digits), defect_z_enclosure(digits)
        if q.hi < z.lo:
            return True
        if q.lo > z.hi:
            return False
        digits = oracle.escalate(digits)


def bisection_construction(scale: int = 9) -> BisectionReport:
    """
    Diameter in 32 parts: three diameters, 4/32 of one, half a 32nd, and a
    sixteenth of the other half, i.e. 3217/1024.
    """
    if scale < 9:
        raise DomainError("scale must be >= 9")
    part = Fraction(1, BISECTION_PARTS)
    decomposition = (
        ("triple", Fraction(3)),
        ("four parts", 4 * part),
        ("half part", part / 2),
        ("sixteenth of half part", part / 2 / 16),
    )
    if sum(term for _, term in decomposition) != BISECTION_RATIO:
        raise ConstructionGeometryError("Dyadic parts do not sum to 3217/1024.")
    return BisectionReport(
        scale=scale,
        ratio=BISECTION_RATIO,
        parts=BISECTION_PARTS,
        periphery_parts=BISECTION_RATIO * BISECTION_PARTS,
        decomposition=decomposition,
        periphery=decimal_expand(BISECTION_RATIO, scale),
        excess_q=_excess_q_enclosure(scale),
        q_truncated=certified_quantize(_excess_q_enclosure, BISECTION_ALIGNMENT, ROUND_DOWN),
        q_rounded=certified_quantize(_excess_q_enclosure, BISECTION_ALIGNMENT, ROUND_HALF_UP),
        comparison_to_z=_q_below_z(),
    )
