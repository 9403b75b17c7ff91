from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from decimal import ROUND_CEILING
from fractions import Fraction

from arithmetic.services import decimal_expand, make_rational
from oracle.models import Comparison
from oracle.services import (
    Enclosure,
    agreeing_digits,
    certified_quantize,
    cmp_pi,
    default_oracle,
    pi_enclosure,
)

from .models import BOUND_MARKS, BoundKind

logger = logging.getLogger(__name__)


class OriginatorError(ValueError):
    pass


# Raw pairs are (periphery, diameter), unreduced, as Table 1 prints them.
RawPair = tuple[int, int]


@dataclass(frozen=True)
class LabeledBound:
    label: str
    raw: RawPair
    kind: str

    @property
    def value(self) -> Fraction:
        return make_rational(*self.raw)

    @property
    def mark(self) -> str:
        return BOUND_MARKS[BoundKind(self.kind)]


SEEDS: tuple[LabeledBound, ...] = (
    LabeledBound(label="A", raw=(3, 1), kind=BoundKind.DEFECTIVE),
    LabeledBound(label="Aa", raw=(4, 1), kind=BoundKind.EXCESSIVE),
    LabeledBound(label="B", raw=(25, 8), kind=BoundKind.DEFECTIVE),
    LabeledBound(label="Bb", raw=(22, 7), kind=BoundKind.EXCESSIVE),
)

# (defective, excessive, originator, originator + 1) per refinement step.
PRINTED_LABELS: tuple[tuple[str, str, str, str], ...] = (
    ("C", "Cc", "Z", "Zz"),
    ("D", "Dd", "Y", "Yy"),
    ("E", "Ee", "X", "Xx"),
    ("F", "Ff", "V", "Vv"),
)
_EXTRA_BOUND_LETTERS = "GHIJKLM"
_EXTRA_ORIGINATOR_LETTERS = "UTSRQPO"


def step_labels(index: int) -> tuple[str, str, str, str]:
    if index < len(PRINTED_LABELS):
        return PRINTED_LABELS[index]
    extra = index - len(PRINTED_LABELS)
    if extra < len(_EXTRA_BOUND_LETTERS):
        b, o = _EXTRA_BOUND_LETTERS[extra], _EXTRA_ORIGINATOR_LETTERS[extra]
        return (b, b + b.lower(), o, o + o.lower())
    n = index + 1
    return (f"S{n}", f"S{n}s", f"N{n}", f"N{n}n")


@dataclass(frozen=True)
class BoundPair:
    label_minor: str
    label_major: str
    originator_label_minor: str
    originator_label_major: str
    parent_raw: RawPair
    originator_minor: int
    originator_major: int
    defective_raw: RawPair
    excessive_raw: RawPair

    @property
    def parent(self) -> Fraction:
        return make_rational(*self.parent_raw)

    @property
    def defective(self) -> Fraction:
        return make_rational(*self.defective_raw)

    @property
    def excessive(self) -> Fraction:
        return make_rational(*self.excessive_raw)

    def bounds(self) -> tuple[LabeledBound, LabeledBound]:
        return (
            LabeledBound(label=self.label_minor, raw=self.defective_raw, kind=BoundKind.DEFECTIVE),
            LabeledBound(label=self.label_major, raw=self.excessive_raw, kind=BoundKind.EXCESSIVE),
        )


@dataclass(frozen=True)
class Chain:
    seeds: tuple[LabeledBound, ...]
    steps: tuple[BoundPair, ...]

    @property
    def depth(self) -> int:
        return len(self.steps)

    def rows(self) -> list[LabeledBound]:
        """Every bound in Table 1 order: A, Aa, B, Bb, C, Cc, ..."""
        rows = list(self.seeds)
        for step in self.steps:
            rows.extend(step.bounds())
        return rows

    def bound(self, label: str) -> LabeledBound:
        for row in self.rows():
            if row.label == label:
                return row
        raise KeyError(label)

    def originators(self) -> list[tuple[str, int]]:
        out: list[tuple[str, int]] = []
        for step in self.steps:
            out.append((step.originator_label_minor, step.originator_minor))
            out.append((step.originator_label_major, step.originator_major))
        return out


def originator(p: int, q: int) -> int:
    """
    n* = max { n >= 1 : (p*n + 3) / (q*n + 1) < pi } = floor((pi - 3) / (p - q*pi)).

    (x - 3) / (p - q*x) is increasing for x < p/q when p/q > 3, so the floor is
    bracketed by its values at the enclosure endpoints; precision is raised
    until both agree.
    """
    if q <= 0:
        raise OriginatorError("Parent diameter must be positive.")
    if p <= 3 * q:
        raise OriginatorError(f"Parent {p}/{q} must exceed 3.")
    if cmp_pi(Fraction(p, q)) != Comparison.GREATER:
        raise OriginatorError(f"Parent {p}/{q} is not an excessive ratio.")

    oracle = default_oracle()
    digits = min(max(oracle.start_digits, len(str(p)) + len(str(q))), oracle.max_digits)
    while True:
        enc = pi_enclosure(digits)
        lo, hi = enc.lo.to_fraction(), enc.hi.to_fraction()
        if p - q * hi > 0:
            n_lo = math.floor((lo - 3) / (p - q * lo))
            n_hi = math.floor((hi - 3) / (p - q * hi))
            if n_lo == n_hi:
                break
        logger.debug("originator floor undecided for %s/%s at digits=%s", p, q, digits)
        digits = oracle.escalate(digits)

    if n_lo < 1:
        raise OriginatorError(f"No originator n >= 1 exists for parent {p}/{q}.")
    return n_lo


def sandwich_holds(pair: BoundPair) -> bool:
    return cmp_pi(pair.defective) == Comparison.LESS and cmp_pi(pair.excessive) == Comparison.GREATER


def refine(p: int, q: int, *, labels: tuple[str, str, str, str] | None = None) -> BoundPair:
    """
    One refinement of the excessive parent p/q (as printed, unreduced).
    """
    n = originator(p, q)
    minor, major, o_minor, o_major = labels or step_labels(0)
    pair = BoundPair(
        label_minor=minor,
        label_major=major,
        originator_label_minor=o_minor,
        originator_label_major=o_major,
        parent_raw=(p, q),
        originator_minor=n,
        originator_major=n + 1,
        defective_raw=(p * n + 3, q * n + 1),
        excessive_raw=(p * (n + 1) + 3, q * (n + 1) + 1),
    )
    if not sandwich_holds(pair):
        raise OriginatorError(f"Refinement of {p}/{q} does not enclose pi.")
    return pair


def generate_chain(depth: int) -> Chain:
    if depth < 0:
        raise ValueError("depth must be >= 0")
    steps: list[BoundPair] = []
    parent = SEEDS[-1].raw
    for index in range(depth):
        pair = refine(*parent, labels=step_labels(index))
        logger.debug(
            "chain step %s originator=%s parent=%s", pair.label_minor, pair.originator_minor, parent
        )
        steps.append(pair)
        parent = pair.excessive_raw
    return Chain(seeds=SEEDS, steps=tuple(steps))


@dataclass(frozen=True)
class ReducedForm:
    raw: RawPair
    value: Fraction
    factor: int

    @property
    def periphery(self) -> int:
        return self.value.numerator

    @property
    def diameter(self) -> int:
        return self.value.denominator


def reduced_form(raw: RawPair) -> ReducedForm:
    periphery, diameter = raw
    value = make_rational(periphery, diameter)
    factor = math.gcd(periphery, diameter)
    return ReducedForm(raw=(periphery, diameter), value=value, factor=factor)


def mixed_form(x: Fraction) -> str:
    """22 3/5 style, the way the reduced forms table writes fractional terms."""
    x = Fraction(x)
    whole, rest = divmod(x.numerator, x.denominator)
    if rest == 0:
        return str(whole)
    return f"{whole} {rest}/{x.denominator}"


_MIXED_RE = re.compile(r"^\s*(?:(\d+)\s+)?(?:(\d+)/(\d+)|(\d+))\s*$")


def parse_mixed(text: str) -> Fraction:
    m = _MIXED_RE.match(text or "")
    if not m:
        raise ValueError(f"Not a mixed number: {text!r}")
    whole, num, den, plain = m.groups()
    if plain is not None:
        if whole is not None:
            raise ValueError(f"Not a mixed number: {text!r}")
        return Fraction(int(plain))
    return Fraction(int(whole or 0)) + make_rational(int(num), int(den))


@dataclass(frozen=True)
class ReducedFormEntry:
    label: str
    source_label: str
    source_raw: RawPair
    divisor: int
    diameter: Fraction
    periphery: Fraction
    kind: str

    @property
    def value(self) -> Fraction:
        return self.periphery / self.diameter

    def render(self) -> str:
        return f"{mixed_form(self.diameter)} ad {mixed_form(self.periphery)}"


# Reduced forms the 1685 table lists: cc divides Cc by 5 (giving a mixed
# diameter), d and e divide out the whole common factor.
REDUCED_FORMS: tuple[tuple[str, str, int | None], ...] = (
    ("cc", "Cc", 5),
    ("d", "D", None),
    ("e", "Ee", None),
)


def reduced_forms_table(chain: Chain) -> list[ReducedFormEntry]:
    entries: list[ReducedFormEntry] = []
    for label, source_label, divisor in REDUCED_FORMS:
        try:
            source = chain.bound(source_label)
        except KeyError:
            continue
        periphery, diameter = source.raw
        if divisor is None:
            divisor = reduced_form(source.raw).factor
        entries.append(
            ReducedFormEntry(
                label=label,
                source_label=source_label,
                source_raw=source.raw,
                divisor=divisor,
                diameter=Fraction(diameter, divisor),
                periphery=Fraction(periphery, divisor),
                kind=source.kind,
            )
        )
    return entries


CURIOUS_MAJOR = 3113
CURIOUS_MINOR = 991
# "minus quam 23 centesimis": the excess counted in units of 10**-9
CURIOUS_EXCESS_EXPONENT = 9


@dataclass(frozen=True)
class CuriousRatioReport:
    value: Fraction
    agreeing_digits: int
    excess: Enclosure
    excess_units: int
    decimal: str


def curious_value() -> Fraction:
    return make_rational(CURIOUS_MAJOR**2 + CURIOUS_MINOR, CURIOUS_MAJOR * CURIOUS_MINOR)


def curious_ratio(*, scale: int = 20) -> CuriousRatioReport:
    """
    (3113**2 + 991) / (3113 * 991) with its agreement against pi.

    excess_units is the least integer u with r - pi < u * 10**-9, certified
    from the enclosure.
    """
    value = curious_value()
    agreeing = agreeing_digits(decimal_expand(value, scale))

    def enclose(digits: int) -> Enclosure:
        return Enclosure.from_rational(value, digits + 1) - pi_enclosure(digits)

    excess = enclose(scale)
    units = certified_quantize(enclose, CURIOUS_EXCESS_EXPONENT, ROUND_CEILING).mantissa

    return CuriousRatioReport(
        value=value,
        agreeing_digits=agreeing,
        excess=excess,
        excess_units=units,
        decimal=str(decimal_expand(value, 10)),
    )
