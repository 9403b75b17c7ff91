from __future__ import annotations

import logging
from dataclasses import dataclass
from decimal import ROUND_DOWN, ROUND_FLOOR
from fractions import Fraction

from django.template.loader import render_to_string

from arithmetic.services import DomainError, FixedDecimal, decimal_expand, format_grouped
from oracle.models import Comparison
from oracle.services import (
    Enclosure,
    agreeing_digits,
    certified_quantize,
    cmp_pi,
    cmp_value_pi,
    pi_digits,
    pi_enclosure,
)
from synthesis.services import Chain

from .models import RowKind

logger = logging.getLogger(__name__)

# Diameter 100000 00000 00000 00000 00000: every row is measured in 10**-25 parts.
EXAMEN_SCALE = 25
ROW_SCALES = {
    "B": 10,
    "Bb": 10,
    "C": 15,
    "Cc": 15,
    "D": 20,
    "Dd": 20,
    "E": 20,
    "Ee": 20,
    "F": 25,
    "Ff": 25,
}
REFERENCE_LABEL = "Archimedes"
# Table 2 begins at B; A and Aa are too coarse to examine.
SKIPPED_LABELS = frozenset({"A", "Aa"})


@dataclass(frozen=True)
class ExamenRow:
    label: str
    value: Fraction | None
    kind: str
    scale: int
    periphery_digits: FixedDecimal
    deviation_digits: FixedDecimal
    truncated_difference: FixedDecimal
    # leading digits shared with pi, the integer 3 included
    agreeing_digits: int

    @property
    def heading(self) -> str:
        return f"{self.label}."

    @property
    def kind_label(self) -> str:
        return RowKind(self.kind).label

    @property
    def periphery_text(self) -> str:
        return format_grouped(self.periphery_digits)

    @property
    def deviation_text(self) -> str:
        return format_grouped(self.deviation_digits)

    @property
    def truncated_difference_text(self) -> str:
        return format_grouped(self.truncated_difference)


def row_scale(label: str) -> int:
    return ROW_SCALES.get(label, EXAMEN_SCALE)


def _pi_truncated(scale: int) -> FixedDecimal:
    return FixedDecimal(int(pi_digits(scale + 1)), scale)


def reference_row(scale: int = EXAMEN_SCALE) -> ExamenRow:
    zero = FixedDecimal(0, scale)
    return ExamenRow(
        label=REFERENCE_LABEL,
        value=None,
        kind=RowKind.REFERENCE,
        scale=scale,
        periphery_digits=_pi_truncated(scale),
        deviation_digits=zero,
        truncated_difference=zero,
        agreeing_digits=scale + 1,
    )


def examine(value: Fraction | int | Enclosure, scale: int, *, label: str = "") -> ExamenRow:
    """
    One Table 2 row: the periphery at `scale` digits and its distance from pi.

    The deviation is |value - pi| truncated at `scale`, taken from the exact
    value before any expansion; the difference of the two truncated rows is
    carried alongside.
    """
    if scale < 1:
        raise DomainError("scale must be >= 1")
    if isinstance(value, Enclosure):
        return _examine_enclosure(value, scale, label=label)

    value = Fraction(value)
    kind = RowKind.DEFECT if cmp_pi(value) == Comparison.LESS else RowKind.EXCESS

    def deviation(digits: int) -> Enclosure:
        gap = Enclosure.from_rational(value, digits + 1) - pi_enclosure(digits)
        return gap if kind == RowKind.EXCESS else -gap

    periphery = decimal_expand(value, scale)
    return ExamenRow(
        label=label,
        value=value,
        kind=kind,
        scale=scale,
        periphery_digits=periphery,
        deviation_digits=certified_quantize(deviation, scale, ROUND_DOWN),
        truncated_difference=abs(periphery - _pi_truncated(scale)),
        agreeing_digits=agreeing_digits(periphery),
    )


def _examine_enclosure(value: Enclosure, scale: int, *, label: str) -> ExamenRow:
    periphery = value.lo.quantize(scale, ROUND_DOWN)
    if value.hi.quantize(scale, ROUND_DOWN) != periphery:
        raise DomainError(f"Enclosure {value} is too wide for {scale} digits.")
    comparison = cmp_value_pi(value)
    if comparison == Comparison.INCONCLUSIVE:
        zero = FixedDecimal(0, scale)
        return ExamenRow(
            label=label or REFERENCE_LABEL,
            value=None,
            kind=RowKind.REFERENCE,
            scale=scale,
            periphery_digits=periphery,
            deviation_digits=zero,
            truncated_difference=abs(periphery - _pi_truncated(scale)),
        agreeing_digits=agreeing_digits(periphery),
        )

    kind = RowKind.DEFECT if comparison == Comparison.LESS else RowKind.EXCESS

    def deviation(digits: int) -> Enclosure:
        gap = value - pi_enclosure(digits)
        return gap if kind == RowKind.EXCESS else -gap

    return ExamenRow(
        label=label,
        value=None,
        kind=kind,
        scale=scale,
        periphery_digits=periphery,
        deviation_digits=certified_quantize(deviation, scale, ROUND_DOWN),
        truncated_difference=abs(periphery - _pi_truncated(scale)),
        agreeing_digits=agreeing_digits(periphery),
    )


def examen_rows(chain: Chain) -> list[ExamenRow]:
    """The reference row followed by every examined bound of the chain."""
    rows = [reference_row(EXAMEN_SCALE)]
    for bound in chain.rows():
        if bound.label in SKIPPED_LABELS:
            continue
        rows.append(examine(bound.value, row_scale(bound.label), label=bound.label))
    return rows


def render_examen(chain: Chain, scale: int = EXAMEN_SCALE) -> str:
    rows = examen_rows(chain)[1:]
    widest = max((row.scale for row in rows), default=0)
    if scale < widest:
        raise DomainError(f"Table scale {scale} is narrower than its widest row ({widest}).")
    reference = reference_row(scale)
    return render_to_string(
        "examen/table.txt",
        {
            "diameter": format_grouped(FixedDecimal(10**scale, scale)),
            "reference": reference.periphery_text,
            "reference_label": reference.kind_label,
            "rows": rows,
        },
    )


def defect_numerator(r: Fraction, scale: int = 5) -> int:
    """
    floor(|pi - r| * 10**scale): the numerator over a denominator of 1 and
    `scale` zeros ("Rationis C Defectum metitur 8/100000").
    """
    r = Fraction(r)
    below = cmp_pi(r) == Comparison.LESS

    def gap(digits: int) -> Enclosure:
        diff = pi_enclosure(digits) - Enclosure.from_rational(r, digits + 1)
        return diff if below else -diff

    return certified_quantize(gap, scale, ROUND_FLOOR).mantissa
