from __future__ import annotations

import functools
import logging
import re
from collections.abc import Callable
from dataclasses import dataclass, field
from decimal import ROUND_DOWN, ROUND_HALF_UP
from fractions import Fraction

from arithmetic.services import (
    FixedDecimal,
    ParseError,
    decimal_expand,
    digit_string,
    format_grouped,
    parse_grouped,
)
from constructions.services import (
    BISECTION_ALIGNMENT,
    BisectionReport,
    ConstructionReport,
    PrintedReplay,
    bisection_construction,
    kochanski_construction,
    replay_from_printed,
    year_bound_check,
)
from oracle.services import Enclosure, agreeing_digits, certified_quantize, pi_enclosure
from synthesis.models import BOUND_MARKS, BoundKind
from synthesis.services import (
    CURIOUS_MAJOR,
    CURIOUS_MINOR,
    Chain,
    CuriousRatioReport,
    ReducedFormEntry,
    curious_ratio,
    curious_value,
    generate_chain,
    mixed_form,
    reduced_forms_table,
)

from .corpus import Corpus, CorpusEntry, CorpusError, load_corpus
from .models import Classification, Convention, RowKind
from .services import EXAMEN_SCALE, ExamenRow, defect_numerator, examen_rows, reference_row

logger = logging.getLogger(__name__)

TRANSLATOR_PREFIX = "translator."
# Table 1 runs to F/Ff: four refinements of 22/7.
AUDIT_CHAIN_DEPTH = 4
CONSTRUCTION_SCALE = 15
BISECTION_SCALE = 9
# "r - pi = 0.23e-7": the translator's excess in units of 10**-7, two places.
CURIOUS_EXCESS_PLACES = 2
CURIOUS_EXCESS_SHIFT = 7


@dataclass(frozen=True)
class Rendering:
    """What independent computation says a printed entry should read."""

    exact: str
    alternatives: tuple[tuple[str, str], ...] = ()
    note: str = ""


@dataclass(frozen=True)
class AuditFinding:
    location: str
    printed: str
    computed: str
    classification: str
    convention: str
    note: str = ""
    provenance: str = ""

    @property
    def is_misprint(self) -> bool:
        return self.classification in (Classification.PAPER_MISPRINT, Classification.TRANSLATOR_MISPRINT)


CONFIRMING_CONVENTIONS = (Convention.ROUNDED, Convention.CARRIED_FORWARD)


def _off_by_one(printed: str, computed: str) -> bool:
    if not (printed.isdigit() and computed.isdigit()) or len(printed) != len(computed):
        return False
    return abs(int(printed) - int(computed)) == 1


def classify(printed: str, rendering: Rendering, *, translator: bool = False) -> tuple[str, str]:
    """
    (classification, convention) for one printed value.

    Spacing never matters. A rounded rendering that matches is still a
    confirmation, as is one carried forward from another printed value; a
    match only under the difference of truncations, or a last-place
    difference of one unit, is a convention ambiguity.
    """
    p = digit_string(printed)
    if p == digit_string(rendering.exact):
        return Classification.CONFIRMED, Convention.EXACT
    for convention, text in rendering.alternatives:
        if p == digit_string(text):
            if convention in CONFIRMING_CONVENTIONS:
                return Classification.CONFIRMED, convention
            return Classification.CONVENTION_AMBIGUITY, convention
    candidates = ((Convention.EXACT, rendering.exact), *rendering.alternatives)
    for convention, text in candidates:
        if _off_by_one(p, digit_string(text)):
            return Classification.CONVENTION_AMBIGUITY, convention
    if translator:
        return Classification.TRANSLATOR_MISPRINT, Convention.NONE
    return Classification.PAPER_MISPRINT, Convention.NONE


class AuditContext:
    """Every computed artifact the producers read, each built once on demand."""

    def __init__(self, corpus: Corpus):
        self.corpus = corpus

    @functools.cached_property
    def chain(self) -> Chain:
        return generate_chain(AUDIT_CHAIN_DEPTH)

    @functools.cached_property
    def examen(self) -> dict[str, ExamenRow]:
        return {row.label: row for row in examen_rows(self.chain)}

    @functools.cached_property
    def reference(self) -> ExamenRow:
        return reference_row(EXAMEN_SCALE)

    @functools.cached_property
    def reduced(self) -> dict[str, ReducedFormEntry]:
        return {entry.label: entry for entry in reduced_forms_table(self.chain)}

    @functools.cached_property
    def construction(self) -> ConstructionReport:
        return kochanski_construction(CONSTRUCTION_SCALE)

    @functools.cached_property
    def bisection(self) -> BisectionReport:
        return bisection_construction(BISECTION_SCALE)

    @functools.cached_property
    def curious(self) -> CuriousRatioReport:
        return curious_ratio()

    @functools.cached_property
    def replay(self) -> PrintedReplay | None:
        kl = self.printed_row("construct.KL", CONSTRUCTION_SCALE, attach_integer=False)
        return replay_from_printed(kl) if kl is not None else None

    def printed(self, entry_id: str) -> str | None:
        entry = self.corpus.get(entry_id)
        return entry.printed if entry else None

    def printed_row(self, entry_id: str, scale: int, *, attach_integer: bool = True) -> FixedDecimal | None:
        """A printed digit row read back at its scale; None when absent or misaligned."""
        printed = self.printed(entry_id)
        if printed is None:
            return None
        try:
            return parse_grouped(printed, scale, attach_integer=attach_integer)
        except ParseError as exc:
            logger.warning("%s does not read as a row of %s digits: %s", entry_id, scale, exc)
            return None


Producer = Callable[[AuditContext, re.Match], Rendering]
_PRODUCERS: list[tuple[re.Pattern, Producer]] = []


def producer(pattern: str) -> Callable[[Producer], Producer]:
    def register(fn: Producer) -> Producer:
        _PRODUCERS.append((re.compile(pattern + r"$"), fn))
        return fn

    return register


def _ratio_text(diameter: int | Fraction, periphery: int | Fraction) -> str:
    return f"{mixed_form(Fraction(diameter))} ad {mixed_form(Fraction(periphery))}"


@producer(r"table1\.originator\.(?P<label>\w+)")
def _table1_originator(ctx: AuditContext, m: re.Match) -> Rendering:
    return Rendering(exact=str(dict(ctx.chain.originators())[m["label"]]))


@producer(r"table1\.mark\.(?P<label>\w+)")
def _table1_mark(ctx: AuditContext, m: re.Match) -> Rendering:
    return Rendering(exact=ctx.chain.bound(m["label"]).mark)


@producer(r"table1\.(?P<label>[A-Z][a-z]?)")
def _table1_pair(ctx: AuditContext, m: re.Match) -> Rendering:
    periphery, diameter = ctx.chain.bound(m["label"]).raw
    return Rendering(exact=_ratio_text(diameter, periphery))


@producer(r"reduced\.mark\.(?P<label>\w+)")
def _reduced_mark(ctx: AuditContext, m: re.Match) -> Rendering:
    entry = ctx.reduced[m["label"]]
    return Rendering(
        exact=BOUND_MARKS[BoundKind(entry.kind)],
        note=f"{entry.label} is {entry.source_label} divided by {entry.divisor}",
    )


@producer(r"reduced\.(?P<label>\w+)\.source")
def _reduced_source(ctx: AuditContext, m: re.Match) -> Rendering:
    return Rendering(exact=ctx.reduced[m["label"]].source_label)


@producer(r"reduced\.(?P<label>\w+)")
def _reduced_pair(ctx: AuditContext, m: re.Match) -> Rendering:
    return Rendering(exact=ctx.reduced[m["label"]].render())


@producer(r"examen\.diam")
def _examen_diameter(ctx: AuditContext, m: re.Match) -> Rendering:
    return Rendering(exact=format_grouped(FixedDecimal(10**EXAMEN_SCALE, EXAMEN_SCALE)))


@producer(r"examen\.pi")
def _examen_reference(ctx: AuditContext, m: re.Match) -> Rendering:
    return Rendering(exact=ctx.reference.periphery_text)


@producer(r"examen\.(?P<label>\w+)\.periphery")
def _examen_periphery(ctx: AuditContext, m: re.Match) -> Rendering:
    return Rendering(exact=ctx.examen[m["label"]].periphery_text)


@producer(r"examen\.(?P<label>\w+)\.deviation")
def _examen_deviation(ctx: AuditContext, m: re.Match) -> Rendering:
    row = ctx.examen[m["label"]]
    note = f"{row.kind_label} at {row.scale} digits"
    printed = ctx.printed_row(f"examen.{row.label}.deviation", row.scale)
    if printed is not None and printed != row.deviation_digits:
        units = (printed - row.deviation_digits).mantissa
        note += f"; printed row is {units:+} units of 10**-{row.scale} off"
    return Rendering(
        exact=row.deviation_text,
        alternatives=((Convention.TRUNCATED_DIFFERENCE, row.truncated_difference_text),),
        note=note,
    )


def _examined_rows(ctx: AuditContext) -> list[ExamenRow]:
    return [row for row in ctx.examen.values() if row.kind != RowKind.REFERENCE]


@producer(r"examen\.claim\.twice")
def _claim_twice(ctx: AuditContext, m: re.Match) -> Rendering:
    """Most times over that a row's agreement with pi outruns the row it refines."""
    best = 0
    for kind in (RowKind.DEFECT, RowKind.EXCESS):
        column = [row for row in _examined_rows(ctx) if row.kind == kind]
        for coarse, fine in zip(column, column[1:]):
            best = max(best, fine.agreeing_digits // max(coarse.agreeing_digits, 1))
    agreement = ", ".join(f"{row.label} {row.agreeing_digits}" for row in _examined_rows(ctx))
    return Rendering(exact=str(best), note=f"digits agreeing with pi: {agreement}")


@producer(r"examen\.claim\.(?P<label>\w+)\.exceeds")
def _claim_exceeds(ctx: AuditContext, m: re.Match) -> Rendering:
    target = ctx.examen[m["label"]]
    rows = _examined_rows(ctx)
    earlier = rows[: [row.label for row in rows].index(target.label)]
    beaten = [row.label for row in earlier if row.agreeing_digits < target.agreeing_digits]
    return Rendering(exact=" ".join(beaten), note=f"{target.label} agrees with pi in {target.agreeing_digits} digits")


@producer(r"examen\.claim\.(?P<label>\w+)\.successor")
def _claim_successor(ctx: AuditContext, m: re.Match) -> Rendering:
    """The reduced form in least terms that agrees with pi further than the row."""
    target = ctx.examen[m["label"]]
    better = []
    for entry in ctx.reduced.values():
        shared = agreeing_digits(decimal_expand(entry.value, EXAMEN_SCALE))
        if shared > target.agreeing_digits:
            better.append((entry.diameter, entry.label, shared))
    if not better:
        return Rendering(exact="", note=f"no reduced form beats {target.label}")
    _, label, shared = min(better)
    return Rendering(exact=label, note=f"{label} agrees with pi in {shared} digits, {target.label} in {target.agreeing_digits}")


@producer(r"examen\.(?P<label>\w+)\.defect_fraction")
def _examen_defect_fraction(ctx: AuditContext, m: re.Match) -> Rendering:
    return Rendering(exact=str(defect_numerator(ctx.chain.bound(m["label"]).value)), note="over 100000")


def _curious_excess(digits: int) -> Enclosure:
    return Enclosure.from_rational(curious_value(), digits + 1) - pi_enclosure(digits)


def _curious_excess_places(rounding: str) -> str:
    places = CURIOUS_EXCESS_SHIFT + CURIOUS_EXCESS_PLACES
    units = certified_quantize(_curious_excess, places, rounding).mantissa
    return str(FixedDecimal(units, CURIOUS_EXCESS_PLACES))


@producer(r"curious\.value")
def _curious_value(ctx: AuditContext, m: re.Match) -> Rendering:
    value = ctx.curious.value
    return Rendering(exact=_ratio_text(CURIOUS_MINOR, value * CURIOUS_MINOR))


@producer(r"curious\.agreeing_digits")
def _curious_agreeing(ctx: AuditContext, m: re.Match) -> Rendering:
    return Rendering(exact=str(ctx.curious.agreeing_digits))


@producer(r"curious\.excess")
def _curious_hundredths(ctx: AuditContext, m: re.Match) -> Rendering:
    return Rendering(exact=str(ctx.curious.excess_units), note="hundredths of 10**-7, rounded up")


@producer(r"curious\.excess_e7")
def _curious_excess_e7(ctx: AuditContext, m: re.Match) -> Rendering:
    return Rendering(
        exact=_curious_excess_places(ROUND_DOWN),
        alternatives=((Convention.ROUNDED, _curious_excess_places(ROUND_HALF_UP)),),
    )


@producer(r"curious\.decimal")
def _curious_decimal(ctx: AuditContext, m: re.Match) -> Rendering:
    return Rendering(exact=ctx.curious.decimal)


@producer(r"curious\.denominator")
def _curious_denominator(ctx: AuditContext, m: re.Match) -> Rendering:
    return Rendering(exact=str(CURIOUS_MAJOR))


@producer(r"construct\.label\.KL2_IK2")
def _construct_sum_label(ctx: AuditContext, m: re.Match) -> Rendering:
    return Rendering(exact="IK q + KL q")


@producer(r"construct\.(?P<label>AB|BI|IG|KL|KL2_IK2|IL)")
def _construct_length(ctx: AuditContext, m: re.Match) -> Rendering:
    length = ctx.construction.length(m["label"])
    attach = length.label == "AB"
    alternatives = [(Convention.ROUNDED, format_grouped(length.rounded, attach_integer=attach))]
    note = ""
    if length.label in ("KL2_IK2", "IL") and ctx.replay is not None:
        replayed = ctx.replay.total if length.label == "KL2_IK2" else ctx.replay.root
        carried = format_grouped(replayed, attach_integer=False)
        alternatives.append((Convention.CARRIED_FORWARD, carried))
        note = f"carried forward from the printed KL: {carried}"
    return Rendering(
        exact=format_grouped(length.truncated, attach_integer=attach),
        alternatives=tuple(alternatives),
        note=note,
    )


@producer(r"construct\.Z")
def _construct_defect(ctx: AuditContext, m: re.Match) -> Rendering:
    report = ctx.construction
    alternatives = [(Convention.ROUNDED, format_grouped(report.defect_z_rounded, attach_integer=False))]
    note = ""
    if ctx.replay is not None:
        carried = format_grouped(ctx.replay.defect, attach_integer=False)
        alternatives.append((Convention.CARRIED_FORWARD, carried))
        note = f"carried forward: pi to {ctx.replay.defect.scale} places minus the printed IL gives {carried}"
    return Rendering(
        exact=format_grouped(report.defect_z_truncated, attach_integer=False),
        alternatives=tuple(alternatives),
        note=note,
    )


@producer(r"construct\.X")
def _construct_reciprocal(ctx: AuditContext, m: re.Match) -> Rendering:
    return Rendering(exact=str(ctx.construction.reciprocal_x))


@producer(r"construct\.year_(?P<end>lower|upper)")
def _construct_year(ctx: AuditContext, m: re.Match) -> Rendering:
    year = ctx.construction.reciprocal_x // 10
    check = year_bound_check(year, reciprocal_x=ctx.construction.reciprocal_x)
    bound = 10 * year if m["end"] == "lower" else 10 * (year + 1)
    return Rendering(exact=str(bound), note=f"year {year} {'passes' if check.passed else 'fails'}")


@producer(r"bisect\.parts")
def _bisect_parts(ctx: AuditContext, m: re.Match) -> Rendering:
    return Rendering(exact=str(ctx.bisection.parts))


@producer(r"bisect\.periphery_parts")
def _bisect_periphery_parts(ctx: AuditContext, m: re.Match) -> Rendering:
    return Rendering(exact=mixed_form(ctx.bisection.periphery_parts))


@producer(r"bisect\.ratio")
def _bisect_ratio(ctx: AuditContext, m: re.Match) -> Rendering:
    ratio = ctx.bisection.ratio
    return Rendering(exact=_ratio_text(ratio.denominator, ratio.numerator))


@producer(r"bisect\.triple_parts")
def _bisect_triple(ctx: AuditContext, m: re.Match) -> Rendering:
    report = ctx.bisection
    return Rendering(exact=str(report.decomposition[0][1] * report.parts))


@producer(r"bisect\.four_parts")
def _bisect_four_parts(ctx: AuditContext, m: re.Match) -> Rendering:
    report = ctx.bisection
    return Rendering(exact=f"{report.eighth * report.parts}/{report.parts}")


@producer(r"bisect\.eighth")
def _bisect_eighth(ctx: AuditContext, m: re.Match) -> Rendering:
    eighth = ctx.bisection.eighth
    return Rendering(exact=f"{eighth.numerator}/{eighth.denominator}")


@producer(r"bisect\.P")
def _bisect_periphery(ctx: AuditContext, m: re.Match) -> Rendering:
    return Rendering(exact=decimal_expand(ctx.bisection.ratio, BISECTION_ALIGNMENT).digits)


@producer(r"bisect\.Q")
def _bisect_excess(ctx: AuditContext, m: re.Match) -> Rendering:
    report = ctx.bisection
    return Rendering(
        exact=str(report.q_truncated.mantissa),
        alternatives=((Convention.ROUNDED, str(report.q_rounded.mantissa)),),
        note=f"units of 10**-{BISECTION_ALIGNMENT}",
    )


@producer(r"bisect\.decimal")
def _bisect_decimal(ctx: AuditContext, m: re.Match) -> Rendering:
    return Rendering(exact=str(decimal_expand(ctx.bisection.ratio, 10)))


def render_entry(ctx: AuditContext, entry: CorpusEntry) -> Rendering:
    key = entry.id.removeprefix(TRANSLATOR_PREFIX)
    for pattern, fn in _PRODUCERS:
        m = pattern.match(key)
        if m is None:
            continue
        try:
            return fn(ctx, m)
        except KeyError as exc:
            raise CorpusError(f"{entry.id} names unknown item {exc}", line_no=entry.line_no, field="id") from exc
    raise CorpusError(f"nothing computes {entry.id}", line_no=entry.line_no, field="id")


def audit_entry(ctx: AuditContext, entry: CorpusEntry) -> AuditFinding:
    rendering = render_entry(ctx, entry)
    classification, convention = classify(
        entry.printed, rendering, translator=entry.id.startswith(TRANSLATOR_PREFIX)
    )
    return AuditFinding(
        location=entry.id,
        printed=entry.printed,
        computed=rendering.exact,
        classification=classification,
        convention=convention,
        note=rendering.note,
        provenance=entry.note,
    )


def audit_corpus(*, corpus: Corpus | None = None) -> list[AuditFinding]:
    """One finding per corpus entry, in corpus order."""
    corpus = corpus if corpus is not None else load_corpus()
    ctx = AuditContext(corpus)
    findings = [audit_entry(ctx, entry) for entry in corpus.entries]
    summary = summarize_findings(findings)
    logger.info("audit of %s entries (corpus %s): %s", len(findings), corpus.version, summary)
    return findings


@dataclass(frozen=True)
class AuditSummary:
    total: int
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def confirmed_share(self) -> Fraction:
        if not self.total:
            return Fraction(0)
        return Fraction(self.counts.get(Classification.CONFIRMED, 0), self.total)

    @property
    def misprints(self) -> int:
        return self.counts.get(Classification.PAPER_MISPRINT, 0) + self.counts.get(
            Classification.TRANSLATOR_MISPRINT, 0
        )


def summarize_findings(findings: list[AuditFinding]) -> AuditSummary:
    counts = {choice.value: 0 for choice in Classification}
    for finding in findings:
        counts[finding.classification] += 1
    return AuditSummary(total=len(findings), counts=counts)
