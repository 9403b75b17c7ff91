from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any

from django.core.serializers.json import DjangoJSONEncoder
from django.template.loader import render_to_string
from django.utils import timezone

from arithmetic.services import ParseError, format_grouped, parse_grouped
from constructions.services import (
    PRINTED_SCALE,
    bisection_construction,
    kochanski_construction,
    replay_from_printed,
    year_bound_check,
)
from convergents.services import ContinuedFractionTooShort, classify_bound, pi_continued_fraction
from examen.audit import audit_corpus, summarize_findings
from examen.corpus import Corpus, load_corpus
from examen.services import EXAMEN_SCALE, examen_rows, render_examen
from oracle.services import cmp_pi, pi_digits, pi_enclosure
from synthesis.services import curious_ratio, generate_chain, mixed_form, reduced_forms_table

SCHEMA_VERSION = 1


class ReportFormat:
    TEXT = "text"
    RECORDS = "records"
    TABLE = "table"

    choices = (TEXT, RECORDS, TABLE)


class ReportFormatError(ValueError):
    pass


@dataclass(frozen=True)
class ReportEnvelope:
    """
    One command's result. `body` holds JSON-native values only so that
    from_json(to_json(e)) == e.
    """

    command: str
    parameters: dict[str, Any]
    body: dict[str, Any]
    produced_at: str | None = None
    corpus_version: str = ""
    schema_version: int = SCHEMA_VERSION
    records: list[dict[str, Any]] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), cls=DjangoJSONEncoder, sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> ReportEnvelope:
        data = json.loads(text)
        return cls(**data)


def _fraction_text(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _stamp(deterministic: bool) -> str | None:
    return None if deterministic else timezone.now().isoformat()


def pi_envelope(*, digits: int, compare: Fraction | None = None, deterministic: bool = False) -> ReportEnvelope:
    # N decimals after the point: N + 1 significant digits
    significant = pi_digits(digits + 1)
    value = f"{significant[0]}.{significant[1:]}"
    enclosure = pi_enclosure(digits)
    body: dict[str, Any] = {
        "digits": digits,
        "value": value,
        "enclosure": {"lo": str(enclosure.lo), "hi": str(enclosure.hi)},
        "comparison": None,
    }
    records = [{"digits": digits, "value": value}]
    if compare is not None:
        result = cmp_pi(compare)
        body["comparison"] = {"ratio": _fraction_text(compare), "result": str(result)}
        records.append({"ratio": _fraction_text(compare), "comparison": str(result)})
    return ReportEnvelope(
        command="pi",
        parameters={"digits": digits, "compare": _fraction_text(compare) if compare is not None else None},
        body=body,
        records=records,
        produced_at=_stamp(deterministic),
    )


def chain_envelope(*, depth: int, deterministic: bool = False) -> ReportEnvelope:
    chain = generate_chain(depth)
    records: list[dict[str, Any]] = []
    for seed in chain.seeds:
        records.append(_bound_record(seed.label, seed.raw, str(seed.kind), seed.mark))
    for step in chain.steps:
        records.append(_originator_record(step.originator_label_minor, step.originator_minor))
        records.append(_originator_record(step.originator_label_major, step.originator_major))
        for bound in step.bounds():
            records.append(_bound_record(bound.label, bound.raw, str(bound.kind), bound.mark))

    reduced = [
        {
            "label": entry.label,
            "source": entry.source_label,
            "divisor": entry.divisor,
            "text": entry.render(),
            "kind": str(entry.kind),
        }
        for entry in reduced_forms_table(chain)
    ]
    curious = curious_ratio()
    return ReportEnvelope(
        command="chain",
        parameters={"depth": depth},
        body={
            "depth": depth,
            "reduced": reduced,
            "curious": {
                "value": _fraction_text(curious.value),
                "decimal": curious.decimal,
                "agreeing_digits": curious.agreeing_digits,
                "excess_units": curious.excess_units,
            },
        },
        records=records,
        produced_at=_stamp(deterministic),
    )


def _bound_record(label: str, raw: tuple[int, int], kind: str, mark: str) -> dict[str, Any]:
    periphery, diameter = raw
    return {
        "label": label,
        "role": kind,
        "diameter": diameter,
        "periphery": periphery,
        "mark": mark,
        "originator": None,
    }


def _originator_record(label: str, n: int) -> dict[str, Any]:
    return {"label": label, "role": "ORIGINATOR", "diameter": None, "periphery": None, "mark": "", "originator": n}


def examen_envelope(*, depth: int, scale: int = EXAMEN_SCALE, deterministic: bool = False) -> ReportEnvelope:
    chain = generate_chain(depth)
    records = [
        {
            "label": row.label,
            "kind": str(row.kind),
            "scale": row.scale,
            "periphery": row.periphery_text,
            "deviation": row.deviation_text,
            "truncated_difference": row.truncated_difference_text,
            "agreeing_digits": row.agreeing_digits,
        }
        for row in examen_rows(chain)
    ]
    return ReportEnvelope(
        command="examen",
        parameters={"depth": depth, "scale": scale},
        body={"table": render_examen(chain, scale)},
        records=records,
        produced_at=_stamp(deterministic),
    )


def audit_envelope(*, corpus: Corpus | None = None, deterministic: bool = False) -> ReportEnvelope:
    corpus = corpus if corpus is not None else load_corpus()
    findings = audit_corpus(corpus=corpus)
    summary = summarize_findings(findings)
    records = [
        {
            "location": f.location,
            "printed": f.printed,
            "computed": f.computed,
            "classification": str(f.classification),
            "convention": str(f.convention),
            "note": f.note,
        }
        for f in findings
    ]
    return ReportEnvelope(
        command="audit",
        parameters={"corpus": corpus.source},
        body={
            "total": summary.total,
            "counts": dict(summary.counts),
            "misprints": summary.misprints,
            "confirmed_share": f"{float(summary.confirmed_share):.3f}",
        },
        records=records,
        corpus_version=corpus.version,
        produced_at=_stamp(deterministic),
    )


def kochanski_envelope(
    *,
    scale: int = PRINTED_SCALE,
    year: int | None = None,
    corpus: Corpus | None = None,
    deterministic: bool = False,
) -> ReportEnvelope:
    report = kochanski_construction(scale)
    records = [
        {
            "label": item.label,
            "scale": item.scale,
            "truncated": format_grouped(item.truncated, attach_integer=item.label == "AB"),
            "rounded": format_grouped(item.rounded, attach_integer=item.label == "AB"),
            "squared": item.squared,
        }
        for item in report.named_lengths
    ]
    body: dict[str, Any] = {
        "scale": scale,
        "closed_form": report.closed_form,
        "il_squared": str(report.il_squared),
        "il": str(report.il.lo),
        "defect_z_truncated": format_grouped(report.defect_z_truncated, attach_integer=False),
        "defect_z_rounded": format_grouped(report.defect_z_rounded, attach_integer=False),
        "reciprocal_x": report.reciprocal_x,
        "points": [
            {
                "label": p.label,
                "x": str(p.x),
                "y": str(p.y),
                "x_decimal": str(p.x.quantize(scale)),
                "y_decimal": str(p.y.quantize(scale)),
            }
            for p in report.points
        ],
        "year": None,
        "replay": None,
    }
    if year is not None:
        check = year_bound_check(year, reciprocal_x=report.reciprocal_x)
        body["year"] = {
            "year": year,
            "passed": check.passed,
            "lower": _fraction_text(check.lower),
            "upper": _fraction_text(check.upper),
        }

    corpus = corpus if corpus is not None else load_corpus()
    printed_kl = corpus.get("construct.KL")
    if printed_kl is not None:
        try:
            kl = parse_grouped(printed_kl.printed, PRINTED_SCALE, attach_integer=False)
        except ParseError as exc:
            raise ReportFormatError(f"Printed KL {printed_kl.printed!r} in {corpus.source}: {exc}") from exc
        replay = replay_from_printed(kl)
        body["replay"] = {
            "kl": printed_kl.printed,
            "sum": format_grouped(replay.total, attach_integer=False),
            "root": format_grouped(replay.root, attach_integer=False),
            "defect": format_grouped(replay.defect, attach_integer=False),
        }
    return ReportEnvelope(
        command="construct kochanski",
        parameters={"scale": scale, "year": year},
        body=body,
        records=records,
        corpus_version=corpus.version,
        produced_at=_stamp(deterministic),
    )


def bisection_envelope(*, scale: int = 9, deterministic: bool = False) -> ReportEnvelope:
    report = bisection_construction(scale)
    records = [
        {"part": name, "value": _fraction_text(term), "in_parts": mixed_form(term * report.parts)}
        for name, term in report.decomposition
    ]
    return ReportEnvelope(
        command="construct bisection",
        parameters={"scale": scale},
        body={
            "scale": scale,
            "ratio": _fraction_text(report.ratio),
            "parts": report.parts,
            "periphery_parts": mixed_form(report.periphery_parts),
            "periphery": str(report.periphery),
            "q_truncated": report.q_truncated.mantissa,
            "q_rounded": report.q_rounded.mantissa,
            "q_below_z": report.comparison_to_z,
        },
        records=records,
        produced_at=_stamp(deterministic),
    )


def cf_envelope(*, depth: int, deterministic: bool = False) -> ReportEnvelope:
    """
    Continued fraction of pi, grown until every bound of the depth-`depth`
    chain can be classified.
    """
    chain = generate_chain(depth)
    terms = 8
    while True:
        cf = pi_continued_fraction(terms)
        try:
            classes = [(bound, classify_bound(bound.value, cf)) for bound in chain.rows()]
            break
        except ContinuedFractionTooShort:
            terms *= 2
    records = [
        {"label": bound.label, "value": _fraction_text(bound.value), "class": str(bound_class)}
        for bound, bound_class in classes
    ]
    return ReportEnvelope(
        command="cf",
        parameters={"depth": depth},
        body={
            "terms": list(cf.terms),
            "convergents": [_fraction_text(c) for c in cf.convergents],
        },
        records=records,
        produced_at=_stamp(deterministic),
    )


_TEMPLATES = {
    "pi": "reports/pi.txt",
    "chain": "reports/chain.txt",
    "examen": "reports/examen.txt",
    "audit": "reports/audit.txt",
    "construct kochanski": "reports/kochanski.txt",
    "construct bisection": "reports/bisection.txt",
    "cf": "reports/cf.txt",
}


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "yes" if value else "no"
    return str(value)


def _render_table(records: list[dict[str, Any]]) -> str:
    if not records:
        return ""
    columns = list(records[0])
    rows = [[_cell(record.get(column)) for column in columns] for record in records]
    widths = [max(len(column), *(len(row[i]) for row in rows)) for i, column in enumerate(columns)]
    lines = ["  ".join(column.ljust(width) for column, width in zip(columns, widths)).rstrip()]
    lines.append("  ".join("-" * width for width in widths))
    for row in rows:
        lines.append("  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def emit(envelope: ReportEnvelope, fmt: str = ReportFormat.TEXT) -> str:
    if fmt == ReportFormat.TEXT:
        template = _TEMPLATES.get(envelope.command)
        if template is None:
            raise ReportFormatError(f"No text layout for {envelope.command!r}.")
        return render_to_string(template, {"envelope": envelope, "body": envelope.body, "records": envelope.records})
    if fmt == ReportFormat.RECORDS:
        return "".join(
            json.dumps(record, cls=DjangoJSONEncoder, sort_keys=True, ensure_ascii=False) + "\n"
            for record in envelope.records
        )
    if fmt == ReportFormat.TABLE:
        return _render_table(envelope.records)
    raise ReportFormatError(f"Unsupported format {fmt!r}; choose one of {', '.join(ReportFormat.choices)}.")
