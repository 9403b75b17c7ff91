from __future__ import annotations

import logging

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError, CommandParser

from constructions.services import PRINTED_SCALE
from examen.corpus import load_corpus
from examen.services import EXAMEN_SCALE
from reports.forms import ChainForm, CfForm, ConstructForm, ExamenForm, PiForm
from reports.services import (
    ReportEnvelope,
    ReportFormat,
    audit_envelope,
    bisection_envelope,
    cf_envelope,
    chain_envelope,
    emit,
    examen_envelope,
    kochanski_envelope,
    pi_envelope,
)

logger = logging.getLogger(__name__)

EXIT_USAGE = 1
EXIT_MISPRINTS = 2
DEFAULT_DEPTH = 4
BISECTION_DEFAULT_SCALE = 9


class Command(BaseCommand):
    help = "Compute, reproduce and audit the 1685 cyclometric tables and constructions."
    requires_system_checks = []

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(
            dest="subcommand",
            required=True,
            parser_class=CommandParser,
            metavar="{pi,chain,examen,audit,construct,cf}",
        )

        pi = subparsers.add_parser("pi", help="Certified decimal digits of pi.")
        pi.add_argument(
            "--digits",
            type=int,
            default=settings.CYCLOMETRIA_DEFAULT_DIGITS,
            help="Decimals after the point (default: %(default)s).",
        )
        pi.add_argument("--compare", default="", help="Compare a ratio P/Q with pi.")
        self._add_output_arguments(pi)

        chain = subparsers.add_parser("chain", help="Table 1: the bound chain, reduced forms and curious ratio.")
        chain.add_argument("--depth", type=int, default=DEFAULT_DEPTH, help="Refinement steps (default: %(default)s).")
        self._add_output_arguments(chain)

        examen = subparsers.add_parser("examen", help="Table 2: each bound against pi.")
        examen.add_argument("--depth", type=int, default=DEFAULT_DEPTH, help="Refinement steps (default: %(default)s).")
        examen.add_argument("--scale", type=int, default=EXAMEN_SCALE, help="Table digits (default: %(default)s).")
        self._add_output_arguments(examen)

        audit = subparsers.add_parser("audit", help="Check every printed number in the corpus.")
        audit.add_argument(
            "--strict",
            action="store_true",
            help=f"Exit {EXIT_MISPRINTS} when any misprint is found (default: off).",
        )
        self._add_output_arguments(audit, corpus=True)

        construct = subparsers.add_parser("construct", help="The compass construction or the 32-part bisection.")
        construct.add_argument("which", choices=["kochanski", "bisection"])
        construct.add_argument(
            "--scale",
            type=int,
            default=None,
            help=f"Decimals (default: {PRINTED_SCALE} for kochanski, {BISECTION_DEFAULT_SCALE} for bisection).",
        )
        construct.add_argument("--year", type=int, default=None, help="Check the year bound for this year.")
        self._add_output_arguments(construct, corpus=True)

        cf = subparsers.add_parser("cf", help="Continued fraction of pi and the class of each chain bound.")
        cf.add_argument("--depth", type=int, default=DEFAULT_DEPTH, help="Refinement steps (default: %(default)s).")
        self._add_output_arguments(cf)

    def _add_output_arguments(self, parser, *, corpus: bool = False):
        parser.add_argument(
            "--format",
            choices=ReportFormat.choices,
            default=ReportFormat.TEXT,
            help="Output layout (default: %(default)s).",
        )
        parser.add_argument(
            "--deterministic",
            action="store_true",
            help="Omit the timestamp so repeated runs are byte-identical (default: off).",
        )
        if not corpus:
            return
        parser.add_argument(
            "--corpus",
            default=None,
            help=f"Audit corpus path (default: {settings.CYCLOMETRIA_CORPUS}).",
        )

    def handle(self, *args, **options):
        subcommand = options["subcommand"]
        handler = getattr(self, f"_handle_{subcommand}")
        try:
            envelope = handler(options)
            output = emit(envelope, options["format"])
        except ValueError as exc:
            raise CommandError(str(exc), returncode=EXIT_USAGE) from exc

        logger.info("cyclometria %s done: %s records", envelope.command, len(envelope.records))
        self.stdout.write(output, ending="")

        if subcommand == "audit" and options["strict"] and envelope.body["misprints"]:
            raise CommandError(
                f"{envelope.body['misprints']} misprint(s) in corpus {envelope.corpus_version}.",
                returncode=EXIT_MISPRINTS,
            )

    def _validated(self, form_class, data: dict):
        form = form_class(data=data)
        if not form.is_valid():
            raise CommandError(form.errors_text(), returncode=EXIT_USAGE)
        return form.cleaned_data

    def _corpus(self, options):
        path = options.get("corpus")
        return load_corpus(path) if path else load_corpus()

    def _handle_pi(self, options) -> ReportEnvelope:
        data = self._validated(PiForm, {"digits": options["digits"], "compare": options["compare"]})
        return pi_envelope(digits=data["digits"], compare=data["compare"], deterministic=options["deterministic"])

    def _handle_chain(self, options) -> ReportEnvelope:
        data = self._validated(ChainForm, {"depth": options["depth"]})
        return chain_envelope(depth=data["depth"], deterministic=options["deterministic"])

    def _handle_examen(self, options) -> ReportEnvelope:
        data = self._validated(ExamenForm, {"depth": options["depth"], "scale": options["scale"]})
        return examen_envelope(depth=data["depth"], scale=data["scale"], deterministic=options["deterministic"])

    def _handle_audit(self, options) -> ReportEnvelope:
        return audit_envelope(corpus=self._corpus(options), deterministic=options["deterministic"])

    def _handle_construct(self, options) -> ReportEnvelope:
        which = options["which"]
        scale = options["scale"]
        if scale is None:
            scale = PRINTED_SCALE if which == "kochanski" else BISECTION_DEFAULT_SCALE
        data = self._validated(ConstructForm, {"which": which, "scale": scale, "year": options["year"]})
        if which == "kochanski":
            return kochanski_envelope(
                scale=data["scale"],
                year=data["year"],
                corpus=self._corpus(options),
                deterministic=options["deterministic"],
            )
        return bisection_envelope(scale=data["scale"], deterministic=options["deterministic"])

    def _handle_cf(self, options) -> ReportEnvelope:
        data = self._validated(CfForm, {"depth": options["depth"]})
        return cf_envelope(depth=data["depth"], deterministic=options["deterministic"])
