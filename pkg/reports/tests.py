from __future__ import annotations

import io
import json
import tempfile
from pathlib import Path
from unittest.mock import patch

from django.test import SimpleTestCase

from arithmetic import services as arithmetic_services
from constructions import services as construction_services
from convergents import services as convergent_services
from examen import audit as audit_services
from examen import services as examen_services
from examen.corpus import load_corpus
from oracle import services as oracle_services
from synthesis import services as synthesis_services

from .cli import run
from .services import (
    ReportEnvelope,
    ReportFormatError,
    audit_envelope,
    chain_envelope,
    emit,
    kochanski_envelope,
    pi_envelope,
)


def _run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


class PiCommandTests(SimpleTestCase):
    def test_twenty_five_decimals(self):
        code, out, err = _run("pi", "--digits", "25", "--deterministic")
        self.assertEqual(code, 0, err)
        self.assertEqual(out.splitlines()[0], "3.1415926535897932384626433")

    def test_compare(self):
        code, out, _ = _run("pi", "--digits", "10", "--compare", "355/113", "--deterministic")
        self.assertEqual(code, 0)
        self.assertIn("355/113 > pi", out)
        _, out, _ = _run("pi", "--digits", "10", "--compare", "333/106", "--deterministic")
        self.assertIn("333/106 < pi", out)

    def test_timestamp_only_without_deterministic(self):
        _, out, _ = _run("pi", "--digits", "5")
        self.assertIn("# produced", out)
        _, out, _ = _run("pi", "--digits", "5", "--deterministic")
        self.assertNotIn("# produced", out)


class ChainCommandTests(SimpleTestCase):
    def test_table_one_ends_with_f_rows(self):
        code, out, err = _run("chain", "--depth", "4", "--format", "text", "--deterministic")
        self.assertEqual(code, 0, err)
        lines = out.splitlines()
        self.assertEqual(lines[0], "Rationes Arithmeticae")
        table_one = lines[: lines.index("Harum quaedam minoribus terminis")]
        table_one = [line for line in table_one if line]
        self.assertTrue(table_one[-2].startswith("F   43521624105025 ad 136727214560643"))
        self.assertTrue(table_one[-1].startswith("Ff  43524569930401 ad 136736469144003"))
        self.assertIn("X   5548", lines)
        self.assertIn("cc  22 3/5 ad 71", lines)

    def test_records(self):
        code, out, _ = _run("chain", "--depth", "2", "--format", "records")
        self.assertEqual(code, 0)
        records = [json.loads(line) for line in out.splitlines()]
        self.assertEqual(len(records), 4 + 2 * 4)
        self.assertEqual(set(records[0]), {"label", "role", "diameter", "periphery", "mark", "originator"})
        self.assertEqual(records[4], {"label": "Z", "role": "ORIGINATOR", "diameter": None, "periphery": None, "mark": "", "originator": 15})

    def test_table_format(self):
        code, out, _ = _run("chain", "--depth", "1", "--format", "table")
        self.assertEqual(code, 0)
        header = out.splitlines()[0].split()
        self.assertEqual(header, ["label", "role", "diameter", "periphery", "mark", "originator"])


class ExamenCommandTests(SimpleTestCase):
    def test_table(self):
        code, out, err = _run("examen", "--depth", "4", "--deterministic")
        self.assertEqual(code, 0, err)
        self.assertIn("314159 26535 81077 77120", out)
        self.assertIn("8715 46725", out)

    def test_deterministic_output(self):
        first = _run("examen", "--depth", "3", "--deterministic")
        second = _run("examen", "--depth", "3", "--deterministic")
        self.assertEqual(first, second)

    def test_narrow_scale_is_usage_error(self):
        code, out, err = _run("examen", "--scale", "10")
        self.assertEqual(code, 1)
        self.assertEqual(out, "")
        self.assertIn("--scale", err)


class AuditCommandTests(SimpleTestCase):
    def test_records_match_corpus(self):
        code, out, _ = _run("audit", "--format", "records", "--deterministic")
        self.assertEqual(code, 0)
        self.assertEqual(len(out.splitlines()), len(load_corpus()))
        first = json.loads(out.splitlines()[0])
        self.assertEqual(
            set(first), {"location", "printed", "computed", "classification", "convention", "note"}
        )

    def test_strict_reports_misprints(self):
        code, out, err = _run("audit", "--strict", "--deterministic")
        self.assertEqual(code, 2)
        self.assertIn("table1.originator.X", out)
        self.assertIn("misprint", err)

    def test_strict_passes_on_clean_corpus(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "corpus.txt"
            path.write_text("meta.version | 1\nconstruct.X | 16859\ntable1.originator.Y | 4697\n", encoding="utf-8")
            code, out, _ = _run("audit", "--strict", "--corpus", str(path), "--deterministic")
        self.assertEqual(code, 0)
        self.assertIn("Audit of corpus version 1", out)

    def test_misaligned_printed_kl(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "corpus.txt"
            path.write_text("meta.version | 1\nconstruct.KL | 2 4226497308 10373\n", encoding="utf-8")
            code, out, err = _run("construct", "kochanski", "--corpus", str(path))
        self.assertEqual(code, 1)
        self.assertEqual(out, "")
        self.assertIn("Printed KL", err)

    def test_missing_corpus(self):
        code, _, err = _run("audit", "--corpus", "/nonexistent/corpus.txt")
        self.assertEqual(code, 1)
        self.assertIn("field path", err)


class ConstructCommandTests(SimpleTestCase):
    def test_kochanski_year(self):
        code, out, err = _run("construct", "kochanski", "--year", "1685", "--deterministic")
        self.assertEqual(code, 0, err)
        self.assertIn("X = 16859", out)
        self.assertIn("PASS", out)
        self.assertIn("3 14153 33387 05094", out)
        self.assertIn("root 3 14153 33387 05093", out)
        self.assertIn("Z 5 93148 84700", out)

    def test_kochanski_wrong_year(self):
        _, out, _ = _run("construct", "kochanski", "--year", "1686", "--deterministic")
        self.assertIn("FAIL", out)

    def test_bisection(self):
        code, out, _ = _run("construct", "bisection", "--deterministic")
        self.assertEqual(code, 0)
        self.assertIn("Ratio 3217/1024", out)
        self.assertIn("Q = 890 (rounded 891)", out)
        self.assertIn("periphery 100 17/32 parts", out)

    def test_bisection_has_no_year(self):
        code, _, err = _run("construct", "bisection", "--year", "1685")
        self.assertEqual(code, 1)
        self.assertIn("--year", err)

    def test_short_scale(self):
        code, _, _ = _run("construct", "kochanski", "--scale", "10")
        self.assertEqual(code, 1)


class CfCommandTests(SimpleTestCase):
    def test_classes(self):
        code, out, _ = _run("cf", "--depth", "2", "--format", "records")
        self.assertEqual(code, 0)
        classes = {r["label"]: r["class"] for r in map(json.loads, out.splitlines())}
        self.assertEqual(classes["Bb"], "CONVERGENT")
        self.assertEqual(classes["B"], "SEMICONVERGENT")
        self.assertEqual(classes["D"], "CONVERGENT")

    def test_text(self):
        _, out, _ = _run("cf", "--depth", "1", "--deterministic")
        self.assertTrue(out.startswith("pi = [3, 7, 15, 1, 292"))


class UsageTests(SimpleTestCase):
    def test_usage_errors(self):
        cases = [
            [],
            ["bogus"],
            ["pi", "--no-such-flag"],
            ["pi", "--digits", "0"],
            ["pi", "--compare", "1/0"],
            ["pi", "--format", "xml"],
            ["chain", "--depth", "-1"],
            ["construct", "hexagon"],
        ]
        for argv in cases:
            with self.subTest(argv=argv):
                code, out, err = _run(*argv)
                self.assertEqual(code, 1)
                self.assertEqual(out, "")
                self.assertTrue(err)

    def test_help(self):
        with patch("sys.stdout", new_callable=io.StringIO) as stdout:
            code, _, _ = _run("pi", "--help")
        self.assertEqual(code, 0)
        self.assertIn("default: 32", stdout.getvalue())


class CoverageTests(SimpleTestCase):
    """Every library operation is reached from some subcommand."""

    def test_operations_reached(self):
        cases = [
            (["pi", "--digits", "12", "--compare", "22/7"], "reports.services.pi_digits", oracle_services.pi_digits),
            (["pi", "--digits", "12", "--compare", "22/7"], "reports.services.cmp_pi", oracle_services.cmp_pi),
            (["chain", "--depth", "2"], "reports.services.generate_chain", synthesis_services.generate_chain),
            (["chain", "--depth", "3"], "reports.services.reduced_forms_table", synthesis_services.reduced_forms_table),
            (["chain", "--depth", "1"], "reports.services.curious_ratio", synthesis_services.curious_ratio),
            (["examen", "--depth", "2"], "reports.services.examen_rows", examen_services.examen_rows),
            (["examen", "--depth", "2"], "reports.services.render_examen", examen_services.render_examen),
            (["audit"], "reports.services.audit_corpus", audit_services.audit_corpus),
            (["construct", "kochanski"], "reports.services.kochanski_construction", construction_services.kochanski_construction),
            (["construct", "kochanski", "--year", "1685"], "reports.services.year_bound_check", construction_services.year_bound_check),
            (["construct", "kochanski"], "reports.services.replay_from_printed", construction_services.replay_from_printed),
            (["construct", "bisection"], "reports.services.bisection_construction", construction_services.bisection_construction),
            (["cf", "--depth", "1"], "reports.services.pi_continued_fraction", convergent_services.pi_continued_fraction),
            (["cf", "--depth", "1"], "reports.services.classify_bound", convergent_services.classify_bound),
            (["construct", "kochanski"], "constructions.services.cmp_value_pi", oracle_services.cmp_value_pi),
            (["audit"], "examen.audit.parse_grouped", arithmetic_services.parse_grouped),
            (["construct", "kochanski"], "reports.services.parse_grouped", arithmetic_services.parse_grouped),
        ]
        for argv, target, fn in cases:
            with self.subTest(target=target):
                with patch(target, wraps=fn) as spy:
                    code, _, err = _run(*argv, "--deterministic")
                self.assertEqual(code, 0, err)
                self.assertTrue(spy.called)


class EnvelopeTests(SimpleTestCase):
    def test_json_round_trip(self):
        for envelope in [
            pi_envelope(digits=20),
            chain_envelope(depth=2, deterministic=True),
            audit_envelope(deterministic=True),
        ]:
            with self.subTest(command=envelope.command):
                self.assertEqual(ReportEnvelope.from_json(envelope.to_json()), envelope)

    def test_audit_envelope_carries_corpus_version(self):
        envelope = audit_envelope(deterministic=True)
        self.assertEqual(envelope.corpus_version, load_corpus().version)
        self.assertIsNone(envelope.produced_at)
        self.assertEqual(sum(envelope.body["counts"].values()), envelope.body["total"])

    def test_empty_chain_is_header_only(self):
        envelope = ReportEnvelope(command="chain", parameters={}, body={"reduced": []})
        self.assertEqual(emit(envelope, "text").strip(), "Rationes Arithmeticae")
        self.assertEqual(emit(envelope, "records"), "")
        self.assertEqual(emit(envelope, "table"), "")

    def test_unsupported_format(self):
        with self.assertRaises(ReportFormatError):
            emit(pi_envelope(digits=5), "xml")

    def test_construction_exports_coordinates(self):
        envelope = kochanski_envelope(deterministic=True)
        points = {p["label"]: p for p in envelope.body["points"]}
        self.assertEqual((points["L"]["x"], points["L"]["y"]), ("1", "3"))
        self.assertEqual(points["I"]["y"], "1/3*sqrt(3)")
        self.assertEqual(points["I"]["y_decimal"], "0.577350269189625")
        self.assertEqual(ReportEnvelope.from_json(envelope.to_json()), envelope)
