from __future__ import annotations

import tempfile
from fractions import Fraction
from pathlib import Path

from django.conf import settings
from django.test import SimpleTestCase

from arithmetic.services import DomainError, FixedDecimal
from oracle.services import pi_digits, pi_enclosure
from synthesis.services import generate_chain

from .audit import Rendering, audit_corpus, classify, summarize_findings
from .corpus import CorpusError, load_corpus, parse_corpus
from .models import Classification, Convention, RowKind
from .services import defect_numerator, examen_rows, examine, render_examen


class ExamineTests(SimpleTestCase):
    def test_archimedes_row(self):
        row = examine(Fraction(22, 7), 10, label="Bb")
        self.assertEqual(row.kind, RowKind.EXCESS)
        self.assertEqual(row.periphery_text, "314285 71428")
        self.assertEqual(row.deviation_text, "126 44892")

    def test_metius_row(self):
        row = examine(Fraction(355, 113), 15)
        self.assertEqual(row.kind, RowKind.EXCESS)
        self.assertEqual(row.periphery_text, "314159 29203 53982")
        self.assertEqual(row.deviation_text, "2667 64189")

    def test_defective_row(self):
        row = examine(Fraction(333, 106), 15)
        self.assertEqual(row.kind, RowKind.DEFECT)
        self.assertEqual(row.deviation_text, "8 32196 27529")

    def test_pi_itself(self):
        row = examine(pi_enclosure(60), 25)
        self.assertEqual(row.kind, RowKind.REFERENCE)
        self.assertEqual(row.deviation_digits, 0)
        self.assertEqual(row.periphery_text, "314159 26535 89793 23846 26433")

    def test_wide_enclosure_rejected(self):
        with self.assertRaises(DomainError):
            examine(pi_enclosure(5), 25)

    def test_scale_must_be_positive(self):
        with self.assertRaises(DomainError):
            examine(Fraction(22, 7), 0)

    def test_defect_of_c_in_hundred_thousandths(self):
        self.assertEqual(defect_numerator(Fraction(333, 106)), 8)

    def test_agreeing_digits(self):
        self.assertEqual(examine(Fraction(25, 8), 10).agreeing_digits, 2)
        self.assertEqual(examine(Fraction(22, 7), 10).agreeing_digits, 3)
        self.assertEqual(examine(Fraction(355, 113), 15).agreeing_digits, 7)
        self.assertEqual(examine(pi_enclosure(60), 25).agreeing_digits, 26)


class ExamenTableTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.chain = generate_chain(4)
        cls.rows = examen_rows(cls.chain)

    def test_row_order_and_scales(self):
        self.assertEqual(self.rows[0].kind, RowKind.REFERENCE)
        self.assertEqual(
            [(row.label, row.scale) for row in self.rows[1:]],
            [("B", 10), ("Bb", 10), ("C", 15), ("Cc", 15), ("D", 20), ("Dd", 20), ("E", 20), ("Ee", 20), ("F", 25), ("Ff", 25)],
        )

    def test_rendered_table(self):
        text = render_examen(self.chain)
        self.assertIn("100000 00000 00000 00000 00000", text)
        self.assertTrue(text.startswith("Examen Rationum Cyclometricarum"))
        self.assertIn("314159 26535 89793 23846 26433", text)
        self.assertIn("314159 26535 81077 77120", text)
        self.assertIn("8715 46725", text)
        self.assertIn("12 36520", text)
        self.assertIn("9 65432", text)
        self.assertIn("Defectus", text)
        self.assertIn("Excessus", text)

    def test_narrow_scale_rejected(self):
        with self.assertRaises(DomainError):
            render_examen(self.chain, 20)

    def test_kind_matches_table_one_marks(self):
        corpus = load_corpus()
        for row in self.rows[1:]:
            with self.subTest(label=row.label):
                mark = corpus.get(f"table1.mark.{row.label}").printed
                expected = RowKind.DEFECT if mark == "†" else RowKind.EXCESS
                self.assertEqual(row.kind, expected)

    def test_reconstruction_within_one_unit(self):
        for row in self.rows[1:]:
            pi = FixedDecimal(int(pi_digits(row.scale + 1)), row.scale)
            if row.kind == RowKind.DEFECT:
                rebuilt = row.periphery_digits + row.deviation_digits
            else:
                rebuilt = row.periphery_digits - row.deviation_digits
            with self.subTest(label=row.label):
                self.assertLessEqual(abs((rebuilt - pi).mantissa), 1)
                self.assertGreaterEqual(row.deviation_digits.mantissa, 0)


class ClassifyTests(SimpleTestCase):
    def test_spacing_is_ignored(self):
        result = classify("126 44892", Rendering(exact="12644892"))
        self.assertEqual(result, (Classification.CONFIRMED, Convention.EXACT))

    def test_rounded_match_confirms(self):
        rendering = Rendering(exact="57735 02691 89625", alternatives=((Convention.ROUNDED, "57735 02691 89626"),))
        self.assertEqual(classify("57735 02691 89626", rendering), (Classification.CONFIRMED, Convention.ROUNDED))

    def test_truncated_difference_is_ambiguous(self):
        rendering = Rendering(exact="5 41031", alternatives=((Convention.TRUNCATED_DIFFERENCE, "5 41032"),))
        self.assertEqual(
            classify("5 41032", rendering),
            (Classification.CONVENTION_AMBIGUITY, Convention.TRUNCATED_DIFFERENCE),
        )

    def test_last_place_unit_is_ambiguous(self):
        classification, _ = classify("3 14153 33387 05093", Rendering(exact="3 14153 33387 05094"))
        self.assertEqual(classification, Classification.CONVENTION_AMBIGUITY)

    def test_misprints_by_source(self):
        self.assertEqual(classify("5448", Rendering(exact="5548"))[0], Classification.PAPER_MISPRINT)
        self.assertEqual(
            classify("3131", Rendering(exact="3113"), translator=True)[0],
            Classification.TRANSLATOR_MISPRINT,
        )

    def test_length_change_is_not_a_unit_slip(self):
        self.assertEqual(classify("16519 26535", Rendering(exact="16592 6535"))[0], Classification.PAPER_MISPRINT)

    def test_carried_forward_confirms(self):
        rendering = Rendering(
            exact="5 93148 84698",
            alternatives=((Convention.ROUNDED, "5 93148 84699"), (Convention.CARRIED_FORWARD, "5 93148 84700")),
        )
        self.assertEqual(classify("5 93148 84700", rendering), (Classification.CONFIRMED, Convention.CARRIED_FORWARD))


class AuditTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.corpus = load_corpus()
        cls.findings = audit_corpus(corpus=cls.corpus)
        cls.by_location = {f.location: f for f in cls.findings}

    def assertClassified(self, location, classification, convention=None):
        finding = self.by_location[location]
        self.assertEqual(finding.classification, classification, finding)
        if convention is not None:
            self.assertEqual(finding.convention, convention, finding)

    def test_one_finding_per_entry_in_order(self):
        self.assertEqual(len(self.findings), len(self.corpus))
        self.assertEqual([f.location for f in self.findings], [e.id for e in self.corpus.entries])

    def test_flagged_originator_misprints(self):
        self.assertClassified("table1.originator.X", Classification.PAPER_MISPRINT)
        self.assertClassified("table1.originator.Xx", Classification.PAPER_MISPRINT)
        self.assertEqual(self.by_location["table1.originator.X"].computed, "5548")
        self.assertEqual(self.by_location["table1.originator.Xx"].computed, "5549")
        self.assertClassified("translator.table1.originator.X", Classification.CONFIRMED)

    def test_table_one_rows_confirmed(self):
        for label in ["A", "Aa", "B", "Bb", "C", "Cc", "D", "Dd", "E", "Ee", "F", "Ff"]:
            with self.subTest(label=label):
                self.assertClassified(f"table1.{label}", Classification.CONFIRMED, Convention.EXACT)
                self.assertClassified(f"table1.mark.{label}", Classification.CONFIRMED)

    def test_examen_misprints(self):
        self.assertClassified("examen.B.deviation", Classification.PAPER_MISPRINT)
        self.assertClassified("examen.C.deviation", Classification.PAPER_MISPRINT)
        self.assertEqual(self.by_location["examen.C.deviation"].computed, "8 32196 27529")
        self.assertClassified("examen.Bb.deviation", Classification.CONFIRMED)
        self.assertClassified("examen.D.deviation", Classification.CONFIRMED)
        self.assertClassified("examen.pi", Classification.CONFIRMED)

    def test_examen_peripheries_confirmed(self):
        for label in ["B", "Bb", "C", "Cc", "D", "Dd", "E", "Ee", "F", "Ff"]:
            with self.subTest(label=label):
                self.assertClassified(f"examen.{label}.periphery", Classification.CONFIRMED)

    def test_construction_conventions(self):
        self.assertClassified("construct.AB", Classification.CONFIRMED, Convention.EXACT)
        self.assertClassified("construct.BI", Classification.CONFIRMED, Convention.ROUNDED)
        self.assertClassified("construct.IL", Classification.CONFIRMED, Convention.CARRIED_FORWARD)
        self.assertClassified("construct.IG", Classification.CONVENTION_AMBIGUITY)
        self.assertClassified("construct.KL", Classification.CONVENTION_AMBIGUITY)
        self.assertClassified("construct.X", Classification.CONFIRMED)
        self.assertClassified("construct.year_lower", Classification.CONFIRMED)
        self.assertClassified("construct.year_upper", Classification.CONFIRMED)

    def test_defect_carried_forward_from_printed_il(self):
        finding = self.by_location["construct.Z"]
        self.assertEqual(finding.classification, Classification.CONFIRMED)
        self.assertEqual(finding.convention, Convention.CARRIED_FORWARD)
        self.assertEqual(finding.computed, "5 93148 84698")
        self.assertIn("carried forward", finding.note)
        self.assertIn("5 93148 84700", finding.note)

    def test_misaligned_kl_gives_no_replay(self):
        corpus = parse_corpus(
            "meta.version | 1\nconstruct.KL | 2 4226497308 10373\nconstruct.Z | 5 93148 84700\n"
        )
        with self.assertLogs("examen.audit", level="WARNING"):
            findings = {f.location: f for f in audit_corpus(corpus=corpus)}
        self.assertEqual(findings["construct.Z"].classification, Classification.CONVENTION_AMBIGUITY)
        self.assertEqual(findings["construct.Z"].note, "")

    def test_deviation_note_reads_printed_row(self):
        self.assertIn("+63 units of 10**-15", self.by_location["examen.C.deviation"].note)
        self.assertNotIn("units", self.by_location["examen.D.deviation"].note)

    def test_accuracy_claims(self):
        twice = self.by_location["examen.claim.twice"]
        self.assertEqual((twice.classification, twice.computed), (Classification.CONFIRMED, "2"))
        self.assertIn("Cc 7", twice.note)
        exceeds = self.by_location["translator.examen.claim.Cc.exceeds"]
        self.assertEqual((exceeds.classification, exceeds.computed), (Classification.CONFIRMED, "B Bb C"))
        successor = self.by_location["examen.claim.Cc.successor"]
        self.assertEqual((successor.classification, successor.computed), (Classification.CONFIRMED, "d"))
        self.assertIn("12 digits", successor.note)

    def test_printed_sum_follows_printed_kl(self):
        finding = self.by_location["construct.KL2_IK2"]
        self.assertEqual(finding.classification, Classification.CONFIRMED)
        self.assertEqual(finding.convention, Convention.CARRIED_FORWARD)
        self.assertIn("9 86923 17181 95572 75995 52843 99129", finding.note)
        self.assertClassified("construct.label.KL2_IK2", Classification.PAPER_MISPRINT)

    def test_bisection(self):
        self.assertClassified("bisect.Q", Classification.CONFIRMED, Convention.ROUNDED)
        self.assertClassified("bisect.P", Classification.CONFIRMED)
        self.assertClassified("bisect.eighth", Classification.PAPER_MISPRINT)
        self.assertClassified("translator.bisect.decimal", Classification.CONFIRMED)

    def test_translator_entries(self):
        self.assertClassified("translator.curious.decimal", Classification.TRANSLATOR_MISPRINT)
        self.assertClassified("translator.curious.denominator", Classification.TRANSLATOR_MISPRINT)
        self.assertClassified("translator.curious.excess_e7", Classification.CONFIRMED, Convention.ROUNDED)
        self.assertClassified("translator.reduced.e.source", Classification.TRANSLATOR_MISPRINT)
        self.assertEqual(self.by_location["translator.reduced.e.source"].computed, "Ee")

    def test_reduced_forms(self):
        self.assertClassified("reduced.cc", Classification.CONFIRMED)
        self.assertClassified("reduced.d", Classification.CONFIRMED)
        self.assertClassified("reduced.e", Classification.CONFIRMED)
        self.assertClassified("reduced.mark.e", Classification.PAPER_MISPRINT)

    def test_curious_ratio(self):
        self.assertClassified("curious.value", Classification.CONFIRMED)
        self.assertClassified("curious.agreeing_digits", Classification.CONFIRMED)
        self.assertClassified("curious.excess", Classification.CONFIRMED)

    def test_mostly_confirmed(self):
        summary = summarize_findings(self.findings)
        self.assertEqual(summary.total, len(self.corpus))
        self.assertEqual(sum(summary.counts.values()), summary.total)
        self.assertGreaterEqual(summary.confirmed_share, Fraction(4, 5))

    def test_deterministic(self):
        self.assertEqual(audit_corpus(corpus=self.corpus), self.findings)

    def test_unknown_id(self):
        corpus = parse_corpus("meta.version | 1\ntable1.Q | 1 ad 3\n")
        with self.assertRaises(CorpusError) as ctx:
            audit_corpus(corpus=corpus)
        self.assertEqual(ctx.exception.field, "id")
        self.assertEqual(ctx.exception.line_no, 2)

    def test_nothing_computes(self):
        corpus = parse_corpus("meta.version | 1\nelsewhere.value | 7\n")
        with self.assertRaises(CorpusError):
            audit_corpus(corpus=corpus)


class CorpusParseTests(SimpleTestCase):
    def test_comments_and_notes(self):
        corpus = parse_corpus("# header\n\nmeta.version | 3 | schema\nexamen.pi | 314159 26535 | Table 2\n")
        self.assertEqual(corpus.version, "3")
        self.assertEqual(len(corpus), 1)
        entry = corpus.get("examen.pi")
        self.assertEqual(entry.printed, "314159 26535")
        self.assertEqual(entry.note, "Table 2")
        self.assertEqual(entry.line_no, 4)

    def test_errors_carry_line_and_field(self):
        cases = [
            ("meta.version | 1\nno separator here\n", 2, "record"),
            ("meta.version | 1\n9bad | 1\n", 2, "id"),
            ("meta.version | 1\nconstruct.X |  | note\n", 2, "printed"),
            ("meta.version | 1\nconstruct.X | 1\nconstruct.X | 2\n", 3, "id"),
            ("meta.version | 1\nmeta.author | someone\n", 2, "id"),
            ("construct.X | 16859\n", 0, "meta.version"),
        ]
        for text, line_no, field in cases:
            with self.subTest(text=text):
                with self.assertRaises(CorpusError) as ctx:
                    parse_corpus(text)
                self.assertEqual(ctx.exception.line_no, line_no)
                self.assertEqual(ctx.exception.field, field)
                self.assertIn(f"field {field}", str(ctx.exception))

    def test_shipped_corpus(self):
        corpus = load_corpus()
        self.assertEqual(corpus.version, "3")
        self.assertEqual(corpus.source, str(Path(settings.CYCLOMETRIA_CORPUS)))
        self.assertGreaterEqual(len(corpus), 80)

    def test_path_override(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "corpus.txt"
            path.write_text("meta.version | 9\nconstruct.X | 16859\n", encoding="utf-8")
            corpus = load_corpus(path)
            self.assertEqual(corpus.version, "9")
            self.assertEqual(audit_corpus(corpus=corpus)[0].classification, Classification.CONFIRMED)

    def test_missing_file(self):
        with self.assertRaises(CorpusError) as ctx:
            load_corpus("/nonexistent/corpus.txt")
        self.assertEqual(ctx.exception.field, "path")
