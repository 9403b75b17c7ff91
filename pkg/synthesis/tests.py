from __future__ import annotations

import math
import random
from fractions import Fraction

from django.test import SimpleTestCase

from oracle.models import Comparison
from oracle.services import cmp_pi

from .models import BoundKind
from .services import (
    OriginatorError,
    curious_ratio,
    generate_chain,
    mixed_form,
    originator,
    parse_mixed,
    reduced_form,
    reduced_forms_table,
    refine,
    sandwich_holds,
)

PI_60 = Fraction(3141592653589793238462643383279502884197169399375105820974944, 10**60)

TABLE_ONE = {
    "C": (333, 106),
    "Cc": (355, 113),
    "D": (1667438, 530762),
    "Dd": (1667793, 530875),
    "E": (9252915567, 2945294501),
    "Ee": (9254583360, 2945825376),
    "F": (136727214560643, 43521624105025),
    "Ff": (136736469144003, 43524569930401),
}


class OriginatorTests(SimpleTestCase):
    def test_printed_originators(self):
        self.assertEqual(originator(22, 7), 15)
        self.assertEqual(originator(355, 113), 4697)
        self.assertEqual(originator(1667793, 530875), 5548)
        self.assertEqual(originator(9254583360, 2945825376), 14774)

    def test_originator_is_the_last_defective_multiplier(self):
        p, q = 1667793, 530875
        self.assertEqual(cmp_pi(Fraction(p * 5548 + 3, q * 5548 + 1)), Comparison.LESS)
        self.assertEqual(cmp_pi(Fraction(p * 5549 + 3, q * 5549 + 1)), Comparison.GREATER)

    def test_rejects_defective_parent(self):
        with self.assertRaises(OriginatorError):
            originator(333, 106)

    def test_rejects_parent_not_above_three(self):
        with self.assertRaises(OriginatorError):
            originator(3, 1)
        with self.assertRaises(OriginatorError):
            originator(5, 2)

    def test_rejects_parent_without_positive_originator(self):
        # (4n + 3)/(n + 1) already exceeds pi at n = 1
        with self.assertRaises(OriginatorError):
            originator(4, 1)

    def test_depends_on_the_unreduced_pair(self):
        reduced = Fraction(9254583360, 2945825376)
        n = originator(reduced.numerator, reduced.denominator)
        self.assertNotEqual(n, 14774)
        self.assertEqual(n, math.floor((PI_60 - 3) / (reduced.numerator - reduced.denominator * PI_60)))


class RefineTests(SimpleTestCase):
    def test_refines_archimedes(self):
        pair = refine(22, 7)
        self.assertEqual(pair.defective, Fraction(333, 106))
        self.assertEqual(pair.excessive, Fraction(355, 113))
        self.assertEqual((pair.originator_minor, pair.originator_major), (15, 16))

    def test_refines_raw_pairs(self):
        pair = refine(355, 113)
        self.assertEqual(pair.defective_raw, (1667438, 530762))
        self.assertEqual(pair.excessive_raw, (1667793, 530875))

        pair = refine(1667793, 530875)
        self.assertEqual(pair.defective_raw, (9252915567, 2945294501))
        self.assertEqual(pair.excessive_raw, (9254583360, 2945825376))


class ChainTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.chain = generate_chain(4)

    def test_reproduces_table_one(self):
        for row in self.chain.rows()[4:]:
            with self.subTest(label=row.label):
                self.assertEqual(row.raw, TABLE_ONE[row.label])

    def test_originators(self):
        self.assertEqual(
            self.chain.originators(),
            [
                ("Z", 15), ("Zz", 16),
                ("Y", 4697), ("Yy", 4698),
                ("X", 5548), ("Xx", 5549),
                ("V", 14774), ("Vv", 14775),
            ],
        )

    def test_each_parent_is_previous_excessive_raw(self):
        parents = [step.parent_raw for step in self.chain.steps]
        self.assertEqual(parents[0], (22, 7))
        for prev, step in zip(self.chain.steps, self.chain.steps[1:]):
            self.assertEqual(step.parent_raw, prev.excessive_raw)

    def test_seeds_only(self):
        chain = generate_chain(0)
        self.assertEqual([row.label for row in chain.rows()], ["A", "Aa", "B", "Bb"])
        self.assertEqual(chain.bound("B").value, Fraction(25, 8))
        self.assertEqual(chain.bound("Aa").mark, "—")
        self.assertEqual(chain.bound("A").mark, "†")

    def test_negative_depth_rejected(self):
        with self.assertRaises(ValueError):
            generate_chain(-1)

    def test_seed_b_is_first_mediant_step(self):
        self.assertEqual(Fraction(22 * 1 + 3, 7 * 1 + 1), Fraction(25, 8))


class DeepChainTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.chain = generate_chain(6)

    def test_sandwich_holds_to_depth_six(self):
        for step in self.chain.steps:
            with self.subTest(step=step.label_minor):
                self.assertTrue(sandwich_holds(step))

    def test_kinds_match_cmp_pi(self):
        for row in self.chain.rows():
            with self.subTest(label=row.label):
                expected = Comparison.LESS if row.kind == BoundKind.DEFECTIVE else Comparison.GREATER
                self.assertEqual(cmp_pi(row.value), expected)

    def test_excess_decays(self):
        errors = [abs(step.excessive - PI_60) for step in self.chain.steps]
        for a, b in zip(errors, errors[1:]):
            self.assertLess(b, a)

    def test_fifth_step_matches_direct_floor(self):
        step = self.chain.steps[4]
        p, q = step.parent_raw
        self.assertEqual(step.parent_raw, TABLE_ONE["Ff"])
        lo, hi = PI_60, PI_60 + Fraction(1, 10**60)
        expected = math.floor((lo - 3) / (p - q * lo))
        self.assertEqual(expected, math.floor((hi - 3) / (p - q * hi)))
        self.assertEqual(step.originator_minor, expected)
        self.assertEqual((step.label_minor, step.label_major), ("G", "Gg"))
        self.assertEqual((step.originator_label_minor, step.originator_label_major), ("U", "Uu"))


class MediantPropertyTests(SimpleTestCase):
    def test_monotone_and_between_on_random_parents(self):
        rng = random.Random(4697)
        for _ in range(100):
            q = rng.randint(1, 10**6)
            p = rng.randint(3 * q + 1, 4 * q)
            parent = Fraction(p, q)
            with self.subTest(p=p, q=q):
                previous = Fraction(3)
                for n in range(1, 40):
                    value = Fraction(p * n + 3, q * n + 1)
                    self.assertGreater(value, previous)
                    self.assertLess(value, parent)
                    previous = value


class ReducedFormTests(SimpleTestCase):
    def test_d_form(self):
        form = reduced_form((1667438, 530762))
        self.assertEqual(form.value, Fraction(833719, 265381))
        self.assertEqual(form.factor, 2)

    def test_e_form(self):
        form = reduced_form((9254583360, 2945825376))
        self.assertEqual((form.periphery, form.diameter), (96401910, 30685681))
        self.assertEqual(form.factor, 96)

    def test_cc_form(self):
        form = reduced_form((355, 113))
        self.assertEqual(form.factor, 1)
        self.assertEqual(Fraction(71) / parse_mixed("22 3/5"), Fraction(355, 113))
        self.assertEqual(mixed_form(Fraction(113, 5)), "22 3/5")

    def test_table(self):
        entries = {e.label: e for e in reduced_forms_table(generate_chain(3))}
        self.assertEqual(entries["cc"].render(), "22 3/5 ad 71")
        self.assertEqual(entries["d"].render(), "265381 ad 833719")
        self.assertEqual(entries["e"].render(), "30685681 ad 96401910")
        self.assertEqual(entries["e"].kind, BoundKind.EXCESSIVE)
        self.assertEqual(entries["e"].divisor, 96)

    def test_table_skips_missing_sources(self):
        self.assertEqual([e.label for e in reduced_forms_table(generate_chain(1))], ["cc"])

    def test_parse_mixed_rejects_garbage(self):
        with self.assertRaises(ValueError):
            parse_mixed("22 and 3/5")


class CuriousRatioTests(SimpleTestCase):
    def test_report(self):
        report = curious_ratio()
        self.assertEqual(report.value, Fraction(9691760, 3084983))
        self.assertEqual(report.agreeing_digits, 8)
        self.assertGreater(report.excess.lo, 0)
        self.assertLess(report.excess.hi, Fraction(23, 10**9))
        self.assertEqual(report.excess_units, 23)
        self.assertEqual(report.decimal, "3.1415926765")
