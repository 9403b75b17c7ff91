from __future__ import annotations

import math
import random
from decimal import ROUND_DOWN, ROUND_HALF_UP
from fractions import Fraction
from unittest.mock import patch

from django.test import SimpleTestCase

from arithmetic.services import DomainError, FixedDecimal, format_grouped
from oracle.models import Comparison
from oracle.services import cmp_pi, cmp_value_pi

from .quadratic import SQRT3, QuadraticSurd, sqrt_enclosure, sqrt_truncated
from .services import (
    IL_SQUARED,
    ConstructionGeometryError,
    bisection_construction,
    construction_coordinates,
    defect_reciprocal,
    kochanski_construction,
    replay_from_printed,
    year_bound_check,
)


class QuadraticSurdTests(SimpleTestCase):
    def test_field_operations(self):
        x = QuadraticSurd(Fraction(1), Fraction(2))
        y = QuadraticSurd(Fraction(3), Fraction(-1))
        self.assertEqual(x + y, QuadraticSurd(4, 1))
        self.assertEqual(x * y, QuadraticSurd(3 - 6, -1 + 6))
        self.assertEqual((x * y) / y, x)
        self.assertEqual(SQRT3 * SQRT3, 3)
        self.assertEqual(x.norm(), 1 - 12)

    def test_exact_sign(self):
        self.assertEqual((SQRT3 - Fraction(17320508, 10**7)).sign(), 1)
        self.assertEqual((SQRT3 - Fraction(17320509, 10**7)).sign(), -1)
        self.assertEqual((QuadraticSurd(2) - 2).sign(), 0)

    def test_floor_and_rounding(self):
        self.assertEqual(math.floor(SQRT3 * 1000), 1732)
        self.assertEqual(math.floor(-SQRT3), -2)
        self.assertEqual(math.ceil(SQRT3), 2)
        bi = SQRT3 / 3
        self.assertEqual(str(bi.quantize(15, ROUND_DOWN)), "0.577350269189625")
        self.assertEqual(str(bi.quantize(15, ROUND_HALF_UP)), "0.577350269189626")

    def test_rounding_matches_truncated_digits_on_random_surds(self):
        rng = random.Random(16859)
        for _ in range(200):
            s = QuadraticSurd(Fraction(rng.randint(-50, 50), rng.randint(1, 9)), Fraction(rng.randint(-50, 50), rng.randint(1, 9)))
            scale = rng.randint(0, 25)
            with self.subTest(s=str(s), scale=scale):
                enc = s.enclosure(scale)
                self.assertLessEqual(enc.width, Fraction(1, 10**scale))
                self.assertLessEqual(QuadraticSurd(enc.lo.to_fraction()), s)
                self.assertGreaterEqual(QuadraticSurd(enc.hi.to_fraction()), s)

    def test_square_root_of_surd(self):
        self.assertEqual(str(sqrt_truncated(IL_SQUARED, 15)), "3.141533338705094")
        enc = sqrt_enclosure(QuadraticSurd(4), 5)
        self.assertEqual(enc.lo, 2)
        self.assertEqual(enc.hi, 2)

    def test_negative_square_rejected(self):
        with self.assertRaises(DomainError):
            sqrt_truncated(QuadraticSurd(-1), 3)


class CoordinateTests(SimpleTestCase):
    def setUp(self):
        self.points = {p.label: p for p in construction_coordinates()}

    def test_tangent_of_thirty_degrees(self):
        b, i = self.points["B"], self.points["I"]
        self.assertEqual(b.distance_squared(i), Fraction(1, 3))
        self.assertEqual(i.y, SQRT3 / 3)

    def test_hl_equals_diameter(self):
        self.assertEqual(self.points["H"].distance_squared(self.points["L"]), 4)
        self.assertEqual(self.points["B"].distance_squared(self.points["D"]), 4)

    def test_kl(self):
        k, l = self.points["K"], self.points["L"]
        self.assertEqual(k.distance_squared(l), (3 - SQRT3 / 3) ** 2)
        self.assertEqual(str((3 - SQRT3 / 3).quantize(11)), "2.42264973081")

    def test_arc_points_lie_on_circle(self):
        a = self.points["A"]
        for label in "BCDEF":
            with self.subTest(label=label):
                self.assertEqual(a.distance_squared(self.points[label]), 1)

    def test_il_identity_is_exact(self):
        il2 = self.points["I"].distance_squared(self.points["L"])
        self.assertEqual(il2, 4 + (3 - SQRT3 / 3) ** 2)
        self.assertEqual(il2, (120 - 18 * SQRT3) / 9)


class KochanskiConstructionTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.report = kochanski_construction(15)

    def test_printed_lines(self):
        bi = self.report.length("BI")
        self.assertEqual(format_grouped(bi.rounded, attach_integer=False), "57735 02691 89626")
        il = self.report.length("IL")
        self.assertEqual(str(il.truncated), "3.141533338705094")
        self.assertTrue(str(il.truncated).startswith("3.14153333870509"))
        total = self.report.length("KL2_IK2")
        self.assertTrue(str(total.truncated).startswith("9.8692317181955"))

    def test_defect_and_reciprocal(self):
        z = self.report.defect_z
        self.assertLess(abs(z.lo.to_fraction() - Fraction(593148847, 10**13)), Fraction(1, 10**14))
        self.assertEqual(format_grouped(self.report.defect_z_truncated, attach_integer=False), "5 93148 84698")
        self.assertEqual(format_grouped(self.report.defect_z_rounded, attach_integer=False), "5 93148 84699")
        self.assertEqual(self.report.reciprocal_x, 16859)

    def test_il_below_pi(self):
        self.assertEqual(cmp_value_pi(self.report.il), Comparison.LESS)

    def test_fd_sqrt_agrees_with_coordinates(self):
        for scale in range(15, 51):
            with self.subTest(scale=scale):
                report_il = sqrt_enclosure(IL_SQUARED, scale)
                direct = sqrt_truncated(self.report.points[8].distance_squared(self.report.points[10]), scale)
                self.assertEqual(report_il.lo, direct)

    def test_ordering_chain(self):
        # IL < pi < curious ratio < 355/113 < 3217/1024
        curious = Fraction(9691760, 3084983)
        self.assertEqual(cmp_value_pi(self.report.il), Comparison.LESS)
        for ratio in [curious, Fraction(355, 113), Fraction(3217, 1024)]:
            with self.subTest(ratio=ratio):
                self.assertEqual(cmp_pi(ratio), Comparison.GREATER)
        self.assertLess(curious, Fraction(355, 113))
        self.assertLess(Fraction(355, 113), Fraction(3217, 1024))

    def test_il_must_fall_short_of_pi(self):
        with patch("constructions.services.cmp_value_pi", return_value=Comparison.GREATER):
            with self.assertRaises(ConstructionGeometryError):
                kochanski_construction(15)

    def test_rejects_short_scale(self):
        with self.assertRaises(DomainError):
            kochanski_construction(14)

    def test_replay_reproduces_printed_root(self):
        replay = replay_from_printed(FixedDecimal.from_string("2.422649730810373"))
        self.assertEqual(str(replay.total), "9.869231718195572759955284399129")
        self.assertEqual(str(replay.root), "3.141533338705093")

    def test_replay_carries_defect_forward(self):
        replay = replay_from_printed(FixedDecimal.from_string("2.422649730810373"))
        self.assertEqual(str(replay.defect), "0.000059314884700")
        self.assertEqual(format_grouped(replay.defect, attach_integer=False), "5 93148 84700")
        self.assertNotEqual(replay.defect, self.report.defect_z_truncated)


class YearBoundTests(SimpleTestCase):
    def test_year_of_writing(self):
        self.assertTrue(year_bound_check(1685).passed)
        self.assertFalse(year_bound_check(1686).passed)
        self.assertFalse(year_bound_check(1).passed)

    def test_exactly_one_year_passes(self):
        x = defect_reciprocal()
        passing = [y for y in range(1, 10001) if year_bound_check(y, reciprocal_x=x).passed]
        self.assertEqual(passing, [1685])

    def test_rejects_year_zero(self):
        with self.assertRaises(DomainError):
            year_bound_check(0)


class BisectionTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.report = bisection_construction(9)

    def test_ratio_and_parts(self):
        self.assertEqual(self.report.ratio, Fraction(3217, 1024))
        self.assertEqual(sum(term for _, term in self.report.decomposition), Fraction(3217, 1024))
        self.assertEqual(self.report.periphery_parts, 100 + Fraction(17, 32))
        self.assertEqual(self.report.eighth, Fraction(1, 8))

    def test_periphery_digits(self):
        self.assertEqual(str(self.report.periphery), "3.141601562")

    def test_excess(self):
        q = self.report.excess_q
        self.assertGreater(q.lo, Fraction(8908, 10**9))
        self.assertLess(q.hi, Fraction(8910, 10**9))
        self.assertEqual(self.report.q_truncated.mantissa, 890)
        self.assertEqual(self.report.q_rounded.mantissa, 891)

    def test_q_below_z(self):
        self.assertTrue(self.report.comparison_to_z)

    def test_rejects_short_scale(self):
        with self.assertRaises(DomainError):
            bisection_construction(8)
