from __future__ import annotations

import random
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction

from django.test import SimpleTestCase

from .services import (
    ConstructionError,
    DomainError,
    FixedDecimal,
    ParseError,
    decimal_expand,
    fd_sqrt,
    format_grouped,
    integer_sqrt_floor,
    make_rational,
    parse_grouped,
)


class MakeRationalTests(SimpleTestCase):
    def test_reduces_table_d_pair(self):
        r = make_rational(1667438, 530762)
        self.assertEqual((r.numerator, r.denominator), (833719, 265381))

    def test_reduces_table_e_pair(self):
        r = make_rational(9254583360, 2945825376)
        self.assertEqual((r.numerator, r.denominator), (96401910, 30685681))

    def test_coprime_pair_is_unchanged(self):
        r = make_rational(355, 113)
        self.assertEqual((r.numerator, r.denominator), (355, 113))

    def test_zero_normalizes_to_zero_over_one(self):
        r = make_rational(0, 5)
        self.assertEqual((r.numerator, r.denominator), (0, 1))

    def test_sign_moves_to_numerator(self):
        r = make_rational(3, -6)
        self.assertEqual((r.numerator, r.denominator), (-1, 2))

    def test_zero_denominator_rejected(self):
        with self.assertRaises(ConstructionError):
            make_rational(1, 0)

    def test_normalization_is_idempotent(self):
        r = make_rational(9254583360, 2945825376)
        self.assertEqual(make_rational(r.numerator, r.denominator), r)
        self.assertEqual(make_rational(7 * 22, 7 * 7), make_rational(22, 7))


class DecimalExpandTests(SimpleTestCase):
    def test_examination_rows(self):
        self.assertEqual(str(decimal_expand(Fraction(22, 7), 10)), "3.1428571428")
        self.assertEqual(str(decimal_expand(Fraction(25, 8), 10)), "3.1250000000")
        self.assertEqual(str(decimal_expand(Fraction(3), 10)), "3.0000000000")

    def test_truncates_never_rounds(self):
        # 2/3 = 0.666...
        self.assertEqual(str(decimal_expand(Fraction(2, 3), 3)), "0.666")
        self.assertEqual(str(decimal_expand(Fraction(2, 3), 3, ROUND_HALF_UP)), "0.667")

    def test_negative_truncates_toward_zero(self):
        self.assertEqual(str(decimal_expand(Fraction(-2, 3), 2)), "-0.66")

    def test_negative_scale_rejected(self):
        with self.assertRaises(DomainError):
            decimal_expand(Fraction(1, 3), -1)

    def test_truncation_error_below_one_unit(self):
        rng = random.Random(1685)
        for _ in range(300):
            r = Fraction(rng.randint(0, 10**12), rng.randint(1, 10**9))
            s = rng.randint(0, 40)
            with self.subTest(r=r, s=s):
                gap = r - decimal_expand(r, s).to_fraction()
                self.assertGreaterEqual(gap, 0)
                self.assertLess(gap, Fraction(1, 10**s))


class FixedDecimalTests(SimpleTestCase):
    def test_widening_preserves_value(self):
        x = FixedDecimal(31415, 4)
        self.assertEqual(x.widen(10), x)
        self.assertEqual(x.widen(10).mantissa, 31415 * 10**6)

    def test_arithmetic_at_common_scale_is_exact(self):
        a = FixedDecimal.from_string("3.1415926535")
        b = FixedDecimal.from_string("0.0000000001")
        self.assertEqual(str(a + b), "3.1415926536")
        self.assertEqual(str(a - b), "3.1415926534")
        self.assertEqual(FixedDecimal.from_string("1.5") * FixedDecimal.from_string("1.5"), Fraction(9, 4))

    def test_quantize_rounding(self):
        bi = FixedDecimal.from_string("0.5773502691896257")
        self.assertEqual(str(bi.quantize(15)), "0.577350269189625")
        self.assertEqual(str(bi.quantize(15, ROUND_HALF_UP)), "0.577350269189626")

    def test_to_decimal_is_exact(self):
        x = FixedDecimal(314159265358979323846264338327950288, 35)
        self.assertEqual(x.to_decimal(), Decimal("3.14159265358979323846264338327950288"))

    def test_from_string_rejects_garbage(self):
        with self.assertRaises(ParseError):
            FixedDecimal.from_string("3.14.15")


class IntegerSqrtTests(SimpleTestCase):
    def test_known_values(self):
        self.assertEqual(integer_sqrt_floor(0), 0)
        self.assertEqual(integer_sqrt_floor(10**30), 10**15)

    def test_bracketing_on_large_input(self):
        n = 986923171819557276
        root = integer_sqrt_floor(n)
        self.assertLessEqual(root * root, n)
        self.assertLess(n, (root + 1) ** 2)

    def test_negative_rejected(self):
        with self.assertRaises(DomainError):
            integer_sqrt_floor(-1)


class FixedSqrtTests(SimpleTestCase):
    def test_reproduces_printed_root_from_printed_sum(self):
        total = FixedDecimal.from_string("9.86923171819557275995528439913")
        self.assertEqual(str(fd_sqrt(total, 15)), "3.141533338705093")

    def test_perfect_square(self):
        self.assertEqual(fd_sqrt(FixedDecimal(4), 7), 2)

    def test_root_three(self):
        self.assertEqual(str(fd_sqrt(FixedDecimal(3), 20)), "1.73205080756887729352")

    def test_negative_rejected(self):
        with self.assertRaises(DomainError):
            fd_sqrt(FixedDecimal(-4), 3)

    def test_bracketing_invariant(self):
        rng = random.Random(16850)
        for _ in range(1000):
            x = FixedDecimal(rng.randint(0, 10**rng.randint(1, 40)), rng.randint(0, 30))
            s = rng.randint(0, 30)
            with self.subTest(x=str(x), s=s):
                root = fd_sqrt(x, s).to_fraction()
                step = Fraction(1, 10**s)
                self.assertLessEqual(root * root, x.to_fraction())
                self.assertLess(x.to_fraction(), (root + step) ** 2)


class GroupedFormatTests(SimpleTestCase):
    def test_examination_layout(self):
        self.assertEqual(format_grouped(FixedDecimal.from_string("3.1415926535")), "314159 26535")
        self.assertEqual(
            format_grouped(FixedDecimal.from_string("3.1415926535897932384626433")),
            "314159 26535 89793 23846 26433",
        )

    def test_deviation_drops_leading_zero_groups(self):
        defect = FixedDecimal.from_string("0.00000000000871546725")
        self.assertEqual(format_grouped(defect), "8715 46725")

    def test_construction_layout(self):
        self.assertEqual(
            format_grouped(FixedDecimal.from_string("3.141533338705093"), attach_integer=False),
            "3 14153 33387 05093",
        )
        self.assertEqual(
            format_grouped(FixedDecimal.from_string("0.577350269189626"), attach_integer=False),
            "57735 02691 89626",
        )
        self.assertEqual(
            format_grouped(FixedDecimal.from_string("0.000059314884700"), attach_integer=False),
            "5 93148 84700",
        )

    def test_zero(self):
        self.assertEqual(format_grouped(FixedDecimal(0)), "0")
        self.assertEqual(format_grouped(FixedDecimal(0, 10)), "0")

    def test_parse_examination_row(self):
        self.assertEqual(parse_grouped("2667 64189", 15), FixedDecimal.from_string("0.000000266764189"))
        self.assertEqual(parse_grouped("314159 29203 53982", 15), Fraction(3141592920353982, 10**15))

    def test_parse_rejects_malformed_rows(self):
        for text in ["", "31415x 92653", "314159 2653", "1 2 3 4 5"]:
            with self.subTest(text=text):
                with self.assertRaises(ParseError):
                    parse_grouped(text, 10)

    def test_round_trip_on_printed_root(self):
        x = FixedDecimal.from_string("3.141533338705093")
        for attach in (True, False):
            with self.subTest(attach=attach):
                back = parse_grouped(format_grouped(x, attach_integer=attach), x.scale, attach_integer=attach)
                self.assertEqual(back, x)
                self.assertEqual(back.scale, x.scale)

    def test_round_trip_random(self):
        rng = random.Random(3217)
        for _ in range(1000):
            scale = rng.randint(0, 32)
            x = FixedDecimal(rng.randint(-(10**35), 10**35), scale)
            group = rng.choice([3, 5])
            attach = rng.choice([True, False])
            with self.subTest(x=str(x), group=group, attach=attach):
                text = format_grouped(x, group, attach_integer=attach)
                back = parse_grouped(text, scale, group, attach_integer=attach)
                self.assertEqual(back, x)
