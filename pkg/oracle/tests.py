from __future__ import annotations

import threading
from fractions import Fraction

from django.test import SimpleTestCase, override_settings

from arithmetic.services import DomainError, FixedDecimal

from .models import Comparison
from .services import (
    Enclosure,
    PiOracle,
    PrecisionCeilingError,
    agreeing_digits,
    cmp_pi,
    cmp_value_pi,
    cross_check_enclosure,
    machin_enclosure,
    pi_digits,
    pi_enclosure,
)

PI_60 = "3.141592653589793238462643383279502884197169399375105820974944"


def _pi_prefix(decimals: int) -> FixedDecimal:
    return FixedDecimal.from_string(PI_60[: decimals + 2])


class EnclosureTests(SimpleTestCase):
    def test_from_rational_brackets_value(self):
        enc = Enclosure.from_rational(Fraction(22, 7), 10)
        self.assertEqual(str(enc.lo), "3.1428571428")
        self.assertEqual(str(enc.hi), "3.1428571429")
        self.assertTrue(enc.contains(Fraction(22, 7)))

    def test_exact_value_is_a_point(self):
        enc = Enclosure.from_rational(Fraction(25, 8), 10)
        self.assertEqual(enc.width, 0)

    def test_rejects_inverted_bounds(self):
        with self.assertRaises(DomainError):
            Enclosure(lo=FixedDecimal(4), hi=FixedDecimal(3))

    def test_intersect_and_disjoint(self):
        a = Enclosure(lo=FixedDecimal(30, 1), hi=FixedDecimal(40, 1))
        b = Enclosure(lo=FixedDecimal(31, 1), hi=FixedDecimal(50, 1))
        self.assertEqual(a.intersect(b), Enclosure(lo=FixedDecimal(31, 1), hi=FixedDecimal(40, 1)))
        with self.assertRaises(DomainError):
            a.intersect(Enclosure(lo=FixedDecimal(5), hi=FixedDecimal(6)))

    def test_subtraction_is_interval_difference(self):
        a = Enclosure(lo=FixedDecimal(31, 1), hi=FixedDecimal(32, 1))
        b = Enclosure(lo=FixedDecimal(3), hi=FixedDecimal(3))
        diff = a - b
        self.assertEqual(diff.lo, Fraction(1, 10))
        self.assertEqual(diff.hi, Fraction(2, 10))


class PiEnclosureTests(SimpleTestCase):
    def test_encloses_reference_digits(self):
        enc = pi_enclosure(25)
        self.assertLessEqual(enc.width, Fraction(1, 10**25))
        self.assertLess(enc.lo, _pi_prefix(26) + FixedDecimal(1, 26))
        self.assertGreater(enc.hi, _pi_prefix(26))
        self.assertEqual(str(enc.lo)[:27], "3.1415926535897932384626433")

    def test_one_digit(self):
        enc = pi_enclosure(1)
        self.assertTrue(enc.contains(Fraction(314, 100)))
        self.assertLessEqual(enc.width, Fraction(1, 10))

    def test_width_and_containment_over_range(self):
        for digits in range(1, 60):
            with self.subTest(digits=digits):
                enc = pi_enclosure(digits)
                self.assertLessEqual(enc.width, Fraction(1, 10**digits))
                self.assertLessEqual(enc.lo, _pi_prefix(59) + FixedDecimal(1, 59))
                self.assertGreaterEqual(enc.hi, _pi_prefix(59))

    def test_monotone_refinement(self):
        oracle = PiOracle(start_digits=4)
        previous = oracle.enclosure(1)
        for digits in range(2, 80):
            with self.subTest(digits=digits):
                current = oracle.enclosure(digits)
                self.assertGreaterEqual(current.lo, previous.lo)
                self.assertLessEqual(current.hi, previous.hi)
                previous = current

    def test_second_identity_agrees(self):
        for precision in range(1, 201):
            with self.subTest(precision=precision):
                self.assertTrue(machin_enclosure(precision).overlaps(cross_check_enclosure(precision)))

    def test_second_identity_agrees_on_35_digits(self):
        a = machin_enclosure(40).rounded_outward(35)
        b = cross_check_enclosure(40).rounded_outward(35)
        self.assertEqual(str(a.lo)[:37], str(b.lo)[:37])
        self.assertEqual(str(a.lo)[:37], PI_60[:37])

    def test_rejects_zero_digits(self):
        with self.assertRaises(DomainError):
            pi_enclosure(0)

    def test_ceiling_is_explicit(self):
        oracle = PiOracle(max_digits=50)
        with self.assertRaises(PrecisionCeilingError) as ctx:
            oracle.enclosure(51)
        self.assertEqual(ctx.exception.digits, 51)

    @override_settings(CYCLOMETRIA_MAX_DIGITS=20)
    def test_ceiling_comes_from_settings(self):
        with self.assertRaises(PrecisionCeilingError):
            PiOracle().enclosure(21)


class ComparePiTests(SimpleTestCase):
    def test_known_convergents(self):
        self.assertEqual(cmp_pi(Fraction(3)), Comparison.LESS)
        self.assertEqual(cmp_pi(Fraction(22, 7)), Comparison.GREATER)
        self.assertEqual(cmp_pi(Fraction(333, 106)), Comparison.LESS)
        self.assertEqual(cmp_pi(Fraction(355, 113)), Comparison.GREATER)
        self.assertEqual(cmp_pi(Fraction(103993, 33102)), Comparison.LESS)

    def test_doubles_until_decided(self):
        # agrees with pi to about 40 digits, above the starting precision
        close = Fraction(int(PI_60.replace(".", "")[:43]), 10**42)
        oracle = PiOracle(start_digits=8)
        self.assertEqual(oracle.compare(close), Comparison.LESS)
        self.assertEqual(oracle.compare(close + Fraction(1, 10**42)), Comparison.GREATER)

    def test_ceiling_stops_doubling(self):
        close = Fraction(int(PI_60.replace(".", "")[:50]), 10**49)
        with self.assertRaises(PrecisionCeilingError):
            PiOracle(start_digits=8, max_digits=30).compare(close)


class CompareValueTests(SimpleTestCase):
    def test_radical_below_pi(self):
        il = Enclosure(
            lo=FixedDecimal.from_string("3.141533338705094"),
            hi=FixedDecimal.from_string("3.141533338705095"),
        )
        self.assertEqual(cmp_value_pi(il), Comparison.LESS)

    def test_bisection_ratio_above_pi(self):
        self.assertEqual(cmp_value_pi(Enclosure.from_rational(Fraction(3217, 1024), 10)), Comparison.GREATER)

    def test_wide_enclosure_is_inconclusive(self):
        self.assertEqual(
            cmp_value_pi(Enclosure(lo=FixedDecimal(3), hi=FixedDecimal(4))),
            Comparison.INCONCLUSIVE,
        )


class PiDigitsTests(SimpleTestCase):
    def test_reference_row(self):
        self.assertEqual(pi_digits(25), "3141592653589793238462643")

    def test_single_digit(self):
        self.assertEqual(pi_digits(1), "3")

    def test_agreeing_digits(self):
        self.assertEqual(agreeing_digits(FixedDecimal(3141592920353982, 15)), 7)
        self.assertEqual(agreeing_digits(FixedDecimal(4)), 0)
        self.assertEqual(agreeing_digits(_pi_prefix(40)), 41)

    def test_matches_second_identity_at_35(self):
        enc = cross_check_enclosure(45)
        expected = str(enc.lo).replace(".", "")[:35]
        self.assertEqual(pi_digits(35), expected)

    def test_prefix_property(self):
        oracle = PiOracle(start_digits=4)
        longest = oracle.digits(120)
        for n in [1, 2, 3, 10, 33, 64, 119]:
            with self.subTest(n=n):
                self.assertEqual(oracle.digits(n), longest[:n])
        self.assertEqual(longest[:60], PI_60.replace(".", "")[:60])

    def test_concurrent_readers_see_consistent_prefixes(self):
        oracle = PiOracle(start_digits=4)
        results: list[str] = []
        lock = threading.Lock()

        def read(n: int) -> None:
            value = oracle.digits(n)
            with lock:
                results.append(value)

        threads = [threading.Thread(target=read, args=(n,)) for n in range(5, 205, 10)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        longest = max(results, key=len)
        for value in results:
            self.assertTrue(longest.startswith(value))
