from __future__ import annotations

from fractions import Fraction

from django.test import SimpleTestCase

from oracle.models import Comparison
from oracle.services import cmp_pi

from .models import BoundClass
from .services import (
    CFExpansion,
    ContinuedFractionTooShort,
    classify_bound,
    continued_fraction,
    convergents,
    pi_continued_fraction,
    semiconvergents,
)

PI_60 = Fraction(3141592653589793238462643383279502884197169399375105820974944, 10**60)


class RationalExpansionTests(SimpleTestCase):
    def test_archimedes(self):
        self.assertEqual(continued_fraction(Fraction(22, 7)), [3, 7])

    def test_round_trip_through_convergents(self):
        for value in [Fraction(355, 113), Fraction(1667438, 530762), Fraction(9691760, 3084983), Fraction(3)]:
            with self.subTest(value=value):
                self.assertEqual(convergents(continued_fraction(value))[-1], value)

    def test_convergent_recurrence(self):
        self.assertEqual(convergents([3, 7, 15, 1]), [Fraction(3), Fraction(22, 7), Fraction(333, 106), Fraction(355, 113)])


class PiExpansionTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.cf = pi_continued_fraction(12)

    def test_leading_terms(self):
        self.assertEqual(pi_continued_fraction(5).terms, (3, 7, 15, 1, 292))
        self.assertEqual(self.cf.terms, (3, 7, 15, 1, 292, 1, 1, 1, 2, 1, 3, 1))

    def test_convergents_include_table_ratios(self):
        for value in [Fraction(22, 7), Fraction(333, 106), Fraction(355, 113), Fraction(833719, 265381)]:
            with self.subTest(value=value):
                self.assertIn(value, self.cf.convergents)

    def test_convergents_alternate_around_pi(self):
        for index, value in enumerate(self.cf.convergents):
            with self.subTest(index=index):
                expected = Comparison.LESS if index % 2 == 0 else Comparison.GREATER
                self.assertEqual(cmp_pi(value), expected)

    def test_best_approximation_by_brute_force(self):
        for value in self.cf.convergents[1:]:
            if value.denominator > 1000:
                break
            error = abs(value - PI_60)
            with self.subTest(value=value):
                for q in range(1, value.denominator):
                    p = round(PI_60 * q)
                    self.assertLess(error, abs(Fraction(p, q) - PI_60))

    def test_independent_of_starting_precision(self):
        self.assertEqual(
            pi_continued_fraction(20, start_digits=64).terms,
            pi_continued_fraction(20, start_digits=256).terms,
        )

    def test_rejects_zero_terms(self):
        with self.assertRaises(ValueError):
            pi_continued_fraction(0)


class ClassifyBoundTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.cf = pi_continued_fraction(12)

    def test_convergents(self):
        self.assertEqual(classify_bound(Fraction(355, 113), self.cf), BoundClass.CONVERGENT)
        self.assertEqual(classify_bound(Fraction(3), self.cf), BoundClass.CONVERGENT)
        self.assertEqual(classify_bound(Fraction(1667438, 530762), self.cf), BoundClass.CONVERGENT)

    def test_semiconvergents(self):
        self.assertEqual(classify_bound(Fraction(25, 8), self.cf), BoundClass.SEMICONVERGENT)
        self.assertEqual(classify_bound(Fraction(4), self.cf), BoundClass.SEMICONVERGENT)
        self.assertIn(Fraction(25, 8), semiconvergents(self.cf))

    def test_other(self):
        self.assertEqual(classify_bound(Fraction(3217, 1024), self.cf), BoundClass.OTHER)

    def test_too_short(self):
        short = CFExpansion.from_terms([3, 7])
        with self.assertRaises(ContinuedFractionTooShort):
            classify_bound(Fraction(355, 113), short)
