import unittest
from fractions import Fraction

from mpmath import mp, mpf

from src.config import Config
from src.errors import DomainError, InsufficientOrderError
from src.laurent import (
    L_SYM,
    EisensteinPoly,
    cn_asymptotic_check,
    cn_properties,
    derivative_series_check,
    eisenstein_at_q0,
    eisenstein_qexp,
    first_term_approximation,
    laurent_initial_values,
    phi_laurent,
    ramanujan_derive,
    sum_rule_check,
    taylor_from_derivatives,
    taylor_from_series,
)
from src.precision import PrecisionContext, gamma_quarter

C_FIRST = [
    Fraction(7, 15),
    Fraction(57, 175),
    Fraction(47953, 482625),
    Fraction(28647821, 1206079875),
    Fraction(21064211, 3897196875),
    Fraction(140089261833377, 118706391513084375),
    Fraction(7572730553099, 30813510149296875),
    Fraction(7162997611208195563, 144310550800696358203125),
]


class TestEisenstein(unittest.TestCase):
    def setUp(self):
        self.ctx = PrecisionContext(digits=30)

    def test_qexp(self):
        self.assertEqual(eisenstein_qexp("L", 3).coeffs, (1, -24, -72, -96))
        self.assertEqual(eisenstein_qexp("M", 2).coeffs, (1, 240, 2160))
        with self.assertRaises(DomainError):
            eisenstein_qexp("P", 3)

    def test_ramanujan_weight(self):
        derived = ramanujan_derive(EisensteinPoly.from_expr(L_SYM))
        self.assertTrue(derived.is_homogeneous)
        self.assertEqual(derived.weight, 4)

    def test_values_at_q0(self):
        self.assertLess(eisenstein_at_q0(self.ctx).max_residual, mpf(10) ** -25)

    def test_initial_values(self):
        for name, residual in laurent_initial_values(self.ctx).items():
            with self.subTest(name=name):
                self.assertLess(residual, mpf(10) ** -25)

    def test_derivative_series(self):
        self.assertTrue(all(derivative_series_check(30).values()))

    def test_two_taylor_methods(self):
        by_derivatives = taylor_from_derivatives(1, 6, self.ctx)
        by_series = taylor_from_series(1, 6, self.ctx)
        for k in range(7):
            with self.subTest(k=k):
                self.assertLess(abs(by_derivatives[k] - by_series[k]), mpf(10) ** -20)


class TestLaurentCoefficients(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.result = phi_laurent(8, PrecisionContext(digits=30))

    def test_first_coefficients(self):
        self.assertEqual(self.result.c, C_FIRST)

    def test_D_closed_form(self):
        with mp.workdps(60):
            expected = gamma_quarter(PrecisionContext(digits=50)) ** 16 / (2 ** 14 * mp.pi ** 8)
            self.assertLess(abs(self.result.D - expected), mpf(10) ** -40)

    def test_properties(self):
        for row in cn_properties(self.result):
            with self.subTest(n=row.n):
                self.assertTrue(row.odd_ratio)
                self.assertTrue(row.small_primes)

    def test_sum_rule(self):
        report = sum_rule_check(self.result, target_digits=20)
        self.assertEqual(report.n_exact, 8)
        self.assertLess(report.deviation, mpf(10) ** -6)
        self.assertLess(first_term_approximation(self.result), 1)

    def test_asymptotics_needs_ten_terms(self):
        with self.assertRaises(InsufficientOrderError):
            cn_asymptotic_check(self.result)

    def test_invalid_order(self):
        with self.assertRaises(InsufficientOrderError):
            phi_laurent(0)



class TestLaurentTwentyCoefficients(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.result = phi_laurent(20, PrecisionContext(digits=30))

    def test_prefix_unchanged(self):
        self.assertEqual(self.result.c[:8], C_FIRST)
        self.assertEqual(self.result.digits, 240)

    def test_all_properties(self):
        for row in cn_properties(self.result, 20):
            with self.subTest(n=row.n):
                self.assertTrue(row.odd_ratio)
                self.assertTrue(row.small_primes)
                self.assertTrue(row.squarefree_factorial)

    def test_asymptotic_envelope(self):
        rows = [row for row in cn_asymptotic_check(self.result) if 10 <= row.n <= 20]
        self.assertEqual(len(rows), 11)
        for row in rows:
            with self.subTest(n=row.n):
                self.assertTrue(row.within_envelope, row.ratio_error)


class TestSumRule(unittest.TestCase):
    def test_forty_digits(self):
        result = phi_laurent(Config.SUM_RULE_N_EXACT, PrecisionContext(digits=30))
        report = sum_rule_check(result, target_digits=40)
        self.assertEqual(report.n_exact, Config.SUM_RULE_N_EXACT)
        self.assertLess(report.deviation, mpf(10) ** -40)

if __name__ == "__main__":
    unittest.main()
