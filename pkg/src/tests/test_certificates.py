import unittest
from fractions import Fraction

from mpmath import mp, mpf

from src.certificates import (
    A_nm,
    a_term,
    ir_grid,
    r3_grid,
    s2_coeffs,
    shifted_combination_check,
    t_generating_series,
    telescoping_certificate,
    telescoping_grid,
    telescoping_random,
    verify_eq1_end_to_end,
    verify_IR,
    verify_moment_sums,
    verify_pochhammer_identities,
    verify_s2_relation,
    verify_T_recursion,
    y_normalisation_delta,
)
from src.errors import DomainError
from src.integral import t_coeffs, y_coeffs
from src.precision import PrecisionContext
from src.series import PiQuadratic


class TestExactCertificates(unittest.TestCase):
    def test_a_term(self):
        self.assertEqual(a_term(0, 0, 0), 4)
        with self.assertRaises(DomainError):
            a_term(2, 3, 0)

    def test_telescoping(self):
        self.assertTrue(telescoping_certificate(0, 0, 0))
        self.assertTrue(telescoping_grid(6, 6).passed)
        self.assertTrue(telescoping_random(20, bound=30, seed=1).passed)

    def test_ir(self):
        report = verify_IR(1)
        self.assertTrue(report.passed)
        self.assertTrue(ir_grid(20).passed)
        with self.assertRaises(DomainError):
            verify_IR(0)

    def test_s2(self):
        self.assertEqual(s2_coeffs(1)[1], PiQuadratic(Fraction(-1, 2), Fraction(1, 8)))
        self.assertTrue(verify_s2_relation(20).passed)

    def test_T(self):
        self.assertEqual(list(t_generating_series(10).coeffs), t_coeffs(10))
        self.assertTrue(verify_T_recursion(20, gf_order=20).passed)

    def test_pochhammer(self):
        self.assertTrue(verify_pochhammer_identities(10).passed)


class TestKSums(unittest.TestCase):
    def setUp(self):
        self.ctx = PrecisionContext(digits=20)

    def test_A00(self):
        ks = A_nm(0, 0, ctx=self.ctx)
        self.assertEqual(ks.method, "euler-maclaurin")
        self.assertLess(ks.tail_bound, mpf(10) ** -19)
        with mp.workdps(40):
            self.assertLess(abs(ks.value - mp.pi ** 2 / 2), mpf(10) ** -19)

    def test_A00_at_thirty_digits(self):
        ctx = PrecisionContext(digits=30)
        ks = A_nm(0, 0, ctx=ctx)
        with mp.workdps(50):
            self.assertLess(abs(ks.value - mp.pi ** 2 / 2), mpf(10) ** -29)

    def test_slow_decay_uses_integral_tail(self):
        ks = A_nm(1, 0, ctx=self.ctx)
        self.assertEqual(ks.method, "euler-maclaurin")
        direct = A_nm(1, 0, ctx=self.ctx, tolerance=mpf(10) ** -6, max_terms=10 ** 7)
        self.assertEqual(direct.method, "certified")
        with mp.workdps(40):
            self.assertLess(abs(ks.value - direct.value), direct.tail_bound + ks.tail_bound)

    def test_empty(self):
        ks = A_nm(3, 5, ctx=self.ctx)
        self.assertEqual((ks.method, ks.value), ("empty", 0))

    def test_certified_with_bound(self):
        ks = A_nm(6, 2, ctx=self.ctx)
        self.assertEqual(ks.method, "certified")
        self.assertLess(ks.tail_bound, mpf(10) ** -20)

    def test_symmetry(self):
        with mp.workdps(40):
            delta = abs(A_nm(7, 2, ctx=self.ctx).value - A_nm(7, 5, ctx=self.ctx).value)
        self.assertLess(delta, mpf(10) ** -18)

    def test_sum_over_m(self):
        with mp.workdps(40):
            total = mp.fsum(A_nm(5, m, ctx=self.ctx).value for m in range(6))
            expected = y_coeffs(5)[5].value(self.ctx)
            self.assertLess(abs(total - expected), mpf(10) ** -16)

    def test_recursions(self):
        self.assertTrue(r3_grid(6, self.ctx).passed)
        self.assertTrue(shifted_combination_check(5, self.ctx).passed)
        self.assertTrue(verify_moment_sums(5, self.ctx).passed)


class TestEndToEnd(unittest.TestCase):
    def test_h_zero(self):
        report = verify_eq1_end_to_end(0, PrecisionContext(digits=15))
        self.assertTrue(report.passed)

    def test_h_positive(self):
        report = verify_eq1_end_to_end("0.3", PrecisionContext(digits=15))
        self.assertTrue(report.passed, report.max_delta)

    def test_out_of_range(self):
        with self.assertRaises(DomainError):
            verify_eq1_end_to_end("1.5", PrecisionContext(digits=15))

    def test_normalisation(self):
        self.assertLess(y_normalisation_delta("0.2", PrecisionContext(digits=30)), mpf(10) ** -25)


if __name__ == "__main__":
    unittest.main()
