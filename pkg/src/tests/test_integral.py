import unittest
from fractions import Fraction

from mpmath import mp, mpf

from src.errors import PoleError, UnsupportedPrecisionError
from src.integral import (
    KAPPA,
    a_coeffs,
    hall_relation_check,
    i2_eval,
    i2_quadrature,
    i2_residual_at,
    i2_series,
    j_function,
    kappa_normalisation,
    reduce_f,
    t_coeffs,
    verify_theorem1,
    verify_theorem2,
    y_coeffs,
    y_eval,
    y_from_i2,
)
from src.precision import PrecisionContext
from src.series import PiQuadratic


class TestCoefficients(unittest.TestCase):
    def test_a_coeffs(self):
        self.assertEqual(a_coeffs(2), [Fraction(1), Fraction(4, 9), Fraction(89, 225)])

    def test_t_coeffs(self):
        self.assertEqual(t_coeffs(2), [0, Fraction(1, 2), Fraction(1, 2)])

    def test_y_coeffs(self):
        s0 = y_coeffs(1)
        self.assertEqual(s0[0], PiQuadratic(0, Fraction(1, 2)))
        self.assertEqual(s0[1], PiQuadratic(-1, Fraction(1, 4)))

    def test_i2_series_constant_term(self):
        self.assertEqual(i2_series(6)[0], PiQuadratic(0, Fraction(1, 8)))


class TestDifferentialEquations(unittest.TestCase):
    def test_theorem1(self):
        residual = verify_theorem1(40)
        self.assertTrue(residual.is_zero, residual.nonzero_orders)
        self.assertTrue(residual.pi_zero)

    def test_theorem2(self):
        residual = verify_theorem2(50)
        self.assertTrue(residual.is_zero, residual.nonzero_orders)

    def test_kappa(self):
        self.assertEqual(kappa_normalisation(PrecisionContext(digits=30)), KAPPA)


class TestEvaluation(unittest.TestCase):
    def setUp(self):
        self.ctx = PrecisionContext(digits=40)
        self.tol = mpf(10) ** -35

    def test_endpoints(self):
        with mp.workdps(60):
            self.assertLess(abs(i2_eval(0, self.ctx) - mp.pi ** 2 / 8), self.tol)
            self.assertLess(abs(i2_eval(1, self.ctx) - mp.pi ** 2 / 8), self.tol)

    def test_extreme_arguments(self):
        with mp.workdps(60):
            self.assertLess(abs(i2_eval("1e-400", self.ctx) - mp.pi ** 2 / 8), self.tol)
            scaled = i2_eval("1e200", self.ctx) * mpf(10) ** 200
            self.assertLess(abs(scaled - mp.pi ** 2 / 8), self.tol)
            self.assertLess(abs(i2_eval("-1e-400", self.ctx) - mp.pi ** 2 / 8), self.tol)

    def test_pole(self):
        with self.assertRaises(PoleError):
            i2_eval(-1, self.ctx)

    def test_reduction_plan(self):
        self.assertEqual(reduce_f("0.2", self.ctx).kinds, [])
        self.assertEqual(reduce_f(3, self.ctx).kinds, ["inverse"])
        self.assertEqual(reduce_f("-0.5", self.ctx).kinds, ["negative", "involution"])
        self.assertEqual(reduce_f("0.9", self.ctx).kinds, ["involution"])

    def test_involution(self):
        for f in ("0.3", "0.5", Fraction(2, 7), "0.9"):
            with self.subTest(f=f):
                self.assertLess(i2_residual_at(f, self.ctx), self.tol)

    def test_j_function(self):
        with mp.workdps(60):
            self.assertLess(abs(j_function(0, self.ctx) - mp.pi ** 2 / 4), self.tol)

    def test_negative_branch_against_quadrature(self):
        with mp.workdps(40):
            delta = abs(i2_eval("-0.2", self.ctx) - i2_quadrature("-0.2", 15))
        self.assertLess(delta, mpf(10) ** -12)

    def test_critical_modulus_closed_form(self):
        with mp.workdps(60):
            closed = mp.pi / (48 * mp.sqrt(2)) * (mp.gamma(mpf(1) / 8) / mp.gamma(mpf(5) / 8)) ** 2
            self.assertLess(abs(i2_eval(mp.sqrt(2) - 1, self.ctx) - closed), self.tol)

    def test_hall_relation(self):
        self.assertLess(hall_relation_check(self.ctx), self.tol)

    def test_quadrature_oracle(self):
        for f in ("0.1", "0.3", "0.55", "-0.4"):
            with self.subTest(f=f), mp.workdps(40):
                delta = abs(i2_eval(f, self.ctx) - i2_quadrature(f, 30))
                self.assertLess(delta, mpf(10) ** -25)

    def test_quadrature_precision_cap(self):
        with self.assertRaises(UnsupportedPrecisionError):
            i2_quadrature("0.3", 60)

    def test_y_from_i2(self):
        with mp.workdps(60):
            h, value = y_from_i2("0.2", self.ctx)
            series, tail = y_eval(h, self.ctx)
            self.assertLess(abs(series - value), mpf(10) ** -30)


if __name__ == "__main__":
    unittest.main()
