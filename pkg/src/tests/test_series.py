import random
import unittest
from fractions import Fraction

from mpmath import mp, mpf

from src.errors import InsufficientOrderError, SingularSeriesError
from src.series import (
    ExactSeries,
    PiQuadratic,
    apply_L,
    mul_kronecker,
    mul_schoolbook,
    pochhammer,
    series_exp,
    series_mul,
    series_pow,
    series_reciprocal,
    series_sqrt,
    theta_apply,
)


class TestPiQuadratic(unittest.TestCase):
    def test_arithmetic(self):
        x = PiQuadratic(1, Fraction(1, 2))
        y = PiQuadratic(Fraction(-1, 3), 2)
        self.assertEqual(x + y, PiQuadratic(Fraction(2, 3), Fraction(5, 2)))
        self.assertEqual(x - x, 0)
        self.assertEqual(x * 2, PiQuadratic(2, 1))
        self.assertEqual(x / 2, PiQuadratic(Fraction(1, 2), Fraction(1, 4)))
        self.assertFalse(PiQuadratic(0, 0))

    def test_pi4_rejected(self):
        with self.assertRaises(TypeError):
            PiQuadratic(0, 1) * PiQuadratic(0, 1)

    def test_value(self):
        with mp.workdps(40):
            self.assertLess(abs(PiQuadratic(-1, Fraction(1, 4)).value() - (mp.pi ** 2 / 4 - 1)), mpf(10) ** -35)


class TestExactSeries(unittest.TestCase):
    def test_pochhammer(self):
        self.assertEqual(pochhammer(Fraction(1, 2), 0), 1)
        self.assertEqual(pochhammer(Fraction(1, 2), 3), Fraction(15, 8))

    def test_reciprocal_geometric(self):
        inv = series_reciprocal(ExactSeries.from_polynomial([1, -1], 10))
        self.assertEqual(list(inv.coeffs), [1] * 11)

    def test_reciprocal_singular(self):
        with self.assertRaises(SingularSeriesError):
            series_reciprocal(ExactSeries((0, 1, 2)))

    def test_sqrt_squares_back(self):
        a = ExactSeries.from_polynomial([4, 3, Fraction(1, 2)], 15)
        root = series_sqrt(a)
        self.assertTrue(series_mul(root, root).equals_through(a, 15))

    def test_sqrt_non_square(self):
        with self.assertRaises(SingularSeriesError):
            series_sqrt(ExactSeries((2, 1)))

    def test_exp_of_variable(self):
        # exp(x) a pour coefficients 1/n!
        e = series_exp(ExactSeries.variable(8))
        self.assertEqual(e[5], Fraction(1, 120))

    def test_kronecker_matches_schoolbook(self):
        rng = random.Random(7)
        for _ in range(5):
            a = ExactSeries([rng.randint(-10 ** 6, 10 ** 6) for _ in range(40)])
            b = ExactSeries([Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(40)])
            self.assertEqual(mul_kronecker(a, b).coeffs, mul_schoolbook(a, b).coeffs)

    def test_pow_negative(self):
        a = ExactSeries.from_polynomial([1, 1], 12)
        self.assertTrue(series_mul(series_pow(a, -3), series_pow(a, 3)).equals_through(ExactSeries.constant(1, 12), 12))

    def test_prefactor_alignment(self):
        a = ExactSeries((1, 2, 3), Fraction(1, 2))
        b = ExactSeries((5, 6, 7), Fraction(3, 2))
        total = a + b
        self.assertEqual(total.prefactor, Fraction(1, 2))
        self.assertEqual(total.coeffs, (1, 7, 9))
        with self.assertRaises(ValueError):
            a + ExactSeries((1,), Fraction(1, 3))

    def test_div_x(self):
        with self.assertRaises(SingularSeriesError):
            ExactSeries((1, 2, 3)).div_x(1)
        self.assertEqual(ExactSeries((0, 2, 3)).div_x(1).coeffs, (2, 3))

    def test_truncate_beyond_order(self):
        with self.assertRaises(InsufficientOrderError):
            ExactSeries((1, 2)).truncate(5)

    def test_theta(self):
        self.assertEqual(theta_apply(ExactSeries((1, 1, 1, 1)), 2).coeffs, (0, 1, 4, 9))

    def test_apply_L_order(self):
        with self.assertRaises(InsufficientOrderError):
            apply_L(ExactSeries.constant(1, 5))

    def test_evaluate(self):
        with mp.workdps(30):
            s = ExactSeries((1, Fraction(1, 2), PiQuadratic(0, 1)))
            expected = 1 + mpf("0.5") * mpf("0.1") + mp.pi ** 2 * mpf("0.01")
            self.assertLess(abs(s.evaluate(mpf("0.1")) - expected), mpf(10) ** -25)


if __name__ == "__main__":
    unittest.main()
