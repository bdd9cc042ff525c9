import unittest
from fractions import Fraction

from mpmath import mp, mpf
from pydantic import ValidationError

from src.errors import DomainError
from src.precision import (
    PrecisionContext,
    agm,
    elliptic_I1,
    gamma_quarter,
    gamma_rational,
    mpf_to_fraction,
    nome_from_f,
    to_big_real,
)


class TestPrecisionContext(unittest.TestCase):
    def test_working_digits(self):
        ctx = PrecisionContext(digits=30)
        self.assertEqual(ctx.working_digits, 50)
        self.assertEqual(ctx.inner().working_digits, 50)
        self.assertEqual(ctx.inner().guard, 0)

    def test_invalid_digits(self):
        with self.assertRaises(ValidationError):
            PrecisionContext(digits=5)
        with self.assertRaises(ValidationError):
            PrecisionContext(digits=30, guard=-1)

    def test_frozen(self):
        ctx = PrecisionContext(digits=30)
        with self.assertRaises(ValidationError):
            ctx.digits = 40

    def test_decimal_string_is_exact(self):
        ctx = PrecisionContext(digits=40)
        with ctx.workdps():
            self.assertEqual(to_big_real("0.3", ctx), mpf(3) / 10)
            self.assertEqual(to_big_real(Fraction(1, 3), ctx), mpf(1) / 3)

    def test_mpf_to_fraction(self):
        self.assertEqual(mpf_to_fraction(mpf(0.75)), Fraction(3, 4))
        self.assertEqual(mpf_to_fraction(mpf(12)), Fraction(12))


class TestAgm(unittest.TestCase):
    def setUp(self):
        self.ctx = PrecisionContext(digits=40)

    def test_fixed_point(self):
        self.assertEqual(agm(1, 1, self.ctx), 1)

    def test_ratio_at_critical_modulus(self):
        with mp.workdps(60):
            f0 = mp.sqrt(2) - 1
            ratio = agm(1 + f0, 1 - f0, self.ctx) / agm(1, f0, self.ctx)
            self.assertLess(abs(ratio - mp.sqrt(2)), mpf(10) ** -38)

    def test_gauss_relation(self):
        # a·π/(2·agm(a, b)) = I₁(b/a)
        with mp.workdps(60):
            lhs = 3 * mp.pi / (2 * agm(3, 2, self.ctx))
            integrand = lambda t: 1 / mp.sqrt(mp.cos(t) ** 2 + (mpf(2) / 3) ** 2 * mp.sin(t) ** 2)
            rhs = mp.quad(integrand, [0, mp.pi / 2])
            self.assertLess(abs(lhs - rhs), mpf(10) ** -35)

    def test_small_argument(self):
        value = agm(1, mpf(10) ** -30, self.ctx)
        self.assertGreater(value, 0)
        self.assertLess(value, 1)

    def test_non_positive_rejected(self):
        with self.assertRaises(DomainError):
            agm(0, 1, self.ctx)
        with self.assertRaises(DomainError):
            agm(1, -2, self.ctx)


class TestEllipticAndGamma(unittest.TestCase):
    def setUp(self):
        self.ctx = PrecisionContext(digits=40)

    def test_i1_at_one(self):
        with mp.workdps(60):
            self.assertLess(abs(elliptic_I1(1, self.ctx) - mp.pi / 2), mpf(10) ** -38)

    def test_i1_against_quadrature(self):
        with mp.workdps(60):
            integrand = lambda t: 1 / mp.sqrt(mp.cos(t) ** 2 + mpf("0.25") * mp.sin(t) ** 2)
            expected = mp.quad(integrand, [0, mp.pi / 2])
            self.assertLess(abs(elliptic_I1("0.5", self.ctx) - expected), mpf(10) ** -35)

    def test_i1_domain(self):
        with self.assertRaises(DomainError):
            elliptic_I1(0, self.ctx)

    def test_gamma_quarter(self):
        with mp.workdps(60):
            self.assertLess(abs(gamma_quarter(self.ctx) - mp.gamma(mpf(1) / 4)), mpf(10) ** -38)

    def test_gamma_rational(self):
        with mp.workdps(60):
            self.assertLess(abs(gamma_rational(Fraction(1, 2), self.ctx) - mp.sqrt(mp.pi)), mpf(10) ** -38)
        with self.assertRaises(DomainError):
            gamma_rational(0, self.ctx)

    def test_nome_at_critical_modulus(self):
        with mp.workdps(60):
            q = nome_from_f(mp.sqrt(2) - 1, self.ctx)
            self.assertLess(abs(q - mp.exp(-mp.pi * mp.sqrt(2))), mpf(10) ** -38)
        with self.assertRaises(DomainError):
            nome_from_f(1, self.ctx)


if __name__ == "__main__":
    unittest.main()
