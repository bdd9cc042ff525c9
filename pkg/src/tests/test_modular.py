import unittest
from fractions import Fraction

from mpmath import mp, mpc, mpf

from src.errors import DomainError, PoleError
from src.modular import (
    cm_phi_values,
    cm_table,
    _eta_series,
    eta_eval,
    eta_qexp,
    exact_zero,
    expected_cm_r_values,
    j_factorisations,
    j_invariant,
    phi_eval,
    phi_from_table,
    phi_qexp,
    psi_qexp,
    r_symmetries,
    special_psi_values,
    triple_sum_eval,
    triple_sum_reference,
    verify_lemma2,
)
from src.precision import PrecisionContext

A_FIRST = [
    1, -44, 1126, -27096, 640909, -15036548, 351245038,
    -8183857544, 190367634194, -4423279591132,
]


class TestFourierTable(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.table = phi_qexp(120)

    def test_first_coefficients(self):
        self.assertEqual(self.table.A[:10], A_FIRST)

    def test_integrality_and_signs(self):
        self.assertTrue(self.table.integral)
        self.assertEqual(self.table.sign_pattern_violations(), [])

    def test_invalid_order(self):
        with self.assertRaises(DomainError):
            phi_qexp(0)

    def test_eta_pentagonal(self):
        self.assertEqual(eta_qexp(1, 10).coeffs, (1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0))
        self.assertEqual(eta_qexp(1, 10).prefactor, Fraction(1, 24))

    def test_psi_leading_term(self):
        psi = psi_qexp(5)
        self.assertEqual(psi.prefactor, 1)
        self.assertEqual(psi[0], 64)

    def test_pointwise_matches_series(self):
        ctx = PrecisionContext(digits=40)
        tau = mpc("0.1", "0.9")
        with mp.workdps(60):
            delta = abs(phi_eval(tau, ctx) - phi_from_table(tau, self.table, ctx))
        self.assertLess(delta, mpf(10) ** -35)

    def test_triple_sum_pi_squared_over_24(self):
        ctx = PrecisionContext(digits=40)
        with mp.workdps(60):
            q = mp.exp(-mp.pi * mp.sqrt(2))
            value = triple_sum_eval(q, self.table, ctx)
            self.assertLess(abs(mp.pi ** 2 / 8 - value - mp.pi ** 2 / 24), mpf(10) ** -35)
            reference = triple_sum_reference(mp.sqrt(2) - 1, ctx)
            self.assertLess(abs(value - reference), mpf(10) ** -35)


class TestPointValues(unittest.TestCase):
    def setUp(self):
        self.ctx = PrecisionContext(digits=30)

    def test_lemma2(self):
        for tau in (mpc("0.1", "0.9"), mpc("-0.3", "0.6"), mpc(0, 2)):
            with self.subTest(tau=tau):
                self.assertTrue(verify_lemma2(tau, self.ctx).passed)

    def test_pole(self):
        with self.assertRaises(PoleError):
            phi_eval(mpc("0.5", "0.5"), self.ctx)

    def test_lower_half_plane(self):
        with self.assertRaises(DomainError):
            phi_eval(mpc(0, -1), self.ctx)

    def test_eta_near_real_axis(self):
        with mp.workdps(70):
            eps = mpf(10) ** -70
            for level, tau in ((1, mpc("0.1", "0.01")), (1, mpc("-0.37", "0.02")), (2, mpc("0.5", "0.008"))):
                with self.subTest(level=level, tau=tau):
                    reduced = eta_eval(level, tau, self.ctx)
                    direct = _eta_series(level * tau, eps)
                    self.assertLess(abs(reduced - direct), abs(direct) * mpf(10) ** -25)

    def test_eta_modular_inversion(self):
        with mp.workdps(60):
            tau = mpc("0.2", "0.001")
            value = eta_eval(1, tau, self.ctx)
            inverted = eta_eval(1, -1 / tau, self.ctx)
            self.assertLess(abs(inverted - mp.sqrt(-1j * tau) * value), abs(inverted) * mpf(10) ** -30)

    def test_cm_values(self):
        for name, residual in cm_phi_values(self.ctx).items():
            with self.subTest(name=name):
                self.assertLess(residual, mpf(10) ** -25)

    def test_special_psi_values(self):
        for name, residual in special_psi_values(self.ctx).items():
            with self.subTest(name=name):
                self.assertLess(residual, mpf(10) ** -25)


class TestExactValues(unittest.TestCase):
    def test_cm_table(self):
        records = {record.k: record for record in cm_table()}
        self.assertEqual(sorted(records), [-3, -2, -1, 0, 1, 2, 3])
        self.assertTrue(exact_zero(records[0].R_k))
        for k, expected in expected_cm_r_values().items():
            with self.subTest(k=k):
                self.assertTrue(exact_zero(records[k].R_k - expected))

    def test_j_invariant(self):
        self.assertEqual(j_invariant(Fraction(1, 8)), 12 ** 3)
        with self.assertRaises(PoleError):
            j_invariant(0)

    def test_identities(self):
        self.assertTrue(all(j_factorisations().values()))
        self.assertTrue(all(r_symmetries().values()))


class TestFourierTableThousand(unittest.TestCase):
    def test_integrality_and_signs_to_thousand(self):
        table = phi_qexp(1000)
        self.assertEqual(len(table.A), 1001)
        self.assertEqual(table.A[:10], A_FIRST)
        self.assertEqual(table.violations, [])
        self.assertEqual(table.sign_pattern_violations(), [])


if __name__ == "__main__":
    unittest.main()
