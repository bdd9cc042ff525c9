import unittest

from mpmath import mp, mpf

from src.asymptotics import (
    C_coeff,
    E,
    build_model,
    coprime_square_decompositions,
    cosine_identity_check,
    fit_unknown_C,
    in_s_sequence,
    locate_singularity,
    r_of_m,
    residual_scan,
    s_sequence,
    singularities_for,
)
from src.errors import ConstructionError, DomainError
from src.modular import phi_qexp
from src.precision import PrecisionContext


class TestSequence(unittest.TestCase):
    def test_first_entries(self):
        self.assertEqual(
            s_sequence(100)[:15],
            [1, 5, 13, 17, 25, 29, 37, 41, 53, 61, 65, 73, 85, 89, 97],
        )

    def test_membership(self):
        self.assertTrue(in_s_sequence(65))
        self.assertFalse(in_s_sequence(15))
        self.assertTrue(in_s_sequence(160225))

    def test_decompositions(self):
        self.assertEqual(coprime_square_decompositions(5), [(1, 2)])
        self.assertEqual(coprime_square_decompositions(65), [(1, 8), (7, 4)])
        self.assertEqual(coprime_square_decompositions(25), [(3, 4)])
        with self.assertRaises(DomainError):
            coprime_square_decompositions(15)

    def test_E(self):
        self.assertEqual(E(1), 0)
        with self.assertRaises(DomainError):
            E(0)


class TestSingularities(unittest.TestCase):
    def test_locate(self):
        datum = locate_singularity(1, 2)
        self.assertEqual(datum.matrix, (1, 0, 2, 1))
        self.assertEqual((datum.m, datum.w, datum.r), (5, 3, 1))
        self.assertTrue(datum.maps_base_point())

    def test_locate_invalid(self):
        with self.assertRaises(ConstructionError):
            locate_singularity(2, 3)

    def test_one_sign_per_decomposition(self):
        for m in (5, 13, 65, 85, 1105):
            with self.subTest(m=m):
                report = singularities_for(m)
                self.assertEqual(report.violations, [])
                self.assertTrue(all(datum.maps_base_point() for datum in report.data))

    def test_r_values(self):
        for m, r in {5: 1, 13: 4, 65: 7, 1105: 216, 2017: 894, 160225: 2999}.items():
            with self.subTest(m=m):
                self.assertEqual(r_of_m(m), r)

    def test_cosine_identity(self):
        self.assertTrue(cosine_identity_check(65).holds)
        self.assertTrue(cosine_identity_check(1105).holds)
        numeric = cosine_identity_check(65, mode="numeric", ctx=PrecisionContext(digits=20))
        self.assertTrue(numeric.holds)
        with self.assertRaises(DomainError):
            cosine_identity_check(65, mode="approx")

    def test_cosine_identity_numeric_sweep(self):
        ctx = PrecisionContext(digits=15, guard=5)
        members = [m for m in s_sequence(300) if m >= 5]
        failures = [m for m in members if not cosine_identity_check(m, mode="numeric", ctx=ctx).holds]
        self.assertEqual(failures, [])

    def test_cosine_identity_rejects_wrong_r(self):
        ctx = PrecisionContext(digits=15, guard=5)
        self.assertFalse(cosine_identity_check(65, r=1, mode="numeric", ctx=ctx).holds)
        self.assertFalse(cosine_identity_check(65, r=1).holds)

    def test_C_coeff_matches_singularity_sum(self):
        ctx = PrecisionContext(digits=30)
        for m in (13, 65, 85, 1105):
            r_j = singularities_for(m).r_values
            with mp.workdps(40):
                for n in range(12):
                    with self.subTest(m=m, n=n):
                        expected = mp.fsum(2 * mp.cos((2 * n + 1 - m) * rj * mp.pi / m) for rj in r_j)
                        self.assertLess(abs(C_coeff(m, n, ctx=ctx) - expected), mpf(10) ** -25)

    def test_C_coeff(self):
        ctx = PrecisionContext(digits=30)
        self.assertEqual(C_coeff(1, 7), 1)
        self.assertEqual(C_coeff(15, 7), 0)
        with mp.workdps(40):
            for n in range(10):
                expected = 2 * mp.cos(2 * (n - 2) * mp.pi / 5)
                self.assertLess(abs(C_coeff(5, n, ctx=ctx) - expected), mpf(10) ** -25)


class TestModel(unittest.TestCase):
    def test_build_model(self):
        model = build_model(200, show_progress=False)
        self.assertEqual(model.violations, [])
        self.assertEqual(model.r(5), 1)
        self.assertEqual(model.r(65), 7)
        with self.assertRaises(DomainError):
            model.r(15)

    def test_residual_coverage(self):
        table = phi_qexp(260)
        single = residual_scan(table, (200, 260), 1, show_progress=False)
        self.assertGreater(single.mean_coverage, 0.77)
        self.assertLess(single.mean_coverage, 0.83)
        richer = residual_scan(table, (200, 260), 5, show_progress=False)
        self.assertGreater(richer.mean_coverage, single.mean_coverage)

    def test_fit_unknown_C(self):
        table = phi_qexp(260)
        fit = fit_unknown_C(table, (200, 260), 5)
        self.assertEqual(sorted(fit.estimates), list(range(5)))
        self.assertLess(fit.max_error, 1e-4)
        absent = fit_unknown_C(table, (200, 260), 7)
        self.assertTrue(all(value == 0.0 for value in absent.expected.values()))
        self.assertLess(absent.max_error, 1e-4)


if __name__ == "__main__":
    unittest.main()
