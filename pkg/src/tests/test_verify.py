import unittest

from unittest.mock import patch

from src.config import Config
from src.errors import ConsistencyError
from src.report import RunConfig, SuiteReport
from src.verify import _guarded, run_suite, suite_laurent


class TestVerificationSuites(unittest.TestCase):
    def test_theorem_suites(self):
        for suite in ("theorem1", "theorem2"):
            with self.subTest(suite=suite):
                report = run_suite(RunConfig(suite=suite, precision_digits=30))
                self.assertTrue(report.passed, report.first_failure)
                self.assertGreater(len(report.items), 0)

    def test_involution_suite_runs_oracle(self):
        report = run_suite(RunConfig(suite="involution", precision_digits=40))
        self.assertTrue(report.passed, report.first_failure)
        oracle_items = [item for item in report.items if item.name.startswith("oracle en f")]
        self.assertEqual(len(oracle_items), 4)
        self.assertEqual(report.scale["oracle_points"], 4)

    def test_lemma2_suite(self):
        report = run_suite(RunConfig(suite="lemma2", precision_digits=30, seed=3))
        self.assertTrue(report.passed, report.first_failure)

    def test_guarded_step(self):
        report = SuiteReport(suite="theorem1")

        def failing():
            raise ConsistencyError("tables incohérentes")

        _guarded(report, "étape", failing)
        self.assertFalse(report.passed)
        self.assertIn("ConsistencyError", report.first_failure.detail)

    @patch("src.verify.eisenstein_at_q0", side_effect=ConsistencyError("arrêt"))
    @patch("src.verify.phi_laurent", side_effect=ConsistencyError("arrêt"))
    def test_laurent_suite_default_size(self, mock_laurent, _mock_eisenstein):
        with patch.object(Config, "LAURENT_N_MAX", 20):
            report = suite_laurent(RunConfig(suite="laurent", precision_digits=30))
        self.assertEqual(mock_laurent.call_args.args[0], 20)
        self.assertEqual(report.scale, {"n_max": 20, "sum_rule_n_exact": Config.SUM_RULE_N_EXACT})
        self.assertFalse(report.passed)


if __name__ == "__main__":
    unittest.main()
