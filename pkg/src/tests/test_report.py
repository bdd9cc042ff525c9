import json
import tempfile
import unittest
from pathlib import Path

from pydantic import ValidationError

from src.report import CheckItem, RunConfig, SuiteReport, write_report


class TestRunConfig(unittest.TestCase):
    def test_defaults(self):
        cfg = RunConfig()
        self.assertEqual(cfg.suite, "all")
        self.assertEqual(cfg.window_bounds, (200, 400))

    def test_invalid_values(self):
        with self.assertRaises(ValidationError):
            RunConfig(precision_digits=5)
        with self.assertRaises(ValidationError):
            RunConfig(suite="inconnue")
        with self.assertRaises(ValidationError):
            RunConfig(window="400:200")
        with self.assertRaises(ValidationError):
            RunConfig(output_format="xml")


class TestSuiteReport(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.out = Path(self.tmp.name) / "theorem1.json"
        self.failures = Path(self.tmp.name) / "theorem1_failures.json"

    def tearDown(self):
        self.tmp.cleanup()

    def test_status_validation(self):
        with self.assertRaises(ValidationError):
            CheckItem(name="x", status="ok")

    def test_passed_and_first_failure(self):
        report = SuiteReport(suite="theorem1")
        report.check("ordre 40", True, "résidu nul")
        self.assertTrue(report.passed)
        self.assertIsNone(report.first_failure)
        report.check("signes", False, "n = 3", status_on_failure="violation")
        report.check("ignoré", False, status_on_failure="skipped")
        self.assertFalse(report.passed)
        self.assertEqual(report.first_failure.name, "signes")

    def test_extend(self):
        outer = SuiteReport(suite="all")
        inner = SuiteReport(suite="lemma2", scale={"samples": 5})
        inner.check("translation", True)
        outer.extend(inner)
        self.assertEqual(outer.items[0].name, "lemma2: translation")
        self.assertEqual(outer.scale["lemma2"], {"samples": 5})

    def test_write_report_without_failures(self):
        report = SuiteReport(suite="theorem1")
        report.check("ordre 40", True)
        write_report(report, str(self.out))
        data = json.loads(self.out.read_text(encoding="utf8"))
        self.assertEqual(data["suite"], "theorem1")
        self.assertEqual(data["items"][0]["status"], "pass")
        self.assertFalse(self.failures.exists())

    def test_write_report_with_failures(self):
        report = SuiteReport(suite="theorem1")
        report.check("ordre 40", True)
        report.check("π² nul", False, "ordre 7")
        write_report(report, str(self.out))
        failures = json.loads(self.failures.read_text(encoding="utf8"))
        self.assertEqual(len(failures), 1)
        self.assertEqual(failures[0]["index"], 1)
        self.assertEqual(failures[0]["error_type"], "fail")
        self.assertIn("ordre 7", failures[0]["error"])


if __name__ == "__main__":
    unittest.main()
