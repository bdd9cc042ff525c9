import io
import json
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path
from unittest.mock import patch

from src.main import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from src.report import SuiteReport


def run_cli(*argv):
    """Exécute la CLI et retourne (code, sortie standard)."""
    out = io.StringIO()
    with redirect_stdout(out), redirect_stderr(io.StringIO()):
        code = main(list(argv))
    return code, out.getvalue()


class TestEvalCommand(unittest.TestCase):
    def test_eval_zero(self):
        code, out = run_cli("eval", "--f", "0", "--prec", "30", "--format", "text")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("1.233700550136169827354311374", out)

    def test_eval_json_trace(self):
        code, out = run_cli("eval", "--f", "0.9", "--prec", "20")
        self.assertEqual(code, EXIT_OK)
        result = json.loads(out)
        self.assertEqual([step["kind"] for step in result["trace"]], ["involution"])

    def test_eval_pole(self):
        code, _ = run_cli("eval", "--f", "-1")
        self.assertEqual(code, EXIT_USAGE)

    def test_eval_invalid_precision(self):
        code, _ = run_cli("eval", "--f", "0.3", "--prec", "5")
        self.assertEqual(code, EXIT_USAGE)


class TestVerifyCommand(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.out = Path(self.tmp.name) / "lemma2.json"

    def tearDown(self):
        self.tmp.cleanup()

    def test_unknown_suite(self):
        with self.assertRaises(SystemExit) as ctx, redirect_stderr(io.StringIO()):
            main(["verify", "--suite", "inconnue"])
        self.assertEqual(ctx.exception.code, 2)

    @patch("src.main.run_suite")
    def test_verify_failure_exit_code(self, mock_run):
        report = SuiteReport(suite="lemma2")
        report.check("translation", True)
        report.check("Fricke", False, "résidu 1e-3")
        mock_run.return_value = report

        code, out = run_cli("verify", "--suite", "lemma2", "--out", str(self.out))
        self.assertEqual(code, EXIT_FAILED)
        self.assertFalse(json.loads(out)["passed"])
        self.assertTrue(self.out.exists())
        self.assertTrue((Path(self.tmp.name) / "lemma2_failures.json").exists())
        self.assertEqual(mock_run.call_args.args[0].suite, "lemma2")

    @patch("src.main.run_suite")
    def test_verify_success_text(self, mock_run):
        report = SuiteReport(suite="lemma2")
        report.check("translation", True)
        mock_run.return_value = report

        code, out = run_cli("verify", "--suite", "lemma2", "--out", str(self.out), "--format", "text")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("SUCCÈS", out)


class TestCoeffsCommand(unittest.TestCase):
    def test_coeffs_csv_stdout(self):
        code, out = run_cli("coeffs", "--kind", "a", "--count", "3", "--format", "csv")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out.splitlines(), ["n,value", "0,1", "1,4/9", "2,89/225"])

    def test_coeffs_json_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "A.json"
            code, _ = run_cli("coeffs", "--kind", "A", "--count", "4", "--out", str(path))
            self.assertEqual(code, EXIT_OK)
            payload = json.loads(path.read_text(encoding="utf8"))
            self.assertEqual([row["value"] for row in payload["rows"]], ["1", "-44", "1126", "-27096"])

    def test_config(self):
        code, out = run_cli("config")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("PRECISION_DIGITS", out)


if __name__ == "__main__":
    unittest.main()
