import hashlib
import json
import tempfile
import unittest
from fractions import Fraction
from pathlib import Path

from src.errors import DomainError
from src.export import (
    checksum,
    coefficient_table,
    exact_string,
    export_fourier_table,
    export_table,
    fourier_table_to_frame,
)
from src.modular import phi_qexp


class TestCoefficientTables(unittest.TestCase):
    def test_exact_string(self):
        self.assertEqual(exact_string(Fraction(-4, 9)), "-4/9")
        self.assertEqual(exact_string(Fraction(12)), "12")
        self.assertEqual(exact_string(-44), "-44")
        with self.assertRaises(DomainError):
            exact_string(0.5)

    def test_a_table(self):
        frame = coefficient_table("a", 3)
        self.assertEqual(list(frame.columns), ["n", "value"])
        self.assertEqual(list(frame["value"]), ["1", "4/9", "89/225"])

    def test_A_table(self):
        frame = coefficient_table("A", 4)
        self.assertEqual(list(frame["value"]), ["1", "-44", "1126", "-27096"])

    def test_T_and_S0_tables(self):
        self.assertEqual(list(coefficient_table("T", 3)["value"]), ["0", "1/2", "1/2"])
        s0 = coefficient_table("S0", 2)
        self.assertEqual(list(s0["r"]), ["0", "-1"])
        self.assertEqual(list(s0["s"]), ["1/2", "1/4"])

    def test_invalid_requests(self):
        with self.assertRaises(DomainError):
            coefficient_table("x", 3)
        with self.assertRaises(DomainError):
            coefficient_table("a", 0)


class TestExportFiles(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_csv(self):
        out = self.dir / "a.csv"
        digest = export_table(coefficient_table("a", 3), str(out), fmt="csv")
        lines = out.read_text(encoding="utf8").splitlines()
        self.assertEqual(lines[0], "n,value")
        self.assertEqual(lines[2], "1,4/9")
        self.assertEqual(digest, checksum(out))

    def test_json(self):
        out = self.dir / "A.json"
        digest = export_table(coefficient_table("A", 3), str(out), fmt="json", metadata={"kind": "A"})
        payload = json.loads(out.read_text(encoding="utf8"))
        self.assertEqual(payload["metadata"], {"kind": "A"})
        self.assertEqual(payload["rows"][1], {"n": 1, "value": "-44"})
        recomputed = hashlib.sha256(json.dumps(payload["rows"], ensure_ascii=False).encode("utf8")).hexdigest()
        self.assertEqual(digest, recomputed)
        self.assertEqual(payload["sha256"], digest)

    def test_unknown_format(self):
        with self.assertRaises(DomainError):
            export_table(coefficient_table("a", 2), str(self.dir / "a.xml"), fmt="xml")

    def test_fourier_table(self):
        table = phi_qexp(5)
        frame = fourier_table_to_frame(table)
        self.assertEqual(list(frame["A"])[:3], ["1", "-44", "1126"])
        digests = export_fourier_table(table, str(self.dir / "fourier"))
        payload = json.loads((self.dir / "fourier.json").read_text(encoding="utf8"))
        self.assertEqual(payload["metadata"]["truncation"], 5)
        self.assertEqual(payload["metadata"]["csv_sha256"], digests["csv"])


if __name__ == "__main__":
    unittest.main()
