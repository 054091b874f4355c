"""CLI tests: exit codes, output formats and the run_grand.py entry point."""

from __future__ import annotations

import contextlib
import csv
import io
import json
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path
from typing import Dict, List, Tuple
from unittest import mock

from grandpolar.channel.bpsk import ChannelModel, mask_threshold
from grandpolar.gf2 import BitMatrix, BitVector
from grandpolar.tools import cli
from grandpolar.tools.cli import UsageError, cli_main, parse_grid, parse_int_list, parse_word

REPO_ROOT = Path(__file__).resolve().parents[2]


def _run(*argv: str) -> Tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = cli_main(list(argv))
    return code, out.getvalue(), err.getvalue()


def _csv_rows(text: str) -> List[Dict[str, str]]:
    body = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(body))


class TestArgumentHelpers(unittest.TestCase):
    def test_grid(self) -> None:
        self.assertEqual(parse_grid("6:0.5:8"), [6.0, 6.5, 7.0, 7.5, 8.0])
        self.assertEqual(parse_grid("1,3"), [1.0, 3.0])
        self.assertEqual(parse_grid("9"), [9.0])
        for bad in ("8:0.5:6", "6:0:8", "a:b:c"):
            with self.subTest(bad=bad):
                with self.assertRaises(UsageError):
                    parse_grid(bad)

    def test_int_list(self) -> None:
        self.assertEqual(parse_int_list("0:3"), [0, 1, 2, 3])
        self.assertEqual(parse_int_list("1,4"), [1, 4])
        with self.assertRaises(UsageError):
            parse_int_list("x")

    def test_word(self) -> None:
        self.assertEqual(parse_word("0x8", 4, "w"), BitVector.from_bits("1000"))
        self.assertEqual(parse_word("0110", 4, "w"), BitVector.from_bits("0110"))
        for bad in ("011", "0x1f", "zz"):
            with self.subTest(bad=bad):
                with self.assertRaises(UsageError):
                    parse_word(bad, 4, "w")


class TestExitCodes(unittest.TestCase):
    def test_bad_arguments(self) -> None:
        cases = [
            ("nonsense",),
            ("conditional",),
            ("conditional", "--flips", "0", "--trials", "0"),
            ("curve-hard", "--snr", "6"),
            ("decode", "--received", "0x1", "--ab", "1", "--budget", "5"),
            ("mask-threshold", "--snr", "6:-1:8", "-n", "8"),
            ("direct", "--snr", "9", "--ab", "200", "--trials", "5"),
            ("conditional", "--flips", "1", "--mask-length", "4", "--budget-weight", "500"),
            ("decode", "--received", "0x0", "--workers", "2"),
            ("decode", "--received", "0x0", "--engine", "cursor", "--workers", "0"),
        ]
        for argv in cases:
            with self.subTest(argv=argv):
                code, _, err = _run(*argv)
                self.assertEqual(code, 2)
                self.assertTrue(err)

    def test_unknown_code(self) -> None:
        code, _, err = _run("encode", "--code", "no_such_code", "--info", "0x0")
        self.assertEqual(code, 1)
        self.assertIn("[FATAL]", err)

    def test_internal_value_error_is_not_a_usage_error(self) -> None:
        def broken(args):
            raise ValueError("internal failure")

        with mock.patch.dict(cli.COMMANDS, {"mask-threshold": broken}):
            with self.assertRaises(ValueError):
                _run("mask-threshold", "--snr", "9")

    def test_unattainable_mask_rate(self) -> None:
        code, _, err = _run("mask-threshold", "--merr", "1e-4", "--snr", "20", "-n", "128")
        self.assertEqual(code, 1)
        self.assertIn("unattainable", err)


class TestCommands(unittest.TestCase):
    def test_mask_threshold_table(self) -> None:
        code, out, _ = _run("mask-threshold", "--merr", "1e-4,1e-3", "--snr", "8:1:9", "-n", "128")
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith("# schema: grandpolar-mask-threshold v1"))
        rows = _csv_rows(out)
        self.assertEqual(len(rows), 4)
        ch = ChannelModel.from_snr(8.0, 128)
        self.assertAlmostEqual(float(rows[0]["tau"]), mask_threshold(ch, 1e-4).tau, places=9)
        self.assertEqual(rows[2]["merr"], "0.001")

    def test_encode_decode_round_trip(self) -> None:
        code, out, _ = _run("encode", "--info", "0x1", "--info", "0xabc")
        self.assertEqual(code, 0)
        words = out.split()
        self.assertEqual(len(words), 2)
        for word in words:
            with self.subTest(word=word):
                code, out, _ = _run("decode", "--received", "0x" + word)
                self.assertEqual(code, 0)
                doc = json.loads(out)
                self.assertEqual((doc["codeword"], doc["success"], doc["queries"]), (word, 1, 1))

    def test_decode_abandons_at_budget(self) -> None:
        _, out, _ = _run("encode", "--info", "0x5", "--format", "json")
        c = BitVector.from_hex(json.loads(out)[0]["codeword"], 128)
        y = c ^ BitVector.from_indices(128, [3])
        code, out, _ = _run("decode", "--received", "0x" + y.to_hex(), "--ab", "0")
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out), {"codeword": None, "success": 0, "queries": 1, "budget": 1})

    def test_masked_decode(self) -> None:
        _, out, _ = _run("encode", "--info", "0x7")
        c = BitVector.from_hex(out.strip(), 128)
        y = c ^ BitVector.from_indices(128, [10, 20])
        s = BitVector.from_indices(128, [10, 20, 30])
        code, out, _ = _run("decode", "--received", "0x" + y.to_hex(), "--mask", "0x" + s.to_hex(), "--budget", "8")
        self.assertEqual(code, 0)
        doc = json.loads(out)
        self.assertEqual(doc["success"], 1)
        self.assertLessEqual(doc["queries"], 8)

    def test_range_split_decode_matches_serial(self) -> None:
        _, out, _ = _run("encode", "--info", "0x3")
        y = BitVector.from_hex(out.strip(), 128) ^ BitVector.from_indices(128, [4, 90])
        argv = ("decode", "--received", "0x" + y.to_hex(), "--engine", "cursor", "--ab", "2")
        _, serial, _ = _run(*argv)
        code, split, _ = _run(*argv, "--workers", "3")
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(split), json.loads(serial))
        self.assertEqual(json.loads(split)["success"], 1)

    def test_conditional_zero_flips(self) -> None:
        code, out, _ = _run("conditional", "--flips", "0", "--trials", "25", "--seed", "1", "--ab", "2")
        self.assertEqual(code, 0)
        [row] = _csv_rows(out)
        self.assertEqual((row["b"], row["trials"]), ("0", "25"))
        self.assertEqual((float(row["cond_bler"]), float(row["mean_q"])), (0.0, 1.0))
        self.assertEqual(row["budget"], "8257")

    def test_conditional_cdf_json(self) -> None:
        code, out, _ = _run("conditional", "--flips", "1", "--trials", "20", "--cdf", "--format", "json", "--ab", "1")
        self.assertEqual(code, 0)
        doc = json.loads(out)
        self.assertEqual(doc["schema"], "grandpolar-qcdf")
        cdf = [row["cdf"] for row in doc["rows"]]
        self.assertEqual(cdf, sorted(cdf))
        self.assertAlmostEqual(cdf[-1], 1.0)

    def test_conditional_soft_stratum(self) -> None:
        code, out, _ = _run("conditional", "--flips", "0:1", "--mask-length", "5", "--trials", "15", "--budget-weight", "1")
        self.assertEqual(code, 0)
        rows = _csv_rows(out)
        self.assertEqual([(r["l"], r["b"]) for r in rows], [("5", "0"), ("5", "1")])

    def test_curve_hard(self) -> None:
        code, out, _ = _run("curve-hard", "--ab", "1", "--snr", "8,9", "--seed", "4", "--trials", "30")
        self.assertEqual(code, 0)
        rows = _csv_rows(out)
        self.assertEqual(len(rows), 2)
        for row in rows:
            self.assertEqual(row["budget"], "129")
            self.assertGreater(float(row["bler"]), 0.0)
            self.assertLessEqual(float(row["bler"]), 1.0)
        self.assertGreater(float(rows[0]["bler"]), float(rows[1]["bler"]))

    def test_curve_soft(self) -> None:
        code, out, _ = _run(
            "curve-soft", "--merr", "1e-2", "--snr", "10", "--seed", "4", "--trials", "10",
            "--budget-weight", "1", "--floor", "1e-4",
        )
        self.assertEqual(code, 0)
        [row] = _csv_rows(out)
        self.assertGreaterEqual(float(row["bler"]), 1e-2)
        self.assertGreaterEqual(float(row["mean_q_bound"]), float(row["mean_q"]) * 0.99)

    def test_direct(self) -> None:
        code, out, _ = _run("direct", "--snr", "12", "--trials", "20", "--ab", "1", "--seed", "2")
        self.assertEqual(code, 0)
        [row] = _csv_rows(out)
        self.assertEqual(row["trials"], "20")
        self.assertEqual(row["budget"], "129")

    def test_out_file_and_matrices(self) -> None:
        with tempfile.TemporaryDirectory() as tmp:
            tmp_path = Path(tmp)
            code, out, _ = _run(
                "mask-threshold", "--code", "dl128_99", "--merr", "1e-4", "--snr", "9",
                "--out", str(tmp_path / "mask.csv"), "--dump-matrices", str(tmp_path / "mats"),
            )
            self.assertEqual(code, 0)
            self.assertEqual(out, "")
            self.assertIn("grandpolar-mask-threshold", (tmp_path / "mask.csv").read_text(encoding="utf-8"))
            g = BitMatrix.from_text((tmp_path / "mats" / "G.txt").read_text(encoding="utf-8"))
            h = BitMatrix.from_text((tmp_path / "mats" / "H.txt").read_text(encoding="utf-8"))
        self.assertEqual(g.shape, (99, 128))
        self.assertEqual(h.shape, (29, 128))
        self.assertTrue((h @ g.T).is_zero())


class TestEntryPoint(unittest.TestCase):
    def test_run_grand_script(self) -> None:
        proc = subprocess.run(
            [sys.executable, "run_grand.py", "mask-threshold", "--merr", "1e-4", "--snr", "9"],
            cwd=str(REPO_ROOT),
            text=True,
            capture_output=True,
        )
        self.assertEqual(proc.returncode, 0, proc.stderr)
        self.assertEqual(len(_csv_rows(proc.stdout)), 1)

    def test_quick_checks_skip_tests(self) -> None:
        proc = subprocess.run(
            [sys.executable, "run_checks.py", "--quick"],
            cwd=str(REPO_ROOT),
            text=True,
            capture_output=True,
        )
        self.assertEqual(proc.returncode, 0, proc.stdout + proc.stderr)
        self.assertIn("Skipping tests", proc.stdout)
        self.assertNotIn("Unit tests", proc.stdout)

    def test_help(self) -> None:
        code, out, _ = _run("--help")
        self.assertEqual(code, 0)
        self.assertIn("curve-soft", out)


if __name__ == "__main__":
    unittest.main()
