"""End-to-end checks of the diracheun command line: exit codes, report
schemas, determinism and config precedence.

usage: test_cli.py <diracheun binary> <spectrum schema>
"""

import csv
import io
import json
import math
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema

BIN = None
SCHEMA = None


def run(*args):
    return subprocess.run([BIN, *args], capture_output=True, text=True, timeout=600)


def sign_changes(values, floor=1e-10):
    peak = max(abs(v) for v in values)
    signs = [v > 0 for v in values if abs(v) > floor * peak]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def wavefunction_rows(text):
    body = "\n".join(line for line in text.splitlines() if not line.startswith("#"))
    return list(csv.DictReader(io.StringIO(body)))


class Spectrum(unittest.TestCase):
    def test_fine_structure_ground_state(self):
        e = 0.0072973525693
        p = run("spectrum", "--coupling", str(e), "--j", "1/2", "--n-max", "0",
                "--route", "heun", "--no-timestamp")
        self.assertEqual(p.returncode, 0, p.stderr)
        report = json.loads(p.stdout)
        jsonschema.validate(report, SCHEMA)
        (level,) = report["levels"]
        self.assertEqual(level["n"], 0)
        self.assertAlmostEqual(level["E_over_m"], math.sqrt(1 - e * e), delta=1e-14)
        self.assertTrue(str(level["E_over_m"]).startswith("0.99997337"))

    def test_all_routes_agree(self):
        p = run("spectrum", "--coupling", "0.4", "--j", "3/2", "--n-max", "3", "--route", "all")
        self.assertEqual(p.returncode, 0, p.stderr)
        report = json.loads(p.stdout)
        jsonschema.validate(report, SCHEMA)
        self.assertIn("timestamp", report)
        routes = {l["route"] for l in report["levels"]}
        self.assertEqual(routes, {"standard", "mixed1", "mixed2", "heun", "oracle"})
        for level in report["levels"]:
            self.assertLess(level["max_pairwise_deviation"], 1e-10)

    def test_parity_plus_has_no_ground_level(self):
        p = run("spectrum", "--coupling", "0.5", "--parity", "1", "--n-max", "1",
                "--route", "all", "--no-timestamp")
        self.assertEqual(p.returncode, 0, p.stderr)
        report = json.loads(p.stdout)
        jsonschema.validate(report, SCHEMA)
        zero = [l for l in report["levels"] if l["n"] == 0]
        self.assertTrue(zero)
        self.assertTrue(all(not l["bound_state"] for l in zero))
        self.assertNotIn("oracle", {l["route"] for l in zero})

    def test_csv_format(self):
        p = run("spectrum", "--coupling", "0.5", "--n-max", "2", "--route", "standard",
                "--format", "csv", "--no-timestamp")
        self.assertEqual(p.returncode, 0, p.stderr)
        self.assertNotIn("\r", p.stdout)
        rows = list(csv.DictReader(io.StringIO(p.stdout)))
        self.assertEqual(len(rows), 3)
        for row in rows:
            mantissa = row["E"].split("e")[0]
            self.assertEqual(len(mantissa.replace(".", "").lstrip("-")), 17)

    def test_supercritical(self):
        p = run("spectrum", "--coupling", "1.5", "--j", "1/2")
        self.assertEqual(p.returncode, 2)
        self.assertIn("supercritical coupling", p.stderr)

    def test_invalid_inputs(self):
        for args in (["--coupling", "0.5", "--j", "1"],
                     ["--coupling", "0.5", "--j", "abc"],
                     ["--coupling", "0.5", "--parity", "0"],
                     ["--coupling", "0.5", "--route", "bogus"],
                     ["--coupling", "0.5", "--format", "xml"],
                     ["--coupling", "0.5", "--n-max", "-1"],
                     ["--coupling", "0.0", "--route", "oracle"],
                     ["--j", "1/2"]):
            with self.subTest(args=args):
                self.assertEqual(run("spectrum", *args).returncode, 2)

    def test_non_convergence(self):
        p = run("spectrum", "--coupling", "0.5", "--n-max", "0", "--route", "oracle",
                "--tol", "1e-30")
        self.assertEqual(p.returncode, 3)

    def test_determinism(self):
        args = ("spectrum", "--coupling", "0.3", "--n-max", "2", "--no-timestamp")
        a, b = run(*args), run(*args)
        self.assertEqual(a.returncode, 0)
        self.assertEqual(a.stdout, b.stdout)


class Wavefunction(unittest.TestCase):
    def test_ground_state_has_no_node(self):
        p = run("wavefunction", "0", "--coupling", "0.5", "--format", "csv", "--no-timestamp")
        self.assertEqual(p.returncode, 0, p.stderr)
        self.assertIn("# residual=", p.stdout)
        rows = wavefunction_rows(p.stdout)
        self.assertEqual(len(rows), 2000)
        self.assertEqual(sign_changes([float(r["f"]) for r in rows]), 0)

    def test_second_level_has_two_nodes(self):
        for route in ("standard", "heun", "oracle"):
            with self.subTest(route=route):
                p = run("wavefunction", "2", "--coupling", "0.5", "--route", route,
                        "--format", "csv", "--no-timestamp")
                self.assertEqual(p.returncode, 0, p.stderr)
                rows = wavefunction_rows(p.stdout)
                self.assertEqual(sign_changes([float(r["f"]) for r in rows]), 2)
                residual = [l for l in p.stdout.splitlines() if l.startswith("# residual=")][0]
                self.assertLess(float(residual.split("=")[1]), 1e-6)

    def test_json_and_output_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, "wf.json")
            p = run("wavefunction", "1", "--coupling", "0.3", "--parity", "1", "--route",
                    "mixed1", "--grid-points", "300", "--r-max", "30", "--out", out)
            self.assertEqual(p.returncode, 0, p.stderr)
            self.assertEqual(p.stdout, "")
            with open(out) as fh:
                report = json.load(fh)
        self.assertEqual(len(report["points"]), 300)
        self.assertEqual(report["route"], "mixed1")
        # The residual is a finite-difference diagnostic: coarse grids are
        # limited by the stencil, and refining 4x gains about 8 orders.
        fine = run("wavefunction", "1", "--coupling", "0.3", "--parity", "1", "--route",
                   "mixed1", "--grid-points", "1200", "--r-max", "30")
        fine_residual = json.loads(fine.stdout)["residual"]
        self.assertLess(report["residual"], 1e-3)
        self.assertLess(fine_residual, 1e-8)
        self.assertLess(fine_residual, 1e-3 * report["residual"])

    def test_errors(self):
        self.assertEqual(run("wavefunction", "0", "--coupling", "0.5", "--grid-points", "0").returncode, 2)
        self.assertEqual(run("wavefunction", "0", "--coupling", "0.5", "--r-min", "5",
                             "--r-max", "1").returncode, 2)
        self.assertEqual(run("wavefunction", "0", "--coupling", "0.5", "--parity", "1").returncode, 2)
        self.assertEqual(run("wavefunction", "1", "--coupling", "0.5", "--route", "mixed1").returncode, 2)
        self.assertEqual(run("wavefunction", "3", "--coupling", "0.5", "--n-max", "2").returncode, 2)


class Config(unittest.TestCase):
    def test_precedence(self):
        with tempfile.TemporaryDirectory() as tmp:
            cfg = os.path.join(tmp, "run.cfg")
            with open(cfg, "w") as fh:
                fh.write("# comment\ncoupling=0.3\nn-max=1\nroute=heun\nno-timestamp=true\n")
            from_file = json.loads(run("spectrum", "--config", cfg).stdout)
            self.assertEqual(from_file["params"]["coupling"], 0.3)
            self.assertEqual(len(from_file["levels"]), 2)
            self.assertNotIn("timestamp", from_file)
            overridden = json.loads(run("spectrum", "--config", cfg, "--coupling", "0.5").stdout)
            self.assertEqual(overridden["params"]["coupling"], 0.5)
            self.assertEqual(len(overridden["levels"]), 2)
            with open(cfg, "w") as fh:
                fh.write("bogus=1\n")
            self.assertEqual(run("spectrum", "--config", cfg, "--coupling", "0.5").returncode, 2)
        self.assertEqual(run("spectrum", "--config", "/nonexistent.cfg").returncode, 2)


class Verify(unittest.TestCase):
    def test_default_passes(self):
        p = run("verify")
        self.assertEqual(p.returncode, 0, p.stdout)
        ids = [line.split()[1] for line in p.stdout.splitlines() if line[:4] in ("PASS", "AUDI")]
        for a in ("A1", "A2", "A3", "A4", "A5", "A6", "A7"):
            self.assertIn(a, ids)
        self.assertNotIn("FAIL", p.stdout)

    def test_unattainable_tolerance(self):
        p = run("verify", "--tol", "1e-20", "--format", "json")
        self.assertEqual(p.returncode, 1)
        report = json.loads(p.stdout)
        self.assertFalse(report["passed"])
        failed = [c for c in report["checks"] if not c["passed"] and not c["audit_only"]]
        self.assertTrue(failed)
        self.assertTrue(all(c["measured"] is not None and c["measured"] > 0 for c in failed))

    def test_oracle_subset(self):
        p = run("verify", "--route", "oracle", "--format", "json")
        self.assertEqual(p.returncode, 0, p.stdout)
        ids = [c["id"] for c in json.loads(p.stdout)["checks"]]
        self.assertIn("A2", ids)
        self.assertNotIn("A1", ids)
        self.assertNotIn("A4", ids)


if __name__ == "__main__":
    BIN = sys.argv.pop(1)
    with open(sys.argv.pop(1)) as fh:
        SCHEMA = json.load(fh)
    unittest.main(verbosity=2)
