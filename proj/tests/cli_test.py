"""End-to-end checks of the diffavg command-line tool.

Usage: cli_test.py <path-to-diffavg-binary>
"""
import json
import math
import os
import subprocess
import sys
import tempfile
import unittest

BIN = None


def run(*args, cwd=None):
    return subprocess.run([BIN, *args], capture_output=True, text=True, cwd=cwd)


class CliTest(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def path(self, name):
        return os.path.join(self.dir, name)

    def test_lamb_reproduces_published_ratio(self):
        r = run("lamb", "--dE2-mhz", "1058")
        self.assertEqual(r.returncode, 0, r.stderr)
        out = json.loads(r.stdout)
        self.assertAlmostEqual(out["a_over_b_s_per_g"] / 3.41e4, 1.0, delta=0.01)
        self.assertAlmostEqual(out["delta_q_cm"] / 4.24e-12, 1.0, delta=0.01)
        self.assertIn("s/g", r.stderr)  # human-readable table

    def test_density_normalization(self):
        r = run("density", "--state", "gaussian", "--check-normalization")
        self.assertEqual(r.returncode, 0, r.stderr)
        out = json.loads(r.stdout)
        self.assertTrue(out["normalization_ok"])
        self.assertAlmostEqual(out["rho_integral"], 1.0, delta=1e-6)
        self.assertGreaterEqual(out["rho_min"], -1e-12)
        self.assertLess(out["wigner_min"], 1e-12)

    def test_ground_mode_rate(self):
        r = run("diffuse", "--mode", "k1-ground", "--fit-rate")
        self.assertEqual(r.returncode, 0, r.stderr)
        out = json.loads(r.stdout)
        self.assertAlmostEqual(out["rate"] / (2 * math.pi), 1.0, delta=0.01)

    def test_outputs_are_deterministic(self):
        for i in (1, 2):
            r = run("transform", "--state", "random:3", "--n-grid", "128", "--out", self.path(f"t{i}"))
            self.assertEqual(r.returncode, 0, r.stderr)
        with open(self.path("t1.csv"), "rb") as a, open(self.path("t2.csv"), "rb") as b:
            self.assertEqual(a.read(), b.read())
        leftovers = [f for f in os.listdir(self.dir) if ".tmp." in f]
        self.assertEqual(leftovers, [])
        with open(self.path("t1.csv")) as f:
            header = f.readline().strip().split(",")
            first = f.readline().strip().split(",")
        self.assertEqual(header, ["q", "p", "re_phi_minus1", "im_phi_minus1"])
        self.assertEqual(len(first), 4)

    def test_dump_config_round_trip(self):
        args = ["spectrum", "--symbol", "harmonic:1,2", "--count", "6", "--h", "0.5", "--n-grid", "128",
                "--half-width", "6"]
        dumped = run(*args, "--dump-config")
        self.assertEqual(dumped.returncode, 0, dumped.stderr)
        cfg = json.loads(dumped.stdout)
        self.assertEqual(cfg["command"], "spectrum")
        with open(self.path("cfg.json"), "w") as f:
            f.write(dumped.stdout)
        direct = run(*args, "--out", self.path("direct"))
        replay = run("--config", self.path("cfg.json"), "spectrum", "--out", self.path("replay"))
        self.assertEqual(direct.returncode, 0, direct.stderr)
        self.assertEqual(replay.returncode, 0, replay.stderr)
        with open(self.path("direct.csv"), "rb") as a, open(self.path("replay.csv"), "rb") as b:
            self.assertEqual(a.read(), b.read())
        # flags override the file
        override = run("spectrum", "--config", self.path("cfg.json"), "--count", "3", "--dump-config")
        self.assertEqual(json.loads(override.stdout)["count"], 3)
        self.assertEqual(json.loads(override.stdout)["h"], 0.5)

    def test_operator_closed_form(self):
        r = run("operator", "--symbol", "p^2", "--n-grid", "64", "--half-width", "4")
        self.assertEqual(r.returncode, 0, r.stderr)
        out = json.loads(r.stdout)
        self.assertAlmostEqual(out["closed_form"]["constant"], 1 / (4 * math.pi), places=12)
        self.assertLess(out["hermiticity_defect"], 1e-12)
        r = run("operator", "--symbol", "q*p", "--n-grid", "64", "--half-width", "4")
        self.assertIsNone(json.loads(r.stdout)["closed_form"])

    def test_exit_codes(self):
        self.assertEqual(run("--no-such-flag").returncode, 2)
        self.assertEqual(run("density", "--n-grid", "abc").returncode, 2)
        self.assertEqual(run("density", "--state", "nonsense").returncode, 2)
        self.assertEqual(run().returncode, 2)
        self.assertEqual(run("--help").returncode, 0)
        # under-resolved oscillator grid: numerical contract violation
        r = run("spectrum", "--n-grid", "16", "--half-width", "1", "--count", "12")
        self.assertEqual(r.returncode, 1)
        self.assertIn("points", r.stderr)
        # density on a momentum grid that cannot resolve the phases
        r = run("density", "--oversample", "1")
        self.assertEqual(r.returncode, 1)

    def test_state_file_import(self):
        with open(self.path("psi.csv"), "w") as f:
            f.write("x,re,im\n")
            n = 128
            for i in range(n):
                x = -6 + 12 * i / n
                f.write(f"{x!r},{math.exp(-math.pi * x * x) * 2 ** 0.25!r},0\n")
        r = run("density", "--state", "file:" + self.path("psi.csv"), "--check-normalization")
        self.assertEqual(r.returncode, 0, r.stderr)


if __name__ == "__main__":
    BIN = sys.argv.pop(1)
    unittest.main(verbosity=2)
