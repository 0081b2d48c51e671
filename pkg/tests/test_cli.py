import io
import json
import math
import os
import shutil
import tempfile
from unittest import TestCase

import numpy as np

from qcthermo import configure
from qcthermo.cli import main

STATES = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                      "..", "doc", "states")
R1 = os.path.join(STATES, "r1.json")
R2 = os.path.join(STATES, "r2.json")
R3 = os.path.join(STATES, "r3.json")
EQUILIBRIUM = os.path.join(STATES, "equilibrium.json")


class CLITestCase(TestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)
        configure()

    def run_ok(self, *argv):
        out = io.StringIO()
        code = main(list(argv), stdout=out)
        self.assertEqual(0, code)
        return json.loads(out.getvalue())

    def run_code(self, *argv):
        return main(list(argv), stdout=io.StringIO())

    def write(self, name, blob):
        path = os.path.join(self.tmp, name)
        with open(path, "w") as fh:
            json.dump(blob, fh)
        return path


class TestCommands(CLITestCase):
    def test_gibbs(self):
        result = self.run_ok("gibbs", R3)
        self.assertAlmostEqual(math.log(3), result["log_z"])
        self.assertAlmostEqual(-math.log(3), result["grand_potential"])
        for level in result["state"]["levels"]:
            self.assertAlmostEqual(1 / 3, level["p"])

    def test_compare(self):
        self.assertEqual({"a_to_b": True, "b_to_a": False},
                         self.run_ok("compare", R1, R3))

    def test_compare_named_states(self):
        neither = {"a_to_b": False, "b_to_a": False}
        self.assertEqual(neither, self.run_ok("compare", R1, R2))
        self.assertEqual(neither, self.run_ok("compare", R2, R1))
        self.assertEqual({"a_to_b": True, "b_to_a": False},
                         self.run_ok("compare", R2, R3))

    def test_curves_of_named_states(self):
        free = self.write("free.json", {"beta": 1.0, "mu": 0.0, "levels": [
            {"E": 0.0, "n": 0}, {"E": 0.0, "n": 0}, {"E": 0.0, "n": 0}]})
        grid = np.linspace(0, 1, 61)
        curves = {}
        for name, path in (("r1", R1), ("r2", R2), ("r3", R3),
                           ("free", free)):
            csv = os.path.join(self.tmp, name + ".csv")
            self.run_ok("lorenz", path, "--csv", csv)
            t, L = np.loadtxt(csv, delimiter=",", skiprows=1, unpack=True)
            curves[name] = np.interp(grid, t, L)

        np.testing.assert_allclose(grid, curves["free"], atol=1e-12)
        for upper, lower in (("r1", "r3"), ("r2", "r3"), ("r3", "free")):
            assert np.all(curves[upper] >= curves[lower] - 1e-12)
        # r1 and r2 cross
        assert np.any(curves["r1"] > curves["r2"] + 0.1)
        assert np.any(curves["r2"] > curves["r1"] + 0.05)

    def test_witness(self):
        result = self.run_ok("witness", R1, R3)
        assert result["found"]
        self.assertEqual(3, result["rows"])
        self.assertEqual({"found": False}, self.run_ok("witness", R3, R1))

    def test_lorenz_csv(self):
        path = os.path.join(self.tmp, "curve.csv")
        result = self.run_ok("lorenz", R3, "--csv", path)
        self.assertEqual(4, len(result["t"]))
        with open(path) as fh:
            lines = fh.read().splitlines()
        self.assertEqual("t,L", lines[0])
        self.assertEqual(5, len(lines))

    def test_equilibrium_curve_is_the_diagonal(self):
        path = os.path.join(self.tmp, "free.csv")
        self.run_ok("lorenz", EQUILIBRIUM, "--csv", path)
        with open(path) as fh:
            rows = [line.split(",") for line in fh.read().splitlines()[1:]]
        for t, L in rows:
            self.assertAlmostEqual(float(t), float(L))

    def test_b_eps(self):
        result = self.run_ok("b-eps", R3, "--eps", "0.1")
        self.assertEqual(0.1, result["eps"])
        self.assertAlmostEqual(5 / 6, result["b_eps"])
        self.assertAlmostEqual(5 / 6, result["dual_value"])
        self.assertEqual(3, len(result["test"]))

    def test_dh(self):
        result = self.run_ok("dh", R1, "--eps", "0.1", "--alpha", "2",
                             "--a", "1.5")
        self.assertAlmostEqual(math.log(1.56), result["renyi"]["value"])
        self.assertAlmostEqual(0.1, result["hinge"]["value"])
        self.assertAlmostEqual(
            0.6 * math.log(1.8) + 0.4 * math.log(1.2),
            result["relative_entropy"])

    def test_work_gain(self):
        result = self.run_ok("work-gain", R3, "--eps", "0.1")
        self.assertAlmostEqual(-math.log(5 / 6), result["w_gain"])
        self.assertIn("1/beta", result["units"])

    def test_work_cost(self):
        result = self.run_ok("work-cost", R3, "--eps", "0.1", "--W", "2.0")
        self.assertAlmostEqual(math.log(1.2), result["w_cost_lower"])
        self.assertAlmostEqual(math.log(5 / 3), result["w_cost_upper"])
        self.assertAlmostEqual(math.log(5 / 3), result["formation"]["W"])
        assert result["formation"]["trace_distance"] <= 0.1
        assert result["formation_feasible"]

    def test_channel(self):
        result = self.run_ok("channel", R3, "--eps", "0.1",
                             "--battery", "0,2")
        work = -math.log(5 / 6)
        self.assertAlmostEqual(work, result["W"])
        self.assertEqual(1, len(result["synthesized_levels"]))
        self.assertAlmostEqual(work, result["synthesized_levels"][0])
        self.assertEqual(3, len(result["battery_energies"]))
        self.assertEqual((0, 1), (result["source_level"],
                                  result["target_level"]))
        assert result["success_weight"] >= 0.9 - 1e-12
        assert result["gibbs_residual"] <= 1e-12
        self.assertEqual([3, 9], [result["channel"]["rows"],
                                  result["channel"]["cols"]])

    def test_rate(self):
        result = self.run_ok("rate", R1, R3)
        assert result["rate"] > 1

    def test_asymptotics(self):
        path = os.path.join(self.tmp, "sweep.csv")
        result = self.run_ok("asymptotics", R3, "--eps", "0.1",
                             "--n-max", "4", "--csv", path)
        self.assertEqual([1, 2, 3, 4], [row["n"] for row in result["rows"]])
        self.assertAlmostEqual(-1.2815515655446004, result["quantile"],
                               places=9)
        assert result["gaps"] is not None
        with open(path) as fh:
            self.assertEqual(5, len(fh.read().splitlines()))

    def test_fit_gibbs(self):
        result = self.run_ok("fit-gibbs", EQUILIBRIUM)
        assert result["fitted"]
        self.assertAlmostEqual(1.0, result["beta"])
        self.assertAlmostEqual(0.5, result["mu"])

    def test_check_free(self):
        assert self.run_ok("check-free", EQUILIBRIUM)["free"]
        assert not self.run_ok("check-free", R3)["free"]


class TestExitStatus(CLITestCase):
    def test_domain_errors(self):
        self.assertEqual(1, self.run_code("work-gain", R3, "--eps", "1.5"))
        # zero probabilities cannot be fitted
        self.assertEqual(1, self.run_code("fit-gibbs", R1))

    def test_copy_counts_must_be_positive(self):
        for flags in (("--n", "0"), ("--n", "-3"), ("--n-max", "0")):
            self.assertEqual(1, self.run_code("asymptotics", R3, "--eps",
                                              "0.1", *flags))

    def test_mismatched_theories(self):
        hot = self.write("hot.json", {"beta": 2.0, "levels": [
            {"E": 0.0, "p": 0.5}, {"E": 0.0, "p": 0.5}]})
        self.assertEqual(1, self.run_code("rate", R3, hot))

    def test_bad_input(self):
        self.assertEqual(2, self.run_code(
            "gibbs", os.path.join(self.tmp, "missing.json")))
        bad = self.write("bad.json", {"beta": 0, "levels": [{"E": 0.0}]})
        self.assertEqual(2, self.run_code("gibbs", bad))

    def test_usage(self):
        self.assertEqual(2, self.run_code("no-such-command", R3))
        self.assertEqual(2, self.run_code("compare", R3))


class TestConfig(CLITestCase):
    def test_default_eps_from_config(self):
        path = self.write("settings.json", {"default_eps": 0.1})
        result = self.run_ok("--config", path, "b-eps", R3)
        self.assertEqual(0.1, result["eps"])
        self.assertAlmostEqual(5 / 6, result["b_eps"])

    def test_bad_config(self):
        path = self.write("settings.json", {"default_eps": -1})
        self.assertEqual(2, self.run_code("--config", path, "b-eps", R3))
