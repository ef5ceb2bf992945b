import io
import json
import os
import tempfile
import unittest
from unittest.mock import patch

from cli.main import CliConfig, main, parse_args
from config.settings import RESULTS_DIR, RESULTS_DIR_ENV
from congruence.tate import CongruenceReport
from utils.command_handler import OutputFormat
from utils.errors import CounterexampleError
from utils.result_store import ResultStore

NON_RESIDUES_17 = [3, 5, 6, 7, 10, 11, 12, 14]
EXAMPLE = ["find-congruences", "--r", "0", "--s", "-12", "--t", "1", "--ell", "17", "--rigorous"]


def run(argv):
    with patch("sys.stdout", new_callable=io.StringIO) as stdout:
        code = main(argv)
    return code, stdout.getvalue()


class TestCli(unittest.TestCase):

    def test_expand_trivial(self):
        code, out = run(["expand", "--r", "0", "--s", "0", "--t", "0", "--modulus", "7", "--terms", "5"])
        self.assertEqual(code, 0)
        self.assertEqual(out.strip(), "1")

    def test_expand_json(self):
        code, out = run(["expand", "--s", "1", "--modulus", "1000", "--terms", "3", "--output", "json"])
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["coefficients"], [1, 240, 160])

    def test_theta(self):
        code, out = run(["theta", "--s", "1", "--modulus", "1000", "--terms", "3",
                         "--iterations", "2", "--output", "json"])
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["coefficients"], [0, 240, 640])

    def test_find_congruences_json(self):
        code, out = run(EXAMPLE + ["--output", "json"])
        self.assertEqual(code, 0)
        payload = json.loads(out)
        self.assertEqual(payload["residues"], NON_RESIDUES_17)
        self.assertEqual(payload["method"], "rigorous")

    def test_json_round_trips_through_the_cache(self):
        _, out = run(EXAMPLE + ["--output", "json"])
        report = CongruenceReport.from_dict(json.loads(out))
        with tempfile.TemporaryDirectory() as directory:
            store = ResultStore(directory)
            store.put(report, bound=129)
            self.assertEqual(store.get(report.spec, 17), report)

    def test_table_and_json_agree(self):
        _, table = run(EXAMPLE)
        _, data = run(EXAMPLE + ["--output", "json"])
        self.assertIn(" ".join(map(str, NON_RESIDUES_17)), table)
        self.assertEqual(json.loads(data)["residues"], NON_RESIDUES_17)

    def test_csv(self):
        code, out = run(EXAMPLE + ["--output", "csv"])
        self.assertEqual(code, 0)
        lines = out.strip().splitlines()
        self.assertEqual(lines[0], "ell,method,residues")
        self.assertTrue(lines[1].startswith("17,rigorous,"))

    def test_verify_table_row(self):
        code, _ = run(["verify-table", "--row", "1/E4", "--terms", "3000"])
        self.assertEqual(code, 0)

    def test_a_tilde(self):
        code, out = run(["a-tilde", "--ell", "13", "--output", "json"])
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["terms"], [[3, 0, 6], [0, 2, 8]])

    def test_filtration(self):
        code, out = run(["filtration", "--s", "1", "--t", "1", "--ell", "13", "--output", "json"])
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["weight"], 10 * 13 + 10)

    def test_tate_cycle(self):
        code, out = run(["tate-cycle", "--s", "-12", "--t", "1", "--ell", "17", "--output", "json"])
        self.assertEqual(code, 0)
        payload = json.loads(out)
        self.assertEqual(len(payload["filtrations"]), 16)
        self.assertEqual([fall for _, fall in payload["falls"]], [9, 9])

    def test_bounds(self):
        code, out = run(["bounds", "--s", "-12", "--t", "1", "--ell", "17", "--output", "json"])
        self.assertEqual(code, 0)
        payload = json.loads(out)
        self.assertEqual((payload["theorem_bound"], payload["remark_bound"]), (129, 105))
        self.assertEqual(payload["proof_case"], "large-offset")
        self.assertEqual(payload["derived_remark_bound"], 105)

    def test_theta_primes(self):
        code, out = run(["theta-primes", "--s", "1", "--t", "1", "--output", "json"])
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["confirmed"], [2, 3, 11])

    def test_verify_theorem_with_cache(self):
        with tempfile.TemporaryDirectory() as directory:
            argv = ["verify-theorem", "--s", "1", "--t", "1", "--remark", "--sample-above", "1",
                    "--results-dir", directory, "--output", "json"]
            code, out = run(argv)
            self.assertEqual(code, 0)
            self.assertEqual(json.loads(out)["computed"], 5)
            _, out = run(argv)
            self.assertEqual(json.loads(out)["cache_hits"], 5)

    def test_usage_errors(self):
        with patch("sys.stderr", new_callable=io.StringIO):
            self.assertEqual(main(["find-congruences"]), 2)
        self.assertEqual(run(["filtration", "--r", "-1", "--ell", "13"])[0], 2)
        self.assertEqual(run(["a-tilde", "--ell", "9"])[0], 2)

    def test_precision_below_minimum(self):
        self.assertEqual(run(["filtration", "--s", "1", "--ell", "13", "--precision", "0"])[0], 3)
        self.assertEqual(run(["theta-primes", "--s", "1", "--terms", "499"])[0], 3)
        self.assertEqual(run(EXAMPLE[:-1] + ["--heuristic", "--precision", "3"])[0], 3)

    def test_counterexample_exit_code(self):
        with patch("cli.main.verify_table", side_effect=CounterexampleError("row fails", 2, 1)):
            self.assertEqual(run(["verify-table"])[0], 1)

    def test_storage_error_exit_code(self):
        with tempfile.TemporaryDirectory() as directory:
            blocker = os.path.join(directory, "file")
            with open(blocker, "w", encoding="utf-8") as handle:
                handle.write("")
            code, _ = run(["verify-theorem", "--s", "1", "--t", "1", "--remark",
                           "--sample-above", "0", "--results-dir", os.path.join(blocker, "x")])
        self.assertEqual(code, 3)


class TestCliConfig(unittest.TestCase):

    def test_results_dir_resolution(self):
        argv = ["bounds"]
        with patch.dict(os.environ, {}, clear=True):
            self.assertEqual(CliConfig.from_args(parse_args(argv)).results_dir, RESULTS_DIR)
        with patch.dict(os.environ, {RESULTS_DIR_ENV: "from-env"}):
            self.assertEqual(CliConfig.from_args(parse_args(argv)).results_dir, "from-env")
            flagged = parse_args(argv + ["--results-dir", "from-flag"])
            self.assertEqual(CliConfig.from_args(flagged).results_dir, "from-flag")

    def test_defaults(self):
        config = CliConfig.from_args(parse_args(["bounds", "--output", "csv"]))
        self.assertEqual(config.output, OutputFormat.CSV)
        self.assertIsNone(config.precision)
        self.assertEqual(config.precision_for(7), 7)


if __name__ == '__main__':
    unittest.main()
