# SPDX-FileCopyrightText: 2024-present Open Networking Foundation <info@opennetworking.org>
# SPDX-License-Identifier: Apache-2.0
#

# ------------------------------------------------------------------------------
# CLI TESTS
#
# Commands run through main() with their exit codes and output files.
# ------------------------------------------------------------------------------

import contextlib
import csv
import io
import json
import os
import tempfile

import pytest

from relaycoop.cgras import canonicalize, serialize
from relaycoop.cli import EXIT_ERROR, EXIT_INFEASIBLE, EXIT_OK, main
from relaycoop_base import RelayCoopBaseTest


class CliBaseTest(RelayCoopBaseTest):

    def setUp(self):
        super(CliBaseTest, self).setUp()
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def run_main(self, *argv):
        out = io.StringIO()
        with contextlib.redirect_stdout(out):
            code = main(list(argv))
        return code, out.getvalue()


class OptimizeTest(CliBaseTest):
    """ Tests single-point optimization of the best scheme and of a given one.
    """

    def runTest(self):
        code, out = self.run_main("optimize", "--a", "0.7", "--b", "0.4", "--rate", "0.5")
        self.assertEqual(code, EXIT_OK)
        result = json.loads(out)
        self.assertTrue(result["feasible"])
        self.assertGreater(result["energy"], 0.0)

        scheme_a = serialize(self.scheme("A"))
        code, out = self.run_main("optimize", "--a", "1.2", "--b", "0.5", "--rate", "0.5",
                                  "--scheme", scheme_a)
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)["scheme"], scheme_a)

        code, out = self.run_main("optimize", "--a", "1.2", "--b", "0.9", "--rate", "0.5",
                                  "--scheme", scheme_a)
        self.assertEqual(code, EXIT_INFEASIBLE)
        self.assertFalse(json.loads(out)["feasible"])


class ErrorExitTest(CliBaseTest):
    """ Tests that configuration and input errors exit with 1.
    """

    def runTest(self):
        missing = os.path.join(self.tmp.name, "missing.json")
        self.assertEqual(self.run_main("sweep", "--config", missing)[0], EXIT_ERROR)
        bad = os.path.join(self.tmp.name, "bad.json")
        with open(bad, "w") as f:
            json.dump({"grid": "0:2:3", "frobnicate": True}, f)
        self.assertEqual(self.run_main("sweep", "--config", bad)[0], EXIT_ERROR)
        self.assertEqual(self.run_main("optimize", "--rate", "0.5")[0], EXIT_ERROR)
        self.assertEqual(self.run_main("optimize", "--a", "1", "--b", "1", "--scheme",
                                       "W=(1,2)")[0], EXIT_ERROR)
        self.assertEqual(self.run_main("optimize", "--a", "-1", "--b", "1")[0], EXIT_ERROR)


class EnumerateTest(CliBaseTest):
    """ Tests the enumeration summary and its JSON dump.
    """

    def runTest(self):
        code, out = self.run_main("enumerate", "--out-dir", self.tmp.name, "--format", "json")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("({1},{2,3})", out)
        with open(os.path.join(self.tmp.name, "schemes.json")) as f:
            document = json.load(f)
        self.assertTrue(document["symmetric"])
        self.assertFalse(document["split"])
        self.assertIn(canonicalize(self.scheme("A")), document["schemes"])


class SweepCommandTest(CliBaseTest):
    """ Tests a tiny sweep with both split modes and its files.
    """

    def runTest(self):
        code, _ = self.run_main("sweep", "--grid", "0.5:1:2", "--rate", "0.5", "--both",
                                "--format", "csv", "--out-dir", self.tmp.name)
        self.assertEqual(code, EXIT_OK)
        names = set(os.listdir(self.tmp.name))
        for name in ("phase_nosplit_R0.5.csv", "phase_split_R0.5.csv", "difference_R0.5.csv"):
            self.assertIn(name, names)
        with open(os.path.join(self.tmp.name, "phase_nosplit_R0.5.csv")) as f:
            self.assertEqual(len(list(csv.reader(f))), 5)


@pytest.mark.slow
class CompareCommandTest(CliBaseTest):
    """ Tests the comparison table at one channel.
    """

    def runTest(self):
        code, _ = self.run_main("compare", "--a", "0.7", "--b", "0.4", "--rate", "0.5", "1",
                                "--samples", "200", "--format", "csv", "--out-dir",
                                self.tmp.name)
        self.assertEqual(code, EXIT_OK)
        with open(os.path.join(self.tmp.name, "compare.csv")) as f:
            rows = list(csv.DictReader(f))
        self.assertEqual(len(rows), 2)
        for row in rows:
            lower, split = float(row["E_lower"]), float(row["E_best_split"])
            self.assertLessEqual(lower, split * (1.0 + 1e-9))
            self.assertLessEqual(split, float(row["E_uncoordinated"]) * (1.0 + 1e-9))
