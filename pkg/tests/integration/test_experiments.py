import contextlib
import io
import os
import shutil
import unittest

from heisenlab import cli
from heisenlab.utilities import constants
from tests.heisenlab_test_case import HeisenlabTestCase


class TestCommandLine(HeisenlabTestCase):
    def setUp(self):
        super(TestCommandLine, self).setUp()
        self.runRoot = os.path.join(self.outputRoot, "cli")
        if os.path.exists(self.runRoot):
            shutil.rmtree(self.runRoot)

    def runCli(self, *argv):
        return cli.main(list(argv))

    def config(self, name):
        return os.path.join(self.dataRoot, name)

    def readText(self, *parts):
        with io.open(os.path.join(*parts), "r", encoding="utf-8") as fd:
            return fd.read()

    def test_list(self):
        output = io.StringIO()
        with contextlib.redirect_stdout(output):
            self.assertEqual(cli.EXIT_PASSED, self.runCli("list"))
        listed = [line.split()[0] for line in output.getvalue().splitlines()]
        self.assertEqual(sorted(constants.Experiments.validOptions), sorted(listed))

    def test_passing_run(self):
        status = self.runCli(
            "run", "group-axioms", "--config", self.config("group_axioms.json"),
            "--out", self.runRoot, "--quiet",
        )
        self.assertEqual(cli.EXIT_PASSED, status)
        self.assertTrue(os.path.exists(os.path.join(self.runRoot, "group-axioms.csv")))
        self.assertTrue(os.path.exists(os.path.join(self.runRoot, "group-axioms.json")))

    def test_failing_run(self):
        status = self.runCli(
            "run", "group-axioms", "--config", self.config("failing_thresholds.json"),
            "--out", self.runRoot, "--quiet",
        )
        self.assertEqual(cli.EXIT_FAILED, status)

    def test_configuration_errors(self):
        for argv in (
            ["run", "group-axioms", "--config", self.config("unknown_key.json")],
            ["run", "group-axioms", "--config", self.config("malformed.json")],
            ["run", "group-axioms", "--config", self.config("missing.json")],
            ["run", "koranyi-props", "--config", self.config("group_axioms.json")],
            ["run", "no-such-experiment"],
        ):
            status = self.runCli(*argv, "--out", self.runRoot, "--quiet")
            self.assertEqual(cli.EXIT_CONFIGURATION, status, argv)

    def test_same_seed_same_csv(self):
        outputs = []
        for name, workers in (("first", "1"), ("second", "4")):
            directory = os.path.join(self.runRoot, name)
            self.runCli(
                "run", "group-axioms", "--config", self.config("group_axioms.json"),
                "--seed", "11", "--workers", workers, "--out", directory, "--quiet",
            )
            outputs.append(self.readText(directory, "group-axioms.csv"))
        self.assertEqual(outputs[0], outputs[1])
        self.assertIn(",seed=11", outputs[0].splitlines()[1])

    def test_seed_changes_rows_but_not_the_hash(self):
        headers = []
        for seed in ("1", "2"):
            directory = os.path.join(self.runRoot, seed)
            self.runCli(
                "run", "group-axioms", "--config", self.config("group_axioms.json"),
                "--seed", seed, "--out", directory, "--quiet",
            )
            headers.append(self.readText(directory, "group-axioms.csv").splitlines()[1])
        self.assertEqual(headers[0].split(",")[0], headers[1].split(",")[0])
        self.assertNotEqual(headers[0], headers[1])

    def test_plots(self):
        status = self.runCli(
            "run", "koranyi-props", "--config", self.config("koranyi_props.json"),
            "--out", self.runRoot, "--plot", "--quiet",
        )
        self.assertEqual(cli.EXIT_PASSED, status)
        self.assertTrue(
            os.path.exists(os.path.join(self.runRoot, "koranyi-props-ball-volume.svg"))
        )

    def test_golden_ratio_run(self):
        status = self.runCli(
            "run", "luxemburg-golden", "--config", self.config("luxemburg_golden.json"),
            "--out", self.runRoot, "--quiet",
        )
        self.assertEqual(cli.EXIT_PASSED, status)


if __name__ == "__main__":
    unittest.main()
