import io
import json
import os
import unittest

from heisenlab.data_classes.experiment import ExperimentConfig, ExperimentReport
from heisenlab.utilities import errors
from heisenlab.utilities import experiment_io
from tests.heisenlab_test_case import HeisenlabTestCase

COLUMNS = ["criterion", "value", "passed"]


def makeReport(seed=0):
    config = ExperimentConfig("group-axioms", {"seed": seed})
    report = ExperimentReport(config, COLUMNS)
    report.addRow(["associativity", 1.5e-16, True])
    report.addRow(["inverse", 2.0, False])
    report.addCriterion("group-exactness", "associativity", True, 1.5e-16, 1e-10)
    report.addConstant("c0", 1.2337, 0.0)
    report.addPlot("curve", {"x": [1, 2], "y": {"line": [1, 4]}, "log": True})
    return report


class TestLoadConfig(HeisenlabTestCase):
    def test_defaults(self):
        config = experiment_io.loadConfig(None, "group-axioms")
        self.assertEqual(1, config.n)
        self.assertEqual(0, config.seed)
        self.assertEqual(100000, config.sample("groupSamples"))

    def test_file_and_seed_override(self):
        fn = os.path.join(self.dataRoot, "group_axioms.json")
        config = experiment_io.loadConfig(fn, "group-axioms", seed=9)
        self.assertEqual(2000, config.sample("groupSamples"))
        self.assertEqual(9, config.seed)

    def test_missing_file(self):
        with self.assertRaises(errors.FileNotFound):
            experiment_io.loadConfig(os.path.join(self.dataRoot, "missing.json"), "group-axioms")

    def test_malformed_json(self):
        with self.assertRaises(errors.ConfigurationError):
            experiment_io.loadConfig(os.path.join(self.dataRoot, "malformed.json"), "group-axioms")

    def test_unknown_key(self):
        with self.assertRaises(errors.ConfigurationError):
            experiment_io.loadConfig(os.path.join(self.dataRoot, "unknown_key.json"), "group-axioms")

    def test_config_for_another_experiment(self):
        with self.assertRaises(errors.ConfigurationError):
            experiment_io.loadConfig(os.path.join(self.dataRoot, "group_axioms.json"), "koranyi-props")


class TestArtifacts(HeisenlabTestCase):
    def test_csv_header(self):
        lines = experiment_io.reportToCsv(makeReport(seed=3)).splitlines()
        self.assertEqual("criterion,value,passed", lines[0])
        self.assertTrue(lines[1].startswith("#config_hash="))
        self.assertTrue(lines[1].endswith(",seed=3"))
        self.assertEqual("inverse,2,false", lines[3])

    def test_csv_read_back(self):
        report = makeReport(seed=3)
        paths = experiment_io.writeReport(report, self.outputRoot, plot=False)
        self.assertEqual(2, len(paths))

        document = experiment_io.readCsv(paths[0])
        self.assertEqual(COLUMNS, document["columns"])
        self.assertEqual(report.configHash, document["configHash"])
        self.assertEqual(3, document["seed"])
        self.assertEqual(["associativity", "1.5e-16", "true"], document["rows"][0])

    def test_json_summary(self):
        paths = experiment_io.writeReport(makeReport(), self.outputRoot, plot=False)
        with io.open(paths[1], "r", encoding="utf-8") as fd:
            document = json.load(fd)
        self.assertEqual("group-axioms", document["experiment"])
        self.assertTrue(document["passed"])
        self.assertEqual("group-exactness", document["criteria"][0]["criterion"])
        self.assertEqual("c0", document["constants"][0]["name"])

    def test_plots_are_written_on_request(self):
        paths = experiment_io.writeReport(makeReport(), self.outputRoot, plot=True)
        self.assertEqual(os.path.join(self.outputRoot, "group-axioms-curve.svg"), paths[-1])
        with io.open(paths[-1], "r", encoding="utf-8") as fd:
            firstPlot = fd.read()
        experiment_io.writeReport(makeReport(), self.outputRoot, plot=True)
        with io.open(paths[-1], "r", encoding="utf-8") as fd:
            self.assertEqual(firstPlot, fd.read())

    def test_read_csv_needs_the_header(self):
        fn = os.path.join(self.outputRoot, "headless.csv")
        with io.open(fn, "w", encoding="utf-8") as fd:
            fd.write("a,b\n1,2\n")
        with self.assertRaises(errors.ConfigurationError):
            experiment_io.readCsv(fn)


if __name__ == "__main__":
    unittest.main()
