import math
import os
import unittest

from heisenlab import harness
from heisenlab.data_classes.experiment import ExperimentConfig
from heisenlab.utilities import constants
from heisenlab.utilities import experiment_io
from tests.heisenlab_test_case import HeisenlabTestCase


class TestHarness(HeisenlabTestCase):
    def config(self, experiment, document=None):
        return ExperimentConfig(experiment, document, self.outputRoot)

    def test_every_experiment_is_registered(self):
        self.assertEqual(
            sorted(constants.Experiments.validOptions), sorted(harness.EXPERIMENTS)
        )

    def test_describe(self):
        described = dict(harness.describe())
        self.assertEqual(len(harness.EXPERIMENTS), len(described))
        for summary in described.values():
            self.assertTrue(summary)
        self.assertIn("X_z^I K(y, z)", described["kernel-derivatives"])

    def test_group_axioms(self):
        report = harness.run(
            self.config("group-axioms", {"samples": {"groupSamples": 2000}}), write=False
        )
        self.assertTrue(report.passed, report.criteria)
        self.assertEqual(harness.CHECK_COLUMNS, report.columns)
        self.assertEqual(len(report.criteria), len(report.rows))

    def test_failing_threshold_fails_the_run(self):
        report = harness.run(
            self.config(
                "group-axioms",
                {"samples": {"groupSamples": 200}, "thresholds": {"exactIdentity": -1.0}},
            ),
            write=False,
        )
        self.assertFalse(report.passed)

    def test_koranyi_props(self):
        report = harness.run(
            self.config("koranyi-props", {"samples": {"groupSamples": 2000}}), write=False
        )
        self.assertTrue(report.passed, report.criteria)
        constantsByName = {constant.name: constant.value for constant in report.constants}
        self.assertAlmostEqual(4.0, constantsByName["volume exponent"], delta=0.05)
        self.assertIn("ball-volume", report.plots)

    def test_luxemburg_golden(self):
        report = harness.run(
            self.config("luxemburg-golden", {"integration": {"maxEvaluations": 4000}}),
            write=False,
        )
        self.assertTrue(report.passed, report.criteria)
        self.assertAlmostEqual(harness.GOLDEN_RATIO, report.constants[0].value, places=4)

    def test_runs_are_reproducible(self):
        document = {"samples": {"groupSamples": 500}}
        first = harness.run(self.config("group-axioms", document), write=False)
        again = harness.run(
            self.config("group-axioms", dict(document, workers=3)), write=False
        )
        self.assertEqual(
            experiment_io.reportToCsv(first), experiment_io.reportToCsv(again)
        )

    def test_artifacts_are_written(self):
        config = ExperimentConfig(
            "group-axioms", {"samples": {"groupSamples": 200}}, self.outputRoot, plot=True
        )
        harness.run(config)
        self.assertTrue(os.path.exists(os.path.join(self.outputRoot, "group-axioms.csv")))
        self.assertTrue(os.path.exists(os.path.join(self.outputRoot, "group-axioms.json")))

    def smokeRun(self, experiment, samples, maxEvaluations=2000, kernel=None):
        document = {"samples": samples, "integration": {"maxEvaluations": maxEvaluations}}
        if kernel is not None:
            document["kernel"] = kernel
        return harness.run(self.config(experiment, document), write=False)

    def assertCriteria(self, report, expected, passing):
        byName = {}
        for result in report.criteria:
            byName.setdefault(result.criterion, []).append(result)
        for name in expected:
            self.assertIn(name, byName)
        for name in passing:
            for result in byName[name]:
                self.assertTrue(result.passed, result)
                self.assertTrue(math.isfinite(result.value), result)

    def test_calculus_suite(self):
        report = self.smokeRun("calculus-suite", {"taylorSamples": 16})
        self.assertCriteria(
            report,
            [
                "homogeneous-degree",
                "monomial-homogeneity",
                "vector-fields",
                "taylor-reproduction",
                "taylor-projector",
                "derivative-homogeneity",
                "moment-dimension",
                "taylor-remainder",
            ],
            ["homogeneous-degree", "monomial-homogeneity", "moment-dimension"],
        )

    def test_luxemburg_suite(self):
        report = self.smokeRun(
            "luxemburg-suite",
            {"powerIdentityCases": 2, "logHolderSamples": 200, "lpP0": [2.0]},
            maxEvaluations=4000,
        )
        self.assertCriteria(
            report,
            [
                "closed-form",
                "homogeneity",
                "golden-ratio",
                "power-identity",
                "quasi-triangle",
                "log-holder",
                "moment-degree",
            ],
            ["golden-ratio", "moment-degree"],
        )

    def test_atom_suite(self):
        report = self.smokeRun(
            "atom-suite", {"atomCount": 2, "atomDegrees": [0, 1], "atomP0": [2.0]}
        )
        self.assertCriteria(
            report,
            [
                "atom-conditions",
                "moment-residual",
                "moment-rank",
                "atom-transport",
                "indicator-counterexample",
            ],
            ["atom-conditions", "moment-rank", "indicator-counterexample"],
        )
        self.assertEqual(4, len(report.rows))

    def test_lp_lq_ratio(self):
        report = self.smokeRun(
            "lp-lq-ratio",
            {
                "corpusSize": 1,
                "lpP0": [2.0],
                "dilations": [0.5, 1.0],
                "covarianceSamples": 2,
                "nodeBudget": 32,
                "farShells": 2,
                "operatorBudget": 500,
            },
        )
        self.assertCriteria(report, ["lp-lq-flatness", "riesz-dilation-covariance"], [])
        for row in report.rows:
            self.assertTrue(math.isfinite(row[-1]))

    def test_lp_lq_ratio_for_an_alpha_zero_kernel(self):
        report = self.smokeRun(
            "lp-lq-ratio",
            {
                "corpusSize": 1,
                "lpP0": [2.0],
                "dilations": [0.5, 1.0],
                "nodeBudget": 32,
                "farShells": 2,
                "operatorBudget": 500,
            },
            kernel=harness.DILATED_KERNELS[0],
        )
        self.assertEqual(["lp-lq-flatness"], [result.criterion for result in report.criteria])
        for row in report.rows:
            self.assertEqual(row[2], row[3])

    def test_omega_geometry(self):
        report = self.smokeRun(
            "omega-geometry",
            {"separationSamples": 2000, "partitionSamples": 400, "dominationPoints": 1},
            maxEvaluations=1000,
            kernel=harness.DILATED_KERNELS[0],
        )
        self.assertCriteria(
            report,
            ["separation-closed-form", "separation", "partition", "domination-stability"],
            ["separation-closed-form", "separation", "partition"],
        )

    def test_kernel_derivatives(self):
        report = self.smokeRun(
            "kernel-derivatives", {"kernelPairs": 40, "derivativeOrders": [1]}
        )
        self.assertCriteria(
            report,
            ["kernel-derivative-stability", "kernel-normalization"],
            ["kernel-normalization"],
        )
        self.assertEqual(3, len(report.rows))

    def test_atom_uniform(self):
        report = self.smokeRun(
            "atom-uniform",
            {
                "uniformAtoms": 4,
                "radiusScales": 2,
                "nodeBudget": 32,
                "farShells": 2,
                "operatorBudget": 500,
            },
        )
        self.assertCriteria(report, ["exponent-symmetry", "uniform-bound"], ["exponent-symmetry"])
        self.assertEqual(4, len(report.rows))
        for share in report.column("tailShare"):
            self.assertGreaterEqual(share, 0.0)
            self.assertLess(share, 1.0)

    def test_far_field_decay(self):
        report = self.smokeRun("far-field-decay", {"decayRadii": [16.0, 32.0, 64.0]})
        self.assertCriteria(report, ["decay-exponent", "zero-atom"], ["zero-atom"])
        self.assertEqual(6, len(report.rows))

    def test_a_quantity_suite(self):
        report = self.smokeRun("a-quantity-suite", {"familyCount": 2, "familyMaxBalls": 2})
        self.assertCriteria(
            report,
            ["a-quantity-stability", "a-quantity-finite", "a-quantity-closed-form"],
            ["a-quantity-finite", "a-quantity-closed-form"],
        )


if __name__ == "__main__":
    unittest.main()
