import math
import unittest

import numpy as np

from heisenlab import atoms
from heisenlab import group
from heisenlab import operators
from heisenlab.data_classes.exponent import ExponentFunction
from heisenlab.data_classes.field import Field
from heisenlab.data_classes.geometry import IntegrationSpec, KoranyiBall
from heisenlab.data_classes.kernel_spec import KernelSpec
from heisenlab.data_classes.quadrature_rule import QuadratureRule
from heisenlab.utilities import constants
from heisenlab.utilities import errors
from heisenlab.utilities.constants import GroupPoint
from tests.heisenlab_test_case import HeisenlabTestCase
from tests.testing_utils import makeBall, makeBump, makePoint, randomPoints

SMALL_SPEC = IntegrationSpec(maxEvaluations=2000, tolerance=1e-2)


def dilatedKernel():
    return KernelSpec.dilated(1, [2.0, 2.0], [1.0, 2.0])


class TestKernel(HeisenlabTestCase):
    def test_riesz_kernel_values(self):
        kernel = KernelSpec.riesz(2.0, 1)
        origin = GroupPoint.identity(1)
        self.assertAlmostEqual(1.0, operators.kernelEval(kernel, origin, GroupPoint((1.0, 0.0), 0.0)))
        self.assertAlmostEqual(0.25, operators.kernelEval(kernel, origin, GroupPoint((2.0, 0.0), 0.0)))

    def test_singular_preimages(self):
        z = GroupPoint((1.0, -0.5), 0.25)
        first, second = operators.singularPreimages(dilatedKernel(), z)
        self.assertPointsAlmostEqual(z, first, 12)
        self.assertPointsAlmostEqual(GroupPoint((2.0, -1.0), 1.0), second, 12)

    def test_kernel_blows_up_at_the_preimages(self):
        kernel = dilatedKernel()
        z = makePoint()
        for point in operators.singularPreimages(kernel, z):
            self.assertEqual(math.inf, operators.kernelEval(kernel, point, z))

    def test_pair_separation_closed_form(self):
        points = randomPoints(20, n=1, seed=6)
        x = np.array([z.x for z in points])
        t = np.array([z.t for z in points])
        direct, closed = operators.pairSeparationArrays(1.0, 2.5, x, t)
        np.testing.assert_allclose(direct, closed, rtol=1e-12)


class TestSeparation(HeisenlabTestCase):
    def test_two_radii(self):
        constants = operators.separationConstants([1.0, 2.0])
        self.assertAlmostEqual(1.0, constants.beta)
        self.assertAlmostEqual(2.0, constants.gammaProof)
        self.assertAlmostEqual(3.0, constants.gammaStar)

    def test_three_radii(self):
        constants = operators.separationConstants([1.0, 1.5, 2.5])
        self.assertAlmostEqual(0.5, constants.beta)
        self.assertAlmostEqual(2.5, constants.gammaProof)
        self.assertAlmostEqual(3.5, constants.gammaStar)

    def test_coinciding_squares(self):
        with self.assertRaises(errors.KernelSpecError):
            operators.separationConstants([2.0, 2.0])
        with self.assertRaises(errors.KernelSpecError):
            operators.separationConstants([1.0, -1.0])

    def test_expanded_balls(self):
        balls = operators.expandedBalls(dilatedKernel(), KoranyiBall(makePoint(), 0.1), 1, 2.0)
        self.assertEqual(2, len(balls))
        self.assertAlmostEqual(2.0 * 2.0 * 3.0 * 0.1, balls[0].radius)
        self.assertPointsAlmostEqual(GroupPoint((0.5, -0.25), 0.0625), balls[1].center, 12)


class TestOmegaPartition(HeisenlabTestCase):
    def test_labels(self):
        kernel = dilatedKernel()
        z = makePoint()
        self.assertEqual(1, operators.omegaPartition(kernel, z, z))
        self.assertEqual(2, operators.omegaPartition(kernel, z, group.dilate(2.0, z)))
        self.assertEqual(3, operators.omegaPartition(kernel, z, GroupPoint.identity(1)))
        self.assertEqual(4, operators.omegaPartition(kernel, z, group.dilate(100.0, z)))

    def test_every_point_gets_one_label(self):
        kernel = KernelSpec.dilated(1, [4.0 / 3] * 3, [1.0, 1.5, 2.5])
        points = randomPoints(200, n=1, seed=2, scale=6.0)
        x = np.array([p.x for p in points])
        t = np.array([p.t for p in points])
        labels = operators.omegaLabelArrays(kernel, makePoint(), x, t)
        self.assertTrue(np.all((labels >= 1) & (labels <= 5)))

    def test_needs_alpha_zero_and_z_off_the_identity(self):
        with self.assertRaises(errors.KernelSpecError):
            operators.omegaPartition(KernelSpec.riesz(1.0, 1), makePoint(), makePoint())
        with self.assertRaises(errors.ArgumentError):
            operators.omegaPartition(dilatedKernel(), GroupPoint.identity(1), makePoint())

    def test_domination_reports(self):
        reports = operators.omegaDomination(
            dilatedKernel(),
            makeBump(radius=0.5),
            GroupPoint((0.3, 0.2), 0.1),
            IntegrationSpec(maxEvaluations=1000, tolerance=0.1),
            maximalRadii=[0.25, 0.5, 1.0, 2.0],
        )
        self.assertEqual([1, 2, 3, 4], [report.label for report in reports])
        for report in reports:
            self.assertGreaterEqual(report.ratio, 0.0)


class TestApplyT(HeisenlabTestCase):
    def test_riesz_dilation_covariance(self):
        alpha = 1.0
        kernel = KernelSpec.riesz(alpha, 1)
        f = makeBump()
        z = makePoint()
        r = 2.0
        dilated = operators.applyT(kernel, f.composedWithDilation(r), z)
        direct = operators.applyT(kernel, f, group.dilate(r, z))
        self.assertRelativelyClose(dilated.value * r ** alpha, direct.value, 1e-6)

    def test_core_about_the_singularity_is_added(self):
        # int_{B_1(e)} rho^{alpha - Q} = sigma / alpha = pi^2 / 2 for alpha = 1 on H^1
        f = Field.indicator(KoranyiBall.centered(1, 1.0))
        result = operators.applyT(
            KernelSpec.riesz(1.0, 1),
            f,
            GroupPoint.identity(1),
            errorMode=constants.ErrorReportingMode.SILENCE,
        )
        self.assertRelativelyClose(math.pi ** 2 / 2.0, result.value, 1e-8)
        self.assertGreater(result.error, 0.0)

    def test_riesz_domination_of_a_positive_field(self):
        report = operators.rieszDominationCheck(KernelSpec.riesz(1.0, 1), makeBump(), makePoint(), SMALL_SPEC)
        self.assertAlmostEqual(1.0, report.ratio, places=8)

    def test_riesz_domination_needs_positive_alpha(self):
        with self.assertRaises(errors.KernelSpecError):
            operators.rieszDominationCheck(dilatedKernel(), makeBump(), makePoint())

    def test_unbounded_fields_are_rejected(self):
        f = Field.fromFunction(lambda x, t: np.ones(np.shape(t)), 1)
        with self.assertRaises(errors.ArgumentError):
            operators.applyT(KernelSpec.riesz(1.0, 1), f, makePoint())

    def test_dimension_mismatch(self):
        with self.assertRaises(errors.DimensionMismatch):
            operators.applyT(KernelSpec.riesz(1.0, 2), makeBump(), GroupPoint((0, 0, 0, 0), 0))

    def test_riesz_order_range(self):
        with self.assertRaises(errors.ArgumentError):
            operators.applyRiesz(4.0, makeBump(), makePoint())

    def test_far_field_decay(self):
        fit = operators.fitDecayExponent(
            KernelSpec.riesz(1.0, 1),
            makeBump(radius=0.5),
            GroupPoint((1.0, 0.0), 0.0),
            [8.0, 16.0, 32.0, 64.0],
            SMALL_SPEC,
        )
        self.assertAlmostEqual(-3.0, fit.exponent, delta=0.05)

    def test_far_field_decay_of_an_atom(self):
        # the field carries no rule, so T a is integrated on the spec's own ball grid
        ball = KoranyiBall.centered(1, 1.0)
        atom = atoms.makeAtom(ball, ExponentFunction.constant(1.5, 1), 2.0, 1, seed=5)
        field = Field(atom, 1, [ball], name="atom")
        fit = operators.fitDecayExponent(
            KernelSpec.riesz(1.0, 1),
            field,
            GroupPoint((1.0, 0.5), 0.3),
            [16.0, 32.0, 64.0, 128.0],
            IntegrationSpec(maxEvaluations=60000),
        )
        self.assertAlmostEqual(1.0 - 4 - 2, fit.exponent, delta=0.3)

    def test_decay_direction(self):
        with self.assertRaises(errors.ArgumentError):
            operators.fitDecayExponent(
                KernelSpec.riesz(1.0, 1), makeBump(), GroupPoint.identity(1), [1.0, 2.0, 4.0]
            )


class TestMaximalFunctions(HeisenlabTestCase):
    def test_average_of_an_indicator(self):
        f = Field.indicator(makeBall())
        value = operators.fractionalMaximal(
            0.0, f, GroupPoint.identity(1), [0.25, 0.5], offCenterCount=0
        )
        self.assertAlmostEqual(1.0, value, places=8)

    def test_more_radii_never_lower_the_value(self):
        f = makeBump()
        z = makePoint()
        few = operators.fractionalMaximal(1.0, f, z, [1.0], SMALL_SPEC)
        more = operators.fractionalMaximal(1.0, f, z, [1.0, 2.0, 4.0], SMALL_SPEC)
        self.assertGreaterEqual(more, few)

    def test_grand_maximal_proxy(self):
        f = makeBump()
        small = operators.grandMaximalProxy(f, makePoint(), dictionarySize=3, spec=SMALL_SPEC)
        large = operators.grandMaximalProxy(f, makePoint(), dictionarySize=6, spec=SMALL_SPEC)
        self.assertGreater(small, 0.0)
        self.assertGreaterEqual(large, small)

    def test_distribution_function(self):
        region = KoranyiBall.centered(1, 2.0)
        levels = [0.0, 0.1, 1e9]
        measures = operators.distributionFunction(
            makeBump(), levels, region, 20, seed=1, spec=SMALL_SPEC
        )
        self.assertEqual(3, len(measures))
        self.assertTrue(all(a >= b for a, b in zip(measures[:-1], measures[1:])))
        self.assertEqual(0.0, measures[-1])


class TestKernelDerivatives(HeisenlabTestCase):
    def test_bound_for_the_riesz_kernel(self):
        kernel = KernelSpec.riesz(1.0, 1)
        yX, yT, zX, zT = operators.sampleKernelPairs(kernel, 20, seed=3)
        report = operators.kernelDerivativeBound(kernel, 1, yX, yT, zX, zT)
        self.assertAlmostEqual(1.0, report.byDegree[0], places=12)
        self.assertGreater(report.constant, 0.0)
        self.assertTrue(math.isfinite(report.constant))
        self.assertEqual(20, report.samples + report.skipped)

    def test_sampled_pairs_avoid_the_singular_sets(self):
        kernel = dilatedKernel()
        yX, yT, zX, zT = operators.sampleKernelPairs(kernel, 50, seed=4)
        self.assertEqual(50, len(yT))
        nearest = np.min(operators.preimageDistances(kernel, yX, yT, zX, zT), axis=0)
        self.assertTrue(np.all(nearest >= 0.1))


class TestOperatorSamples(HeisenlabTestCase):
    def setUp(self):
        super(TestOperatorSamples, self).setUp()
        self.kernel = KernelSpec.riesz(1.0, 1)

    def rule(self, weight):
        return QuadratureRule(np.zeros((1, 2)), np.zeros(1), np.array([weight]))

    def test_single_piece(self):
        samples = operators.OperatorSamples(self.kernel, [self.rule(2.0)], [np.array([3.0])])
        self.assertAlmostEqual(math.sqrt(18.0), samples.lebesgueNorm(2.0))

    def test_tail_continuation(self):
        # the last shell is continued geometrically with ratio 2^((alpha - Q) q0 + Q) = 1/4
        samples = operators.OperatorSamples(
            self.kernel,
            [self.rule(2.0), self.rule(2.0)],
            [np.array([3.0]), np.array([2.0])],
        )
        self.assertAlmostEqual(math.sqrt(18.0 + 8.0 + 8.0 / 3.0), samples.lebesgueNorm(2.0))

    def test_luxemburg_tail_continuation(self):
        samples = operators.OperatorSamples(
            self.kernel,
            [self.rule(2.0), self.rule(2.0)],
            [np.array([3.0]), np.array([2.0])],
        )
        q = ExponentFunction.constant(2.0, 1)
        self.assertRelativelyClose(math.sqrt(18.0 + 8.0 + 8.0 / 3.0), samples.luxemburgNorm(q), 1e-5)
        self.assertAlmostEqual((8.0 / 3.0) / (18.0 + 8.0 + 8.0 / 3.0), samples.luxemburgTailShare(q), places=4)

    def test_faster_decay_for_atoms(self):
        # ratio 2^(-6 + 4) = 1/4 with q0 = 1
        samples = operators.OperatorSamples(
            self.kernel,
            [self.rule(2.0), self.rule(2.0)],
            [np.array([3.0]), np.array([2.0])],
            decayExponent=-6.0,
        )
        self.assertAlmostEqual(6.0 + 4.0 + 4.0 / 3.0, samples.lebesgueNorm(1.0))
        self.assertRelativelyClose(
            6.0 + 4.0 + 4.0 / 3.0, samples.luxemburgNorm(ExponentFunction.constant(1.0, 1)), 1e-5
        )

    def test_luxemburg_tail_needs_integrability(self):
        samples = operators.OperatorSamples(
            self.kernel,
            [self.rule(1.0), self.rule(1.0)],
            [np.array([1.0]), np.array([1.0])],
        )
        with self.assertRaises(errors.ArgumentError):
            samples.luxemburgNorm(ExponentFunction.constant(1.2, 1))

    def test_exponent_needs_integrability(self):
        samples = operators.OperatorSamples(self.kernel, [self.rule(1.0)], [np.array([1.0])])
        with self.assertRaises(errors.ArgumentError):
            samples.lebesgueNorm(1.0)
        with self.assertRaises(errors.ArgumentError):
            operators.operatorLebesgueNorm(self.kernel, makeBump(), 1.0)


if __name__ == "__main__":
    unittest.main()
