import math
import unittest

import numpy as np

from heisenlab import integration
from heisenlab import varexp
from heisenlab.data_classes.exponent import (
    BallFamily,
    BallTransform,
    ExponentFunction,
    RadialProfile,
)
from heisenlab.data_classes.field import Field
from heisenlab.data_classes.geometry import KoranyiBall, RotationMatrix
from heisenlab.utilities import errors
from heisenlab.utilities.constants import GroupPoint
from tests.heisenlab_test_case import HeisenlabTestCase
from tests.testing_utils import makeBall, makeBump, makePoint

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0


def unitMeasureBall(center):
    radius = (1.0 / integration.ballVolumeConstant(center.n)) ** 0.25
    return KoranyiBall(center, radius)


def radialExponent():
    return ExponentFunction.radial(RadialProfile([0.0, 1.0, 4.0], [0.9, 0.8, 0.7]), 1)


class TestLuxemburgNorm(HeisenlabTestCase):
    def test_indicator_closed_form(self):
        for p0 in (0.5, 1.0, 2.5):
            ball = KoranyiBall(makePoint(), 1.3)
            value = varexp.luxemburgNorm(Field.indicator(ball), ExponentFunction.constant(p0, 1))
            self.assertRelativelyClose(value, integration.ballVolume(ball) ** (1.0 / p0), 1e-5)

    def test_modular_closed_form(self):
        ball = unitMeasureBall(GroupPoint.identity(1))
        p = ExponentFunction.constant(2.0, 1)
        self.assertRelativelyClose(varexp.modular(Field.indicator(ball) * 3.0, p, 1.0), 9.0, 1e-8)
        self.assertRelativelyClose(varexp.modular(Field.indicator(ball), p, 2.0), 0.25, 1e-8)

    def test_golden_ratio(self):
        first = unitMeasureBall(GroupPoint.identity(1))
        second = unitMeasureBall(GroupPoint((10.0, 0.0), 0.0))
        p = ExponentFunction.piecewise([first, second], [1.0, 2.0], 2.0)
        f = Field.indicator(first) + Field.indicator(second)
        self.assertAlmostEqual(GOLDEN_RATIO, varexp.luxemburgNorm(f, p), places=5)

    def test_homogeneity(self):
        p = radialExponent()
        f = makeBump()
        norm = varexp.luxemburgNorm(f, p)
        for c in (-3.0, 0.25, 7.0):
            self.assertRelativelyClose(varexp.luxemburgNorm(f * c, p), abs(c) * norm, 1e-5)

    def test_norm_on_rule(self):
        self.assertAlmostEqual(
            1.0, varexp.luxemburgNormOnRule([1.0, 1.0], [2.0, 2.0], [0.5, 0.5]), places=5
        )
        self.assertEqual(0.0, varexp.luxemburgNormOnRule([0.0, 0.0], [2.0, 2.0], [1.0, 1.0]))

    def test_modular_needs_positive_lambda(self):
        with self.assertRaises(errors.ArgumentError):
            varexp.modular(makeBump(), ExponentFunction.constant(2.0, 1), 0.0)

    def test_modular_needs_decay(self):
        f = Field.fromFunction(lambda x, t: np.ones(np.shape(t)), 1, decayExponent=1.0)
        with self.assertRaises(errors.NonIntegrableError):
            varexp.modular(f, ExponentFunction.constant(2.0, 1), 1.0)


class TestNormIdentities(HeisenlabTestCase):
    def test_power_identity(self):
        p = ExponentFunction.piecewise(
            [makeBall(radius=0.5), KoranyiBall(makePoint(), 0.8)], [0.7, 2.5], 1.5
        )
        f = makeBump() * 2.0 + Field.indicator(KoranyiBall(makePoint(), 0.8))
        for s in (p.underlineP, 1.7):
            report = varexp.powerIdentityCheck(f, p, s)
            self.assertTrue(report.passed, report)

    def test_quasi_triangle(self):
        p = radialExponent()
        f = makeBump()
        g = Field.bump(KoranyiBall(makePoint(), 0.7)) * -2.0
        holds, lhs, rhs = varexp.quasiTriangleCheck(f, g, p)
        self.assertTrue(holds)
        self.assertLessEqual(lhs, rhs * (1 + 1e-5))


class TestExponents(HeisenlabTestCase):
    def test_conjugate_exponent(self):
        q = varexp.conjugateExponent(ExponentFunction.constant(2.0, 1), 1.0)
        self.assertAlmostEqual(4.0, q.pMinus)
        self.assertAlmostEqual(4.0, q.pPlus)
        self.assertAlmostEqual(4.0, q.at(makePoint()))

    def test_conjugate_of_radial_exponent(self):
        p = radialExponent()
        q = varexp.conjugateExponent(p, 0.5)
        z = makePoint()
        self.assertAlmostEqual(1.0 / (1.0 / p.at(z) - 0.5 / 4.0), q.at(z))

    def test_conjugate_with_zero_alpha(self):
        p = radialExponent()
        self.assertIs(p, varexp.conjugateExponent(p, 0.0))

    def test_conjugate_out_of_range(self):
        with self.assertRaises(errors.ExponentError):
            varexp.conjugateExponent(ExponentFunction.constant(4.0, 1), 1.0)
        with self.assertRaises(errors.ArgumentError):
            varexp.conjugateExponent(ExponentFunction.constant(2.0, 1), 4.0)

    def test_declared_bounds_are_checked(self):
        with self.assertRaises(errors.ExponentError):
            ExponentFunction(lambda x, t: np.full(np.shape(t), 3.0), 1, 1.0, 2.0)
        with self.assertRaises(errors.ExponentError):
            ExponentFunction.constant(0.0, 1)

    def test_hardy_moment_degree(self):
        for n, pMinus, expected in ((1, 1.0, 0), (1, 0.5, 4), (2, 6.0 / 7.0, 1)):
            p = ExponentFunction.constant(pMinus, n)
            self.assertEqual(expected, varexp.hardyMomentDegree(p, n))

    def test_from_dict(self):
        p = ExponentFunction.fromDict({"kind": "radial", "knots": [0, 1], "values": [1.5, 2.0]}, 1)
        self.assertEqual(1.5, p.pMinus)
        self.assertEqual(2.0, p.pInfinity)
        with self.assertRaises(errors.ExponentError):
            ExponentFunction.fromDict({"kind": "radial", "knots": [0, 1]}, 1)


class TestLogHolder(HeisenlabTestCase):
    def test_constant_exponent(self):
        report = varexp.checkLogHolder(ExponentFunction.constant(1.5, 1), 500, seed=1)
        self.assertEqual(0.0, report.cLocal)
        self.assertEqual(0.0, report.cInfinity)
        self.assertTrue(report.isLogHolder)

    def test_radial_exponent(self):
        report = varexp.checkLogHolder(radialExponent(), 500, seed=1)
        self.assertEqual(0, report.violationCount)
        self.assertTrue(math.isfinite(report.cLocal))
        self.assertAlmostEqual(0.7, report.pInfinity)

    def test_jump_is_divergent(self):
        step = ExponentFunction(
            lambda x, t: np.where(x[..., 0] > 0, 2.0, 1.5), 1, 1.5, 2.0, name="step"
        )
        report = varexp.checkLogHolder(step, 500, seed=1)
        self.assertTrue(report.localDivergent)
        self.assertFalse(report.isLogHolder)

    def test_profile(self):
        report = varexp.checkProfileLogHolder(RadialProfile([0.0, 1.0], [1.0, 2.0]), 500)
        self.assertEqual(0, report.violationCount)
        self.assertEqual(0.0, report.cInfinity)


class TestAQuantity(HeisenlabTestCase):
    def test_single_ball(self):
        p = radialExponent()
        family = BallFamily([KoranyiBall(makePoint(), 0.8)], [2.5])
        self.assertRelativelyClose(varexp.aQuantity(family, p), 2.5, 1e-4)

    def test_empty_family(self):
        family = BallFamily([makeBall()], [0.0])
        self.assertEqual(0.0, varexp.aQuantity(family, radialExponent()))

    def test_identity_transform(self):
        family = BallFamily([makeBall(), KoranyiBall(makePoint(), 0.5)], [1.0, 2.0])
        report = varexp.bStarComparison(family, radialExponent(), BallTransform.identity(1), 1.0)
        self.assertAlmostEqual(1.0, report.ratio, places=8)

    def test_expanded_balls_under_a_rotation(self):
        family = BallFamily([makeBall(radius=0.5), KoranyiBall(makePoint(), 0.5)], [1.0, 2.0])
        transform = BallTransform.rotation(RotationMatrix.fromAngle(math.pi / 2))
        report = varexp.bStarComparison(family, radialExponent(), transform, 2.0)
        self.assertGreater(report.ratio, 0.0)
        self.assertTrue(math.isfinite(report.ratio))
        self.assertRelativelyClose(report.ratio, report.numerator / report.denominator, 1e-12)

    def test_symmetry_violation(self):
        step = ExponentFunction(
            lambda x, t: np.where(x[..., 0] > 0, 2.0, 1.5), 1, 1.5, 2.0, name="step"
        )
        transform = BallTransform.rotation(RotationMatrix.fromAngle(math.pi / 2))
        with self.assertRaises(errors.SymmetryViolation):
            varexp.bStarComparison(BallFamily([makeBall()], [1.0]), step, transform, 2.0)

    def test_gamma_below_one(self):
        with self.assertRaises(errors.ArgumentError):
            varexp.bStarComparison(
                BallFamily([makeBall()], [1.0]), radialExponent(), BallTransform.identity(1), 0.5
            )


if __name__ == "__main__":
    unittest.main()
