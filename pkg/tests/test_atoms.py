import unittest

import numpy as np

from heisenlab import atoms
from heisenlab import integration
from heisenlab.data_classes.atom import Atom, AtomicCombination, BumpDictionary, unitBallRule
from heisenlab.data_classes.exponent import ExponentFunction, RadialProfile
from heisenlab.data_classes.geometry import Dimension, KoranyiBall
from heisenlab.data_classes.multi_index import MultiIndex
from heisenlab.utilities import constants
from heisenlab.utilities import errors
from heisenlab.utilities.constants import GroupPoint
from tests.heisenlab_test_case import HeisenlabTestCase
from tests.testing_utils import makePoint


def radialExponent():
    return ExponentFunction.radial(RadialProfile([0.0, 1.0, 4.0], [0.9, 0.8, 0.7]), 1)


class TestAtoms(HeisenlabTestCase):
    def setUp(self):
        super(TestAtoms, self).setUp()
        self.p = radialExponent()
        self.ball = KoranyiBall(makePoint(), 0.5)
        self.atom = atoms.makeAtom(self.ball, self.p, 2.0, 1, seed=3)

    def test_moment_dimension(self):
        self.assertEqual(1, atoms.momentDimension(1, 0))
        self.assertEqual(3, atoms.momentDimension(1, 1))
        self.assertEqual(7, atoms.momentDimension(1, 2))
        with self.assertRaises(errors.ArgumentError):
            atoms.momentDimension(1, -1)

    def test_random_atom_verifies(self):
        report = atoms.verifyAtom(self.atom)
        self.assertTrue(report.supportOk)
        self.assertTrue(report.sizeOk)
        self.assertTrue(report.momentsOk, report.maxMomentResidual)
        self.assertTrue(report.passed)

    def test_size_certificate(self):
        report = atoms.verifyAtom(self.atom)
        self.assertRelativelyClose(report.lpNorm, constants.ATOM_SIZE_SLACK * report.sizeBound, 1e-6)
        self.assertRelativelyClose(self.atom.lpNorm, report.lpNorm, 1e-9)

    def test_atoms_depend_only_on_the_seed(self):
        again = atoms.makeAtom(self.ball, self.p, 2.0, 1, seed=3)
        self.assertEqual(self.atom, again)
        other = atoms.makeAtom(self.ball, self.p, 2.0, 1, seed=4)
        self.assertNotEqual(self.atom, other)

    def test_moment_projection(self):
        dictionary = BumpDictionary(1, 12)
        projected = atoms.projectOntoMomentKernel(np.ones(12), dictionary, 1)
        residual = atoms.momentMatrix(dictionary, 1) @ projected
        self.assertLess(float(np.max(np.abs(residual))), 1e-12)

    def test_closed_form_moments_match_quadrature(self):
        dictionary = atoms.defaultDictionary(1, 2)
        rule = unitBallRule(1, 16, 40)
        exact = atoms.momentMatrix(dictionary, 2)
        estimated = atoms.quadratureMomentMatrix(dictionary, 2, rule)
        np.testing.assert_allclose(estimated, exact, rtol=1e-9, atol=1e-13)

    def test_closed_form_moment_of_the_flat_profile(self):
        dictionary = BumpDictionary(1, 1, profile=constants.BumpProfiles.FLAT, degree=0)
        volume = atoms.momentMatrix(dictionary, 0)[0, 0]
        self.assertAlmostEqual(integration.ballVolumeConstant(1), volume, places=12)
        self.assertAlmostEqual(
            integration.sphereMeasure(Dimension(2)),
            atoms.sphereMonomialIntegral(MultiIndex.zero(2)),
            places=12,
        )

    def test_moment_rank(self):
        for D in (0, 1, 2):
            matrix = atoms.momentMatrix(atoms.defaultDictionary(1, D), D)
            self.assertEqual(atoms.momentDimension(1, D), int(np.linalg.matrix_rank(matrix)))

    def test_moments_vanish_on_an_unrelated_rule(self):
        orders = integration.GridOrders(48, 48, 96)
        rule = integration.shellRule(1, 0.0, self.ball.radius, orders, center=self.ball.center)
        for D in (0, 1, 2):
            atom = atoms.makeAtom(self.ball, self.p, 2.0, D, seed=11)
            residuals = atoms.quadratureMomentResiduals(atom, rule)
            self.assertLess(max(residuals.values()), 1e-9, D)

    def test_moments_vanish_under_sampling(self):
        for D in (0, 1, 2):
            atom = atoms.makeAtom(self.ball, self.p, 2.0, D, seed=12)
            sigmas = atoms.sampledMomentSigmas(atom, constants.MOMENT_SAMPLES, seed=1)
            self.assertLess(sigmas, constants.MOMENT_SIGMAS, D)

    def test_perturbed_coefficients_fail_the_moment_check(self):
        coefficients = np.array(self.atom.coefficients)
        coefficients[0] += 1e-3 * np.max(np.abs(coefficients))
        report = atoms.verifyAtom(self.atom.withCoefficients(coefficients))
        self.assertFalse(report.momentsOk)
        self.assertGreater(report.maxMomentResidual, constants.MOMENT_TOLERANCE)

    def test_vanishes_outside_the_ball(self):
        x = np.array([[3.0, 3.0], [-2.0, 0.5]])
        t = np.array([0.0, 4.0])
        np.testing.assert_array_equal(np.zeros(2), self.atom(x, t))

    def test_broken_support_is_detected(self):
        atom = atoms.makeAtom(self.ball, self.p, 2.0, 1, seed=3, supportFactor=1.5)
        self.assertFalse(atoms.verifyAtom(atom).supportOk)

    def test_indicator_has_a_nonzero_moment(self):
        atom = atoms.indicatorAtom(self.ball, self.p, 2.0, 0)
        report = atoms.verifyAtom(atom)
        self.assertTrue(report.supportOk)
        self.assertTrue(report.sizeOk)
        self.assertFalse(report.momentsOk)

    def test_translation(self):
        moved = atoms.translateAtom(self.atom, self.ball.center)
        self.assertEqual(GroupPoint.identity(1), moved.ball.center)
        self.assertRelativelyClose(moved.lpNorm, self.atom.lpNorm, 1e-9)
        self.assertTrue(atoms.verifyAtom(moved).momentsOk)

    def test_translation_needs_the_center(self):
        with self.assertRaises(errors.CenterMismatch):
            atoms.translateAtom(self.atom, GroupPoint.identity(1))

    def test_dilation(self):
        dilated = atoms.dilateAtom(self.atom, 3.0)
        self.assertAlmostEqual(1.5, dilated.ball.radius)
        self.assertRelativelyClose(dilated.lpNorm, self.atom.lpNorm, 1e-9)
        report = atoms.verifyAtom(dilated)
        self.assertTrue(report.supportOk)
        self.assertTrue(report.momentsOk)

    def test_invalid_parameters(self):
        with self.assertRaises(errors.ArgumentError):
            atoms.makeAtom(self.ball, self.p, 1.0, 1, seed=0)
        with self.assertRaises(errors.ArgumentError):
            atoms.makeAtom(self.ball, self.p, 2.0, 1, seed=0, dictionarySize=3)
        with self.assertRaises(errors.ArgumentError):
            atoms.dilateAtom(self.atom, 0.0)

    def test_json_record(self):
        restored = Atom.fromJson(self.atom.toJson(), self.p)
        self.assertEqual(self.atom, restored)
        self.assertEqual(self.atom.lpNorm, restored.lpNorm)

    def test_incomplete_record(self):
        document = self.atom.toDict()
        del document["coefficients"]
        with self.assertRaises(errors.ConfigurationError):
            Atom.fromDict(document)

    def test_atomic_combination(self):
        other = atoms.makeAtom(KoranyiBall(GroupPoint((0.0, 0.0), 0.0), 1.0), self.p, 2.0, 1, seed=8)
        combination = AtomicCombination([self.atom, other], [2.0, 0.5])
        x = np.array([[0.1, 0.2], [0.4, -0.3], [3.0, 3.0]])
        t = np.array([0.05, -0.1, 2.0])
        expected = 2.0 * self.atom(x, t) + 0.5 * other(x, t)
        np.testing.assert_allclose(combination(x, t), expected, rtol=1e-12, atol=1e-14)

        field = combination.asField()
        self.assertEqual([self.ball, other.ball], field.support)
        self.assertEqual([self.ball, other.ball], combination.balls())
        np.testing.assert_allclose(field(x, t), expected, rtol=1e-12, atol=1e-14)

    def test_atomic_combination_weights(self):
        with self.assertRaises(errors.ArgumentError):
            AtomicCombination([self.atom], [1.0, 2.0])
        with self.assertRaises(errors.ArgumentError):
            AtomicCombination([self.atom], [-1.0])


if __name__ == "__main__":
    unittest.main()
