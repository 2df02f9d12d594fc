import math
import unittest

import numpy as np

from heisenlab import group
from heisenlab.data_classes.geometry import Dimension, KoranyiBall, RotationMatrix
from heisenlab.utilities import errors
from heisenlab.utilities.constants import GroupPoint
from tests.heisenlab_test_case import HeisenlabTestCase
from tests.testing_utils import makePoint, randomPoints


class TestGroupLaw(HeisenlabTestCase):
    def test_product_example(self):
        a = GroupPoint((1.0, 0.0), 0.0)
        b = GroupPoint((0.0, 1.0), 0.0)

        # x^T J y = 1/2 (x_2 y_1 - x_1 y_2) for n = 1
        self.assertEqual(GroupPoint((1.0, 1.0), -0.5), group.mul(a, b))
        self.assertEqual(GroupPoint((1.0, 1.0), 0.5), group.mul(b, a))

    def test_identity_is_neutral(self):
        e = GroupPoint.identity(1)
        for a in randomPoints(10):
            self.assertEqual(a, group.mul(a, e))
            self.assertEqual(a, group.mul(e, a))

    def test_inverse(self):
        e = GroupPoint.identity(1)
        a = makePoint()
        self.assertEqual(GroupPoint((-1.0, 0.5), -0.25), group.inv(a))
        self.assertEqual(e, group.mul(a, group.inv(a)))
        self.assertEqual(e, group.mul(group.inv(a), a))

    def test_associativity(self):
        a, b, c = randomPoints(3, seed=1)
        self.assertPointsAlmostEqual(
            group.mul(group.mul(a, b), c), group.mul(a, group.mul(b, c)), places=12
        )

    def test_symplectic_form_is_skew(self):
        for n in (1, 2, 3):
            J = group.symplecticForm(n)
            self.assertTrue(np.array_equal(J.T, -J))
            x = np.random.default_rng(n).standard_normal(2 * n)
            self.assertAlmostEqual(0.0, float(x @ J @ x), places=14)

    def test_symplectic_pairing_matches_the_matrix(self):
        rng = np.random.default_rng(3)
        x = rng.standard_normal((5, 4))
        y = rng.standard_normal((5, 4))
        J = group.symplecticForm(2)
        expected = np.einsum("bi,ij,bj->b", x, J, y)
        np.testing.assert_allclose(group.symplecticPairing(x, y), expected, atol=1e-14)

    def test_mismatched_dimensions_raise(self):
        with self.assertRaises(errors.DimensionMismatch):
            group.mul(GroupPoint((1.0, 0.0), 0.0), GroupPoint((1.0, 0.0, 0.0, 0.0), 0.0))

    def test_homogeneous_dimension(self):
        self.assertEqual(4, group.homogeneousDimension(1))
        self.assertEqual(6, Dimension(2).Q)

    def test_array_form_matches_point_form(self):
        points = randomPoints(6, seed=4)
        x = np.array([point.x for point in points])
        t = np.array([point.t for point in points])
        productX, productT = group.mulArrays(x[:3], t[:3], x[3:], t[3:])
        for i in range(3):
            self.assertPointsAlmostEqual(
                group.mul(points[i], points[i + 3]),
                GroupPoint.fromArrays(productX[i], productT[i]),
                places=14,
            )


class TestDilationsAndRotations(HeisenlabTestCase):
    def test_dilation_is_an_automorphism(self):
        a, b = randomPoints(2, seed=5)
        r = 1.7
        self.assertPointsAlmostEqual(
            group.dilate(r, group.mul(a, b)),
            group.mul(group.dilate(r, a), group.dilate(r, b)),
            places=12,
        )

    def test_dilation_needs_a_positive_factor(self):
        with self.assertRaises(errors.ArgumentError):
            group.dilate(0.0, makePoint())

    def test_rotation_is_an_automorphism(self):
        A = RotationMatrix.fromAngle(0.7)
        a, b = randomPoints(2, seed=6)
        self.assertPointsAlmostEqual(
            group.rotate(A, group.mul(a, b)),
            group.mul(group.rotate(A, a), group.rotate(A, b)),
            places=12,
        )

    def test_rotation_validation(self):
        with self.assertRaises(errors.InvalidRotationMatrix):
            RotationMatrix([[1.0, 0.0], [0.0, -1.0]])
        with self.assertRaises(errors.InvalidRotationMatrix):
            RotationMatrix([[2.0, 0.0], [0.0, 0.5]])

        # A symplectic rotation in one block and the identity in the other
        A = RotationMatrix.fromBlockAngles([math.pi / 3, 0.0])
        self.assertEqual(2, A.n)
        self.assertEqual(RotationMatrix.identity(2), RotationMatrix(A.matrix @ A.inverse().matrix))


class TestKoranyiNorm(HeisenlabTestCase):
    def test_examples(self):
        self.assertAlmostEqual(1.0, group.koranyiNorm(GroupPoint((1.0, 0.0), 0.0)))
        self.assertAlmostEqual(2.0, group.koranyiNorm(GroupPoint((0.0, 0.0), 1.0)))
        self.assertAlmostEqual(0.0, group.koranyiNorm(GroupPoint.identity(2)))

    def test_homogeneity_and_symmetry(self):
        for a in randomPoints(20, seed=7):
            self.assertAlmostEqual(
                3.0 * group.koranyiNorm(a), group.koranyiNorm(group.dilate(3.0, a)), places=10
            )
            self.assertAlmostEqual(group.koranyiNorm(a), group.koranyiNorm(group.inv(a)), places=12)

    def test_triangle_inequality(self):
        points = randomPoints(40, seed=8)
        for a, b in zip(points[::2], points[1::2]):
            self.assertLessEqual(
                group.koranyiNorm(group.mul(a, b)),
                group.koranyiNorm(a) + group.koranyiNorm(b) + 1e-12,
            )

    def test_distance_is_left_invariant(self):
        a, b, c = randomPoints(3, seed=9)
        self.assertAlmostEqual(
            group.koranyiDistance(a, b),
            group.koranyiDistance(group.mul(c, a), group.mul(c, b)),
            places=10,
        )


class TestKoranyiBall(HeisenlabTestCase):
    def test_membership_is_strict(self):
        ball = KoranyiBall.centered(1, 1.0)
        self.assertTrue(ball.contains(GroupPoint((0.5, 0.0), 0.0)))
        self.assertFalse(ball.contains(GroupPoint((1.0, 0.0), 0.0)))

    def test_translated_membership(self):
        center = makePoint()
        ball = KoranyiBall(center, 0.5)
        self.assertTrue(ball.contains(center))
        self.assertTrue(ball.contains(group.mul(center, GroupPoint((0.2, 0.0), 0.0))))
        self.assertFalse(ball.contains(GroupPoint.identity(1)))

    def test_radius_must_be_positive(self):
        with self.assertRaises(errors.ArgumentError):
            KoranyiBall.centered(1, 0.0)


if __name__ == "__main__":
    unittest.main()
