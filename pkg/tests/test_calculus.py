import math
import unittest

import numpy as np

from heisenlab import calculus
from heisenlab import group
from heisenlab.data_classes.multi_index import DerivativeSpec, MultiIndex, PolynomialHG
from heisenlab.utilities import errors
from heisenlab.utilities.constants import GroupPoint
from tests.heisenlab_test_case import HeisenlabTestCase
from tests.testing_utils import gaussian, randomPoints

T = MultiIndex((0, 0, 1))


def tPolynomial():
    return PolynomialHG.monomial(T)


class TestMultiIndices(HeisenlabTestCase):
    def test_homogeneous_degree(self):
        self.assertEqual(3, calculus.homogeneousDegree((1, 0, 1)))
        self.assertEqual(4, calculus.homogeneousDegree((0, 1, 0, 1, 1)))

    def test_monomial_eval(self):
        z = GroupPoint((2.0, 3.0), 0.5)
        self.assertAlmostEqual(1.0, calculus.monomialEval((1, 0, 1), z))
        self.assertAlmostEqual(1.0, calculus.monomialEval((0, 0, 0), z))

    def test_monomial_eval_dimension_mismatch(self):
        with self.assertRaises(errors.DimensionMismatch):
            calculus.monomialEval((1, 0, 0, 0, 1), GroupPoint((1.0, 1.0), 0.0))

    def test_enumeration_is_sorted_by_degree(self):
        indices = MultiIndex.enumerate(1, 3)
        degrees = [index.degree for index in indices]
        self.assertEqual(sorted(degrees), degrees)
        self.assertEqual(MultiIndex.zero(1), indices[0])
        self.assertIn(MultiIndex((1, 0, 1)), indices)

    def test_invalid_multiindex(self):
        with self.assertRaises(errors.ArgumentError):
            MultiIndex((1, 0))
        with self.assertRaises(errors.ArgumentError):
            MultiIndex((1, -1, 0))


class TestExactVectorFields(HeisenlabTestCase):
    def test_horizontal_fields_on_t(self):
        self.assertEqual(0.5, calculus.applyVectorFieldExact(1, tPolynomial()).coefficient((0, 1, 0)))
        self.assertEqual(-0.5, calculus.applyVectorFieldExact(2, tPolynomial()).coefficient((1, 0, 0)))
        self.assertEqual(1.0, calculus.applyVectorFieldExact(3, tPolynomial()).constantTerm())

    def test_commutator_is_minus_t(self):
        polynomial = PolynomialHG(1, {(2, 0, 1): 1.0, (0, 1, 1): 3.0, (0, 0, 2): -2.0}, 4)
        x1x2 = calculus.applyDerivativeExact(MultiIndex((1, 1, 0)), polynomial)
        x2x1 = calculus.applyVectorFieldExact(
            2, calculus.applyVectorFieldExact(1, polynomial)
        )
        tDerivative = calculus.applyVectorFieldExact(3, polynomial)

        difference = x1x2 + PolynomialHG(
            1, {index: -value for index, value in x2x1.coefficients.items()}, 4
        )
        negated = PolynomialHG(
            1, {index: -value for index, value in tDerivative.coefficients.items()}, 4
        )
        self.assertTrue(difference.isclose(negated, 1e-12))

    def test_invalid_axis(self):
        with self.assertRaises(errors.ArgumentError):
            calculus.applyVectorFieldExact(4, tPolynomial())

    def test_interpolation_matrix_is_invertible(self):
        for n, degree in ((1, 3), (2, 2)):
            matrix = calculus.interpolationMatrix(n, degree)
            self.assertEqual(1.0, matrix[0, 0])
            self.assertLess(np.linalg.cond(matrix), 1e8)


class TestNumericalDerivatives(HeisenlabTestCase):
    def test_matches_exact_derivatives_of_polynomials(self):
        polynomial = PolynomialHG(1, {(2, 0, 1): 1.0, (0, 1, 1): 3.0, (1, 1, 0): -1.0}, 4)
        z = GroupPoint((0.4, -0.7), 0.3)
        zX, zT = z.asArrays()
        for entries in ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (2, 0, 0), (1, 0, 1)):
            index = MultiIndex(entries)
            exact = float(calculus.applyDerivativeExact(index, polynomial)(zX, zT))
            numeric = calculus.higherDerivative(index, polynomial, z)
            self.assertAlmostEqual(exact, numeric, places=5)

    def test_vector_field_on_a_gaussian(self):
        # X_1 exp(-|x|^2 - t^2) = (-2 x_1 - x_2 t) exp(...)
        z = GroupPoint((0.3, 0.5), -0.2)
        value = math.exp(-(0.09 + 0.25) - 0.04)
        expected = (-2 * 0.3 - 0.5 * -0.2) * value
        self.assertAlmostEqual(expected, calculus.vectorFieldApply(1, gaussian, z), places=7)

    def test_zero_index_returns_the_field(self):
        z = GroupPoint((0.3, 0.5), -0.2)
        zX, zT = z.asArrays()
        self.assertAlmostEqual(
            float(gaussian(zX, zT)), calculus.higherDerivative(MultiIndex.zero(1), gaussian, z)
        )

    def test_batched_evaluation(self):
        points = randomPoints(5, n=1, seed=4)
        x = np.array([z.x for z in points])
        t = np.array([z.t for z in points])
        index = MultiIndex((0, 1, 1))
        batch = calculus.higherDerivativeArrays(index, gaussian, x, t)
        single = [calculus.higherDerivative(index, gaussian, z) for z in points]
        self.assertAllAlmostEqual(single, list(batch))

    def test_degree_above_the_stable_maximum(self):
        spec = DerivativeSpec(maxDegree=6)
        with self.assertRaises(errors.DerivativeInstability):
            calculus.higherDerivative((0, 0, 4), gaussian, GroupPoint.identity(1), spec)

    def test_non_finite_values(self):
        def blowUp(x, t):
            return np.full(np.shape(t), np.inf)

        with self.assertRaises(errors.DerivativeInstability):
            calculus.vectorFieldApply(1, blowUp, GroupPoint.identity(1))

    def test_invalid_step(self):
        with self.assertRaises(errors.ArgumentError):
            DerivativeSpec(step=0.0)


class TestTaylor(HeisenlabTestCase):
    def test_taylor_polynomial_reproduces_polynomials(self):
        polynomial = PolynomialHG(1, {(2, 0, 0): 1.0, (0, 0, 1): 2.0, (0, 1, 0): -1.0}, 2)
        base = GroupPoint((0.5, -0.25), 0.75)
        taylor = calculus.leftTaylor(polynomial, base, 2)

        baseX, baseT = base.asArrays()
        for w in randomPoints(6, n=1, seed=8):
            wX, wT = w.asArrays()
            expected = float(polynomial(*group.mulArrays(baseX, baseT, wX, wT)))
            self.assertAlmostEqual(expected, float(taylor(wX, wT)), places=6)

    def test_taylor_polynomial_degree_zero(self):
        base = GroupPoint((0.1, 0.2), 0.3)
        taylor = calculus.leftTaylor(gaussian, base, 0)
        baseX, baseT = base.asArrays()
        self.assertAlmostEqual(float(gaussian(baseX, baseT)), taylor.constantTerm())

    def test_remainder_ratio(self):
        samples = randomPoints(6, n=1, seed=12, scale=0.3)
        report = calculus.taylorRemainderRatio(
            gaussian, GroupPoint((0.2, 0.1), 0.0), 2, samples, cloudSize=8
        )
        self.assertEqual(len(samples), len(report.ratios) + report.skipped)
        self.assertTrue(math.isfinite(report.constant))
        self.assertGreater(report.constant, 0.0)

    def test_remainder_ratio_needs_positive_order(self):
        with self.assertRaises(errors.ArgumentError):
            calculus.taylorRemainderRatio(gaussian, GroupPoint.identity(1), 0, [])


if __name__ == "__main__":
    unittest.main()
