import unittest
import os

import numpy as np


class HeisenlabTestCase(unittest.TestCase):
    def __init__(self, *args, **kargs):
        super(HeisenlabTestCase, self).__init__(*args, **kargs)

        root = os.path.dirname(os.path.realpath(__file__))
        self.dataRoot = os.path.join(root, "files")
        self.outputRoot = os.path.join(self.dataRoot, "test_output")

    def setUp(self):
        if not os.path.exists(self.outputRoot):
            os.makedirs(self.outputRoot)

    def assertAllAlmostEqual(self, listA, listB, places=7):
        self.assertEqual(len(listA), len(listB))
        for valA, valB in zip(listA, listB):
            self.assertAlmostEqual(valA, valB, places=places)

    def assertRelativelyClose(self, value, expected, tolerance):
        scale = max(abs(expected), 1e-300)
        self.assertLessEqual(
            abs(value - expected) / scale,
            tolerance,
            f"{value} differs from {expected} by more than {tolerance} relative",
        )

    def assertPointsAlmostEqual(self, pointA, pointB, places=9):
        np.testing.assert_allclose(pointA.x, pointB.x, atol=10.0 ** -places, rtol=0)
        self.assertAlmostEqual(pointA.t, pointB.t, places=places)


if __name__ == "__main__":
    unittest.main()
