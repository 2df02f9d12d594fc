"""
Value types for the geometry of H^n: dimensions, rotations, Koranyi balls
and the knobs of the integration engines
"""

from collections import namedtuple
import dataclasses
import math
from typing import Sequence

import numpy as np

from heisenlab import group
from heisenlab.utilities import constants
from heisenlab.utilities import errors
from heisenlab.utilities import utils
from heisenlab.utilities.constants import GroupPoint


class Dimension(namedtuple("Dimension", ["n"])):
    def __new__(cls, n: int):
        if int(n) != n or n < 1:
            raise errors.ArgumentError(f"n must be a positive integer; got {n}")
        return super(Dimension, cls).__new__(cls, int(n))

    @property
    def Q(self) -> int:
        return group.homogeneousDimension(self.n)


class RotationMatrix:
    """A matrix in Sp(2n, R) intersected with SO(2n)

    Raises InvalidRotationMatrix unless A^T J A = J, A^T A = I and det A = 1
    hold entrywise to `tolerance`.
    """

    def __init__(self, entries, tolerance: float = constants.MATRIX_TOLERANCE):
        matrix = np.array(entries, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise errors.InvalidRotationMatrix(f"Not a square matrix: {matrix.shape}")
        if matrix.shape[0] % 2 != 0:
            raise errors.InvalidRotationMatrix(
                f"Matrix size must be even; got {matrix.shape[0]}"
            )

        n = matrix.shape[0] // 2
        form = group.symplecticForm(n)
        if np.max(np.abs(matrix.T @ form @ matrix - form)) > tolerance:
            raise errors.InvalidRotationMatrix("Matrix does not preserve J")
        if np.max(np.abs(matrix.T @ matrix - np.eye(2 * n))) > tolerance:
            raise errors.InvalidRotationMatrix("Matrix is not orthogonal")
        if abs(np.linalg.det(matrix) - 1.0) > tolerance:
            raise errors.InvalidRotationMatrix("Matrix determinant is not 1")

        matrix.setflags(write=False)
        self.matrix = matrix
        self.n = n

    @classmethod
    def identity(cls, n: int) -> "RotationMatrix":
        return cls(np.eye(2 * n))

    @classmethod
    def fromAngle(cls, theta: float) -> "RotationMatrix":
        """Planar rotation by theta (n = 1)"""
        return cls.fromBlockAngles([theta])

    @classmethod
    def fromBlockAngles(cls, angles: Sequence[float]) -> "RotationMatrix":
        """Rotates each plane (x_i, x_{i+n}) by its own angle

        This is multiplication by exp(i theta_k) on z_k = x_k + i x_{k+n},
        a unitary map, so it lies in Sp(2n, R) and SO(2n).
        """
        n = len(angles)
        if n < 1:
            raise errors.ArgumentError("At least one angle is required")
        matrix = np.zeros((2 * n, 2 * n))
        for i, theta in enumerate(angles):
            cosTheta, sinTheta = math.cos(theta), math.sin(theta)
            matrix[i, i] = cosTheta
            matrix[i, i + n] = -sinTheta
            matrix[i + n, i] = sinTheta
            matrix[i + n, i + n] = cosTheta
        return cls(matrix)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "RotationMatrix":
        return cls.fromBlockAngles(list(rng.uniform(0, 2 * math.pi, n)))

    def inverse(self) -> "RotationMatrix":
        return RotationMatrix(self.matrix.T)

    def __eq__(self, other):
        if not isinstance(other, RotationMatrix) or other.n != self.n:
            return False
        return bool(np.allclose(self.matrix, other.matrix, atol=1e-12, rtol=0))

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return f"RotationMatrix({self.matrix.tolist()})"


class KoranyiBall(namedtuple("KoranyiBall", ["center", "radius"])):
    """The open ball {z : rho(center^-1 . z) < radius}"""

    def __new__(cls, center: GroupPoint, radius: float):
        if not isinstance(center, GroupPoint):
            center = GroupPoint(*center)
        if not radius > 0 or not math.isfinite(radius):
            raise errors.ArgumentError(f"Ball radius must be positive; got {radius}")
        return super(KoranyiBall, cls).__new__(cls, center, float(radius))

    @classmethod
    def centered(cls, n: int, radius: float) -> "KoranyiBall":
        return cls(GroupPoint.identity(n), radius)

    @property
    def n(self) -> int:
        return self.center.n

    def distancesFromCenter(self, x: np.ndarray, t: np.ndarray) -> np.ndarray:
        centerX, centerT = self.center.asArrays()
        return group.koranyiDistanceArrays(centerX, centerT, x, t)

    def containsArrays(self, x: np.ndarray, t: np.ndarray) -> np.ndarray:
        return self.distancesFromCenter(x, t) < self.radius

    def contains(self, z: GroupPoint) -> bool:
        return bool(self.containsArrays(np.array(z.x), z.t))

    def scaled(self, factor: float) -> "KoranyiBall":
        return KoranyiBall(self.center, self.radius * factor)

    def __eq__(self, other):
        if not isinstance(other, KoranyiBall):
            return False
        return self.center == other.center and math.isclose(
            self.radius, other.radius
        )

    def __ne__(self, other):
        return not self == other


@dataclasses.dataclass(frozen=True)
class IntegrationSpec:
    method: str = constants.IntegrationMethods.GRID_QUADRATURE
    tolerance: float = constants.DEFAULT_TOLERANCE
    maxEvaluations: int = constants.DEFAULT_MAX_EVALUATIONS
    seed: int = 0

    def __post_init__(self):
        utils.validateOption("method", self.method, constants.IntegrationMethods)
        if not self.tolerance > 0:
            raise errors.ArgumentError(
                f"Tolerance must be positive; got {self.tolerance}"
            )
        if self.maxEvaluations < 1:
            raise errors.ArgumentError(
                f"maxEvaluations must be at least 1; got {self.maxEvaluations}"
            )
        if self.seed < 0:
            raise errors.ArgumentError(f"Seed must be unsigned; got {self.seed}")

    @property
    def isMonteCarlo(self) -> bool:
        return self.method != constants.IntegrationMethods.GRID_QUADRATURE

    def withSeed(self, seed: int) -> "IntegrationSpec":
        return dataclasses.replace(self, seed=seed)

    def withBudget(self, maxEvaluations: int) -> "IntegrationSpec":
        return dataclasses.replace(self, maxEvaluations=max(1, int(maxEvaluations)))


class IntegrationResult(namedtuple("IntegrationResult", ["value", "error", "evaluations"])):
    """An estimate with its standard error (Monte Carlo) or refinement error (grids)"""

    def __add__(self, other):
        if not isinstance(other, IntegrationResult):
            return NotImplemented
        return IntegrationResult(
            self.value + other.value,
            self.error + other.error,
            self.evaluations + other.evaluations,
        )

    def scaled(self, factor: float) -> "IntegrationResult":
        return IntegrationResult(
            self.value * factor, self.error * abs(factor), self.evaluations
        )
