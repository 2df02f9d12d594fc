"""
Variable exponents p(.) on H^n and the ball families they are measured on
"""

from collections import namedtuple
import math
from typing import Callable, List, Optional, Sequence

import numpy as np

from heisenlab import group
from heisenlab.data_classes.geometry import KoranyiBall, RotationMatrix
from heisenlab.integration import sampleBallArrays
from heisenlab.utilities import constants
from heisenlab.utilities import errors
from heisenlab.utilities import utils
from heisenlab.utilities.constants import GroupPoint

# Radii of the centered balls used to spot-check declared bounds
_VERIFICATION_RADII = (0.1, 1.0, 10.0, 1e3, 1e5)
_BOUND_SLACK = 1e-12


class RadialProfile:
    """A piecewise linear table r(s), constant beyond the last knot"""

    def __init__(self, knots: Sequence[float], values: Sequence[float]):
        knots = [float(knot) for knot in knots]
        values = [float(value) for value in values]
        if len(knots) != len(values) or len(knots) < 1:
            raise errors.ArgumentError("Profile knots and values must match in length")
        if any(b <= a for a, b in zip(knots[:-1], knots[1:])):
            raise errors.ArgumentError(f"Profile knots must increase: {knots}")
        if knots[0] < 0:
            raise errors.ArgumentError("Profile knots must be nonnegative")
        self.knots = knots
        self.values = values

    def __call__(self, s):
        return np.interp(s, self.knots, self.values)

    @property
    def limitAtInfinity(self) -> float:
        return self.values[-1]

    def toDict(self) -> dict:
        return {"knots": list(self.knots), "values": list(self.values)}


class ExponentFunction:
    """A measurable exponent p(.) with declared bounds

    0 < pMinus <= p(z) <= pPlus is spot-verified on random samples at
    construction (essential bounds over H^n are not computable).
    """

    def __init__(
        self,
        evaluator: Callable[[np.ndarray, np.ndarray], np.ndarray],
        n: int,
        pMinus: float,
        pPlus: float,
        pInfinity: Optional[float] = None,
        name: str = "",
        verify: bool = True,
        seed: int = 0,
    ):
        if not 0 < pMinus <= pPlus < math.inf:
            raise errors.ExponentError(
                f"Need 0 < pMinus <= pPlus < inf; got {pMinus}, {pPlus}"
            )
        self.evaluator = evaluator
        self.n = n
        self.pMinus = float(pMinus)
        self.pPlus = float(pPlus)
        self.pInfinity = None if pInfinity is None else float(pInfinity)
        self.name = name
        if verify:
            self._verifyBounds(seed)

    def _verifyBounds(self, seed: int, count: int = 64) -> None:
        for i, radius in enumerate(_VERIFICATION_RADII):
            x, t = sampleBallArrays(KoranyiBall.centered(self.n, radius), count, seed + i)
            values = self(x, t)
            if np.any(values <= 0) or not np.all(np.isfinite(values)):
                raise errors.ExponentError(f"Exponent {self.name} is not positive")
            low = self.pMinus - _BOUND_SLACK
            high = self.pPlus + _BOUND_SLACK
            if np.any(values < low) or np.any(values > high):
                raise errors.ExponentError(
                    f"Exponent {self.name} leaves its declared range "
                    f"[{self.pMinus}, {self.pPlus}]: saw "
                    f"[{float(values.min())}, {float(values.max())}]"
                )

    def __call__(self, x: np.ndarray, t: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        values = np.asarray(self.evaluator(x, t), dtype=float)
        return np.broadcast_to(values, np.broadcast_shapes(x.shape[:-1], t.shape))

    def at(self, z: GroupPoint) -> float:
        return float(self(np.array(z.x), np.array(z.t)))

    @property
    def underlineP(self) -> float:
        return min(self.pMinus, 1.0)

    @property
    def isConstant(self) -> bool:
        return self.pMinus == self.pPlus

    @classmethod
    def constant(cls, value: float, n: int) -> "ExponentFunction":
        return cls(
            lambda x, t: np.full(np.shape(t), float(value)),
            n,
            value,
            value,
            value,
            name=f"constant {value}",
            verify=False,
        )

    @classmethod
    def radial(cls, profile: RadialProfile, n: int) -> "ExponentFunction":
        """p(x, t) = r(rho(x, t)); invariant under rotations in Sp ∩ SO"""
        return cls(
            lambda x, t: profile(group.koranyiNormArrays(x, t)),
            n,
            min(profile.values),
            max(profile.values),
            profile.limitAtInfinity,
            name="radial",
        )

    @classmethod
    def piecewise(
        cls,
        balls: Sequence[KoranyiBall],
        values: Sequence[float],
        default: float,
    ) -> "ExponentFunction":
        """Constant on each ball (first match wins), `default` elsewhere"""
        balls = list(balls)
        values = [float(value) for value in values]
        if len(balls) != len(values) or not balls:
            raise errors.ArgumentError("Need one value per ball")

        def evaluator(x, t):
            result = np.full(np.broadcast_shapes(np.shape(x)[:-1], np.shape(t)), default)
            assigned = np.zeros(result.shape, dtype=bool)
            for ball, value in zip(balls, values):
                inside = ball.containsArrays(x, t) & ~assigned
                result = np.where(inside, value, result)
                assigned |= inside
            return result

        allValues = values + [default]
        return cls(
            evaluator,
            balls[0].n,
            min(allValues),
            max(allValues),
            default,
            name="piecewise",
            verify=False,
        )

    @classmethod
    def symmetrized(
        cls, base: "ExponentFunction", matrices: Sequence[RotationMatrix]
    ) -> "ExponentFunction":
        """Average of z -> base(A x, t) over a finite rotation group

        The result is invariant under every element of the group; pass the
        whole group (see cyclicGroup), not just generators.
        """
        matrices = list(matrices)
        if not matrices:
            raise errors.ArgumentError("At least one matrix is required")

        def evaluator(x, t):
            total = 0.0
            for A in matrices:
                total = total + base(group.rotateArrays(A.matrix, x), t)
            return total / len(matrices)

        return cls(
            evaluator,
            base.n,
            base.pMinus,
            base.pPlus,
            base.pInfinity,
            name=f"symmetrized {base.name}",
        )

    def divided(self, s: float) -> "ExponentFunction":
        """p(.)/s"""
        if not s > 0:
            raise errors.ArgumentError(f"s must be positive; got {s}")
        pInfinity = None if self.pInfinity is None else self.pInfinity / s
        return ExponentFunction(
            lambda x, t: self(x, t) / s,
            self.n,
            self.pMinus / s,
            self.pPlus / s,
            pInfinity,
            name=f"{self.name} / {s}",
            verify=False,
        )

    def symmetryDefect(
        self, transform: "BallTransform", count: int = 256, seed: int = 0
    ) -> float:
        """max |p(T z) - p(z)| over random samples, for the group action of the transform"""
        worst = 0.0
        for i, radius in enumerate(_VERIFICATION_RADII):
            x, t = sampleBallArrays(KoranyiBall.centered(self.n, radius), count, seed + i)
            mappedX, mappedT = transform.mapArrays(x, t)
            worst = max(worst, float(np.max(np.abs(self(mappedX, mappedT) - self(x, t)))))
        return worst

    @classmethod
    def fromDict(cls, document: dict, n: int) -> "ExponentFunction":
        """Builds an exponent from its configuration record

        {"kind": "constant", "value": 2}
        {"kind": "radial", "knots": [...], "values": [...]}
        {"kind": "piecewise", "balls": [{"center": {"x": [...], "t": 0}, "radius": 1}],
         "values": [...], "default": 2}
        {"kind": "symmetrized", "base": {...}, "order": 4,
         "angle": 1.5707963 (n = 1) or "blockAngles": [...]}
        """
        try:
            kind = document["kind"]
            utils.validateOption("kind", kind, constants.ExponentKinds)
            if kind == constants.ExponentKinds.CONSTANT:
                return cls.constant(float(document["value"]), n)
            if kind == constants.ExponentKinds.RADIAL:
                profile = RadialProfile(document["knots"], document["values"])
                return cls.radial(profile, n)
            if kind == constants.ExponentKinds.PIECEWISE:
                balls = [
                    KoranyiBall(
                        GroupPoint(ball["center"]["x"], ball["center"]["t"]),
                        ball["radius"],
                    )
                    for ball in document["balls"]
                ]
                return cls.piecewise(balls, document["values"], float(document["default"]))

            base = cls.fromDict(document["base"], n)
            if "blockAngles" in document:
                generator = RotationMatrix.fromBlockAngles(document["blockAngles"])
            else:
                generator = RotationMatrix.fromAngle(float(document["angle"]))
            if generator.n != n:
                raise errors.ExponentError(
                    f"Rotation acts on n = {generator.n}, exponent on n = {n}"
                )
            return cls.symmetrized(base, cyclicGroup(generator, int(document["order"])))
        except KeyError as e:
            raise errors.ExponentError(f"Exponent record is missing {e}") from e


def cyclicGroup(A: RotationMatrix, order: int) -> List[RotationMatrix]:
    """I, A, ..., A^{order-1}; A^order must be the identity"""
    matrices = [RotationMatrix.identity(A.n)]
    for _ in range(order - 1):
        matrices.append(RotationMatrix(A.matrix @ matrices[-1].matrix))
    if not np.allclose(A.matrix @ matrices[-1].matrix, np.eye(2 * A.n), atol=1e-10):
        raise errors.ArgumentError(f"Matrix does not have order {order}")
    return matrices


class BallTransform(namedtuple("BallTransform", ["kind", "matrix", "scale"])):
    """A rotation (Ax, t) or a dilation (rx, r^2 t) acting on points and balls"""

    def __new__(
        cls,
        kind: str,
        matrix: Optional[RotationMatrix] = None,
        scale: Optional[float] = None,
    ):
        utils.validateOption("kind", kind, constants.TransformKinds)
        if kind == constants.TransformKinds.ROTATION and matrix is None:
            raise errors.ArgumentError("A rotation needs a matrix")
        if kind == constants.TransformKinds.DILATION and not (scale and scale > 0):
            raise errors.ArgumentError("A dilation needs a positive scale")
        return super(BallTransform, cls).__new__(cls, kind, matrix, scale)

    @classmethod
    def rotation(cls, matrix: RotationMatrix) -> "BallTransform":
        return cls(constants.TransformKinds.ROTATION, matrix=matrix)

    @classmethod
    def dilation(cls, r: float) -> "BallTransform":
        return cls(constants.TransformKinds.DILATION, scale=r)

    @classmethod
    def identity(cls, n: int) -> "BallTransform":
        return cls.rotation(RotationMatrix.identity(n))

    def mapArrays(self, x: np.ndarray, t: np.ndarray):
        if self.kind == constants.TransformKinds.ROTATION:
            return group.rotateArrays(self.matrix.matrix, x), np.asarray(t, dtype=float)
        return group.dilateArrays(self.scale, x, t)

    def mapPoint(self, z: GroupPoint) -> GroupPoint:
        if self.kind == constants.TransformKinds.ROTATION:
            return group.rotate(self.matrix, z)
        return group.dilate(self.scale, z)

    def mapBall(self, ball: KoranyiBall, gamma: float = 1.0) -> KoranyiBall:
        """B_{gamma delta}(T z_0) for B = B_delta(z_0)"""
        return KoranyiBall(self.mapPoint(ball.center), gamma * ball.radius)


class BallFamily(namedtuple("BallFamily", ["balls", "weights"])):
    def __new__(cls, balls: Sequence[KoranyiBall], weights: Sequence[float]):
        balls = list(balls)
        weights = [float(weight) for weight in weights]
        if len(balls) != len(weights):
            raise errors.ArgumentError(
                f"{len(balls)} balls but {len(weights)} weights"
            )
        if any(weight < 0 for weight in weights):
            raise errors.ArgumentError(f"Weights must be nonnegative: {weights}")
        return super(BallFamily, cls).__new__(cls, balls, weights)

    def scaled(self, c: float) -> "BallFamily":
        return BallFamily(self.balls, [c * weight for weight in self.weights])

    def transformed(self, transform: BallTransform, gamma: float) -> "BallFamily":
        return BallFamily(
            [transform.mapBall(ball, gamma) for ball in self.balls], self.weights
        )
