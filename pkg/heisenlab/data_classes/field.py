"""
Real functions on H^n with declared support or decay
"""

import math
from typing import Callable, List, Optional, Sequence

import numpy as np

from heisenlab import group
from heisenlab.data_classes.geometry import KoranyiBall
from heisenlab.data_classes.quadrature_rule import QuadratureRule
from heisenlab.utilities import errors
from heisenlab.utilities.constants import GroupPoint

Evaluator = Callable[[np.ndarray, np.ndarray], np.ndarray]


def bumpProfile(u: np.ndarray) -> np.ndarray:
    """exp(1 - 1/(1 - u^2)) on |u| < 1, zero elsewhere; equals 1 at u = 0"""
    u = np.asarray(u, dtype=float)
    inside = np.abs(u) < 1.0
    safe = np.where(inside, u, 0.0)
    return np.where(inside, np.exp(1.0 - 1.0 / (1.0 - safe * safe)), 0.0)


class Field:
    """A real valued function on H^n

    The evaluator takes x with shape (..., 2n) and t with shape (...) and
    returns values of the broadcast shape.  `support` lists Koranyi balls whose
    union contains the support; None means the support is unbounded, in which
    case `decayExponent` may declare |f| = O(rho^-decayExponent) at infinity.
    A field may carry its own quadrature rule over its support.
    """

    def __init__(
        self,
        evaluator: Evaluator,
        n: int,
        support: Optional[Sequence[KoranyiBall]] = None,
        decayExponent: Optional[float] = None,
        rule: Optional[QuadratureRule] = None,
        name: str = "",
    ):
        self.evaluator = evaluator
        self.n = n
        self.support: Optional[List[KoranyiBall]] = (
            None if support is None else list(support)
        )
        self.decayExponent = decayExponent
        self.rule = rule
        self.name = name

        if self.support is not None:
            for ball in self.support:
                if ball.n != n:
                    raise errors.DimensionMismatch(ball.n, n)

    def __call__(self, x: np.ndarray, t: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        values = np.asarray(self.evaluator(x, t), dtype=float)
        return np.broadcast_to(values, np.broadcast_shapes(x.shape[:-1], t.shape))

    def at(self, z: GroupPoint) -> float:
        return float(self(np.array(z.x), np.array(z.t)))

    @property
    def hasBoundedSupport(self) -> bool:
        return self.support is not None

    @classmethod
    def zero(cls, n: int, support: Optional[Sequence[KoranyiBall]] = None) -> "Field":
        if support is None:
            support = [KoranyiBall.centered(n, 1.0)]
        return cls(lambda x, t: np.zeros(np.shape(t)), n, support, name="zero")

    @classmethod
    def indicator(cls, ball: KoranyiBall) -> "Field":
        def evaluator(x, t):
            return ball.containsArrays(x, t).astype(float)

        return cls(evaluator, ball.n, [ball], name="indicator")

    @classmethod
    def bump(cls, ball: KoranyiBall) -> "Field":
        """A smooth radial bump psi(rho(c^-1 z)/delta) supported in the ball"""

        def evaluator(x, t):
            return bumpProfile(ball.distancesFromCenter(x, t) / ball.radius)

        return cls(evaluator, ball.n, [ball], name="bump")

    @classmethod
    def fromFunction(
        cls,
        func: Evaluator,
        n: int,
        support: Optional[Sequence[KoranyiBall]] = None,
        decayExponent: Optional[float] = None,
    ) -> "Field":
        return cls(func, n, support, decayExponent)

    def _combinedSupport(self, other: "Field") -> Optional[List[KoranyiBall]]:
        if self.support is None or other.support is None:
            return None
        combined = list(self.support)
        for ball in other.support:
            if ball not in combined:
                combined.append(ball)
        return combined

    def __add__(self, other: "Field") -> "Field":
        if not isinstance(other, Field):
            return NotImplemented
        if other.n != self.n:
            raise errors.DimensionMismatch(self.n, other.n)

        decay = None
        if self.decayExponent is not None and other.decayExponent is not None:
            decay = min(self.decayExponent, other.decayExponent)
        rule = self.rule if self.support == other.support else None
        return Field(
            lambda x, t: self(x, t) + other(x, t),
            self.n,
            self._combinedSupport(other),
            decay,
            rule,
        )

    def __mul__(self, scalar: float) -> "Field":
        return Field(
            lambda x, t: scalar * self(x, t),
            self.n,
            self.support,
            self.decayExponent,
            self.rule,
        )

    __rmul__ = __mul__

    def absPower(self, s: float) -> "Field":
        """|f|^s on the same support"""
        decay = None if self.decayExponent is None else self.decayExponent * s
        return Field(
            lambda x, t: np.abs(self(x, t)) ** s, self.n, self.support, decay, self.rule
        )

    def masked(self, mask: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> "Field":
        """f times the indicator of {mask is true}"""
        return Field(
            lambda x, t: np.where(mask(x, t), self(x, t), 0.0),
            self.n,
            self.support,
            self.decayExponent,
            self.rule,
        )

    def composedWithDilation(self, r: float) -> "Field":
        """z -> f(r . z)"""
        if r <= 0:
            raise errors.ArgumentError(f"Dilation factor must be positive; got {r}")
        support = None
        if self.support is not None:
            support = [
                KoranyiBall(group.dilate(1.0 / r, ball.center), ball.radius / r)
                for ball in self.support
            ]

        def evaluator(x, t):
            return self(*group.dilateArrays(r, x, t))

        return Field(evaluator, self.n, support, self.decayExponent)

    def composedWithTranslation(self, z0: GroupPoint) -> "Field":
        """z -> f(z0 . z)"""
        z0X, z0T = z0.asArrays()
        support = None
        if self.support is not None:
            shift = group.inv(z0)
            support = [
                KoranyiBall(group.mul(shift, ball.center), ball.radius)
                for ball in self.support
            ]
        rule = None if self.rule is None else self.rule.translated(group.inv(z0))

        def evaluator(x, t):
            return self(*group.mulArrays(z0X, z0T, x, t))

        return Field(evaluator, self.n, support, self.decayExponent, rule)

    def composedWithRotation(self, A) -> "Field":
        """z -> f(Ax, t)"""
        support = None
        if self.support is not None:
            inverse = A.inverse()
            support = [
                KoranyiBall(group.rotate(inverse, ball.center), ball.radius)
                for ball in self.support
            ]

        def evaluator(x, t):
            return self(group.rotateArrays(A.matrix, x), t)

        return Field(evaluator, self.n, support, self.decayExponent)

    def supportRadius(self) -> float:
        """Radius of a ball about e containing the support"""
        if self.support is None:
            return math.inf
        return max(group.koranyiNorm(ball.center) + ball.radius for ball in self.support)
