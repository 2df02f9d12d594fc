"""
Atoms: ball supported functions with vanishing moments, stored as
coefficients over a deterministic bump dictionary on the unit ball
"""

import functools
import json
import math
from typing import List, Optional, Sequence

import numpy as np

from heisenlab import group
from heisenlab import integration
from heisenlab.data_classes.exponent import ExponentFunction
from heisenlab.data_classes.field import Field
from heisenlab.data_classes.geometry import KoranyiBall
from heisenlab.data_classes.multi_index import MultiIndex, monomialArrays
from heisenlab.data_classes.quadrature_rule import QuadratureRule
from heisenlab.utilities import constants
from heisenlab.utilities import errors
from heisenlab.utilities import utils
from heisenlab.utilities.constants import GroupPoint


class BumpDictionary:
    """Functions (1 - rho(w)^4 / sigma^4)_+^{K_k} w^{J_k} on the unit ball B_1(e)

    sigma is the supportFactor, J_k cycles through the monomials of degree
    <= `degree` and the profile power K_k grows by one each full cycle,
    starting at BUMP_PROFILE_POWER.  Every element is a polynomial inside
    B_sigma(e) that vanishes to order K_k on its boundary, so the dictionary
    lives inside B_1(e) unless supportFactor > 1.  Element k depends only on
    (n, k, degree).
    """

    def __init__(
        self,
        n: int,
        size: int,
        supportFactor: float = 1.0,
        profile: str = constants.BumpProfiles.POLYNOMIAL,
        degree: int = 1,
    ):
        utils.validateOption("profile", profile, constants.BumpProfiles)
        if size < 1:
            raise errors.ArgumentError(f"Dictionary size must be >= 1; got {size}")
        if degree < 0:
            raise errors.ArgumentError(f"Dictionary degree must be >= 0; got {degree}")
        self.n = n
        self.size = size
        self.supportFactor = float(supportFactor)
        self.profile = profile
        self.degree = degree

        monomials = MultiIndex.enumerate(n, degree)
        self.monomials = [monomials[k % len(monomials)] for k in range(size)]
        if profile == constants.BumpProfiles.FLAT:
            self.powers = [0] * size
        else:
            self.powers = [
                constants.BUMP_PROFILE_POWER + k // len(monomials) for k in range(size)
            ]

    def maxReach(self) -> float:
        return self.supportFactor

    def radialDegree(self) -> int:
        """The largest degree of rho over all elements, profile included"""
        return max(4 * power + index.degree for power, index in zip(self.powers, self.monomials))

    def __call__(self, x: np.ndarray, t: np.ndarray) -> np.ndarray:
        """Values of every element, shape (..., size), at local points w = (x, t)"""
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        squared = np.sum(x * x, axis=-1)
        u4 = (squared * squared + 16.0 * t * t) / self.supportFactor ** 4
        base = np.clip(1.0 - u4, 0.0, None)
        inside = (u4 < 1.0).astype(float)
        columns = []
        for power, index in zip(self.powers, self.monomials):
            envelope = inside if power == 0 else base ** power
            columns.append(envelope * monomialArrays(index, x, t))
        return np.stack(columns, axis=-1)

    def toDict(self) -> dict:
        return {
            "n": self.n,
            "size": self.size,
            "supportFactor": self.supportFactor,
            "profile": self.profile,
            "degree": self.degree,
        }

    @classmethod
    def fromDict(cls, document: dict) -> "BumpDictionary":
        return cls(
            document["n"],
            document["size"],
            document.get("supportFactor", 1.0),
            document.get("profile", constants.BumpProfiles.POLYNOMIAL),
            document.get("degree", 1),
        )

    def __eq__(self, other):
        return isinstance(other, BumpDictionary) and self.toDict() == other.toDict()

    def __ne__(self, other):
        return not self == other


@functools.lru_cache(maxsize=16)
def unitBallRule(n: int, order: int, radialOrder: int = 0, reach: float = 1.0) -> QuadratureRule:
    """The polar product rule on B_reach(e) that atoms are integrated with

    The radial order defaults to `order`.  For n = 1 the rule integrates
    polynomials of radial degree < 2 radialOrder - Q exactly.
    """
    if n == 1:
        directions = 2 * order
    else:
        directions = 2 ** math.ceil(math.log2(2 * order))
    orders = integration.GridOrders(max(order, radialOrder), order, directions)
    return integration.shellRule(n, 0.0, reach, orders)


class Atom:
    """sum_k c_k phi_k(delta^-1 . (center^-1 z)) supported in `ball`

    lpNorm and chiNorm are the certificates ||a||_{p0} and ||chi_B||_{p(.)}
    recorded when the atom was built or last re-certified.
    """

    def __init__(
        self,
        ball: KoranyiBall,
        p0: float,
        D: int,
        dictionary: BumpDictionary,
        coefficients: Sequence[float],
        exponent: Optional[ExponentFunction] = None,
        lpNorm: Optional[float] = None,
        chiNorm: Optional[float] = None,
        gridOrder: int = constants.ATOM_GRID_ORDER,
    ):
        if not p0 > 1:
            raise errors.ArgumentError(f"p0 must exceed 1; got {p0}")
        if D < 0:
            raise errors.ArgumentError(f"D must be >= 0; got {D}")
        coefficients = np.array(coefficients, dtype=float)
        if coefficients.shape != (dictionary.size,):
            raise errors.ArgumentError(
                f"Expected {dictionary.size} coefficients; got {coefficients.shape}"
            )
        coefficients.setflags(write=False)
        self.ball = ball
        self.p0 = float(p0)
        self.D = int(D)
        self.dictionary = dictionary
        self.coefficients = coefficients
        self.exponent = exponent
        self.lpNorm = lpNorm
        self.chiNorm = chiNorm
        self.gridOrder = gridOrder

    @property
    def n(self) -> int:
        return self.ball.n

    def toLocal(self, x: np.ndarray, t: np.ndarray):
        centerX, centerT = self.ball.center.asArrays()
        relX, relT = group.mulArrays(-centerX, -centerT, x, t)
        return group.dilateArrays(1.0 / self.ball.radius, relX, relT)

    def evaluateLocal(self, x: np.ndarray, t: np.ndarray) -> np.ndarray:
        return self.dictionary(x, t) @ self.coefficients

    def __call__(self, x: np.ndarray, t: np.ndarray) -> np.ndarray:
        return self.evaluateLocal(*self.toLocal(x, t))

    def localRule(self, order: Optional[int] = None) -> QuadratureRule:
        """A rule on the support in local coordinates

        For n = 1 it integrates the atom against every polynomial of degree
        <= D exactly.
        """
        order = self.gridOrder if order is None else order
        Q = group.homogeneousDimension(self.n)
        radialOrder = (Q + self.dictionary.radialDegree() + self.D) // 2 + 1
        return unitBallRule(self.n, order, radialOrder, self.dictionary.maxReach())

    def rule(self, order: Optional[int] = None) -> QuadratureRule:
        """The local rule pushed to the ball: z = center . (delta . w)"""
        local = self.localRule(order)
        Q = group.homogeneousDimension(self.n)
        x, t = group.dilateArrays(self.ball.radius, local.x, local.t)
        scaled = QuadratureRule(x, t, local.weights * self.ball.radius ** Q)
        return scaled.translated(self.ball.center)

    def localValues(self, order: Optional[int] = None) -> np.ndarray:
        """Atom values at the nodes of the local rule (same order as rule())"""
        local = self.localRule(order)
        return self.evaluateLocal(local.x, local.t)

    def asField(self, order: Optional[int] = None) -> Field:
        return Field(self, self.n, [self.ball], rule=self.rule(order), name="atom")

    def withCoefficients(self, coefficients: Sequence[float]) -> "Atom":
        return Atom(
            self.ball,
            self.p0,
            self.D,
            self.dictionary,
            coefficients,
            self.exponent,
            self.lpNorm,
            self.chiNorm,
            self.gridOrder,
        )

    @classmethod
    def fromIndicator(
        cls,
        ball: KoranyiBall,
        p0: float,
        D: int,
        exponent: Optional[ExponentFunction] = None,
        height: float = 1.0,
    ) -> "Atom":
        """height * chi_B written as a single flat dictionary element"""
        dictionary = BumpDictionary(ball.n, 1, profile=constants.BumpProfiles.FLAT, degree=0)
        return cls(ball, p0, D, dictionary, [height], exponent)

    def toDict(self) -> dict:
        return {
            "n": self.n,
            "center": {"x": list(self.ball.center.x), "t": self.ball.center.t},
            "radius": self.ball.radius,
            "p0": self.p0,
            "D": self.D,
            "dictionary": self.dictionary.toDict(),
            "coefficients": [float(value) for value in self.coefficients],
            "gridOrder": self.gridOrder,
            "lpNorm": self.lpNorm,
            "chiNorm": self.chiNorm,
        }

    def toJson(self) -> str:
        return json.dumps(self.toDict(), indent=2, sort_keys=True)

    @classmethod
    def fromDict(
        cls, document: dict, exponent: Optional[ExponentFunction] = None
    ) -> "Atom":
        try:
            center = GroupPoint(document["center"]["x"], document["center"]["t"])
            ball = KoranyiBall(center, document["radius"])
            if center.n != document["n"]:
                raise errors.DimensionMismatch(center.n, document["n"])
            return cls(
                ball,
                document["p0"],
                document["D"],
                BumpDictionary.fromDict(document["dictionary"]),
                document["coefficients"],
                exponent,
                document.get("lpNorm"),
                document.get("chiNorm"),
                document.get("gridOrder", constants.ATOM_GRID_ORDER),
            )
        except KeyError as e:
            raise errors.ConfigurationError(f"Atom record is missing {e}") from e

    @classmethod
    def fromJson(cls, text: str, exponent: Optional[ExponentFunction] = None) -> "Atom":
        return cls.fromDict(json.loads(text), exponent)

    def __eq__(self, other):
        if not isinstance(other, Atom):
            return False
        return (
            self.ball == other.ball
            and math.isclose(self.p0, other.p0)
            and self.D == other.D
            and self.dictionary == other.dictionary
            and bool(np.allclose(self.coefficients, other.coefficients, rtol=1e-12, atol=0))
        )

    def __ne__(self, other):
        return not self == other


class AtomicCombination:
    """sum_j lambda_j a_j for finitely many atoms"""

    def __init__(self, atoms: List[Atom], weights: Sequence[float]):
        weights = [float(weight) for weight in weights]
        if len(atoms) != len(weights):
            raise errors.ArgumentError(f"{len(atoms)} atoms but {len(weights)} weights")
        if any(weight < 0 for weight in weights):
            raise errors.ArgumentError(f"Weights must be nonnegative: {weights}")
        if len({atom.n for atom in atoms}) > 1:
            raise errors.ArgumentError("All atoms must live on the same group")
        self.atoms = list(atoms)
        self.weights = weights

    def __call__(self, x: np.ndarray, t: np.ndarray) -> np.ndarray:
        total = 0.0
        for atom, weight in zip(self.atoms, self.weights):
            total = total + weight * atom(x, t)
        return np.asarray(total, dtype=float) * np.ones(np.shape(t))

    def asField(self) -> Field:
        return Field(self, self.atoms[0].n, [atom.ball for atom in self.atoms])

    def balls(self) -> List[KoranyiBall]:
        return [atom.ball for atom in self.atoms]
