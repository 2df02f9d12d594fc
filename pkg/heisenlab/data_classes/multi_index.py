"""
Multiindices, polynomials in the homogeneous grading of H^n, and derivative settings
"""

import dataclasses
import functools
import itertools
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from heisenlab.utilities import constants
from heisenlab.utilities import errors


class MultiIndex(tuple):
    """I = (i_1, ..., i_{2n+1}); the last entry is the power of t"""

    def __new__(cls, entries: Iterable[int]):
        entries = tuple(int(value) for value in entries)
        if len(entries) < 3 or len(entries) % 2 == 0:
            raise errors.ArgumentError(
                f"A multiindex on H^n has 2n+1 entries; got {len(entries)}"
            )
        if any(value < 0 for value in entries):
            raise errors.ArgumentError(f"Multiindex entries must be >= 0: {entries}")
        return super(MultiIndex, cls).__new__(cls, entries)

    @classmethod
    def zero(cls, n: int) -> "MultiIndex":
        return cls((0,) * (2 * n + 1))

    @classmethod
    def unit(cls, n: int, axis: int) -> "MultiIndex":
        """e_axis for a 1-based axis in 1..2n+1"""
        if not 1 <= axis <= 2 * n + 1:
            raise errors.ArgumentError(f"Axis must be in 1..{2 * n + 1}; got {axis}")
        entries = [0] * (2 * n + 1)
        entries[axis - 1] = 1
        return cls(entries)

    @classmethod
    def enumerate(cls, n: int, maxDegree: int) -> List["MultiIndex"]:
        """All I with d(I) <= maxDegree, ordered by degree then lexicographically"""
        return list(_enumerate(n, maxDegree))

    @classmethod
    def ofDegree(cls, n: int, degree: int) -> List["MultiIndex"]:
        return [index for index in cls.enumerate(n, degree) if index.degree == degree]

    @property
    def n(self) -> int:
        return (len(self) - 1) // 2

    @property
    def length(self) -> int:
        return sum(self)

    @property
    def degree(self) -> int:
        return sum(self[:-1]) + 2 * self[-1]

    def fieldSequence(self) -> List[int]:
        """Axes of X^I = X_1^{i_1} ... X_{2n+1}^{i_{2n+1}} from left to right (1-based)"""
        sequence: List[int] = []
        for axis, power in enumerate(self, start=1):
            sequence.extend([axis] * power)
        return sequence

    def __add__(self, other):
        return MultiIndex(a + b for a, b in zip(self, other))

    def __repr__(self):
        return f"MultiIndex({tuple(self)})"


@functools.lru_cache(maxsize=None)
def _enumerate(n: int, maxDegree: int):
    if maxDegree < 0:
        return ()
    found = []
    for tPower in range(maxDegree // 2 + 1):
        remaining = maxDegree - 2 * tPower
        for xPowers in itertools.product(range(remaining + 1), repeat=2 * n):
            if sum(xPowers) <= remaining:
                found.append(MultiIndex(xPowers + (tPower,)))
    found.sort(key=lambda index: (index.degree, tuple(-value for value in index)))
    return tuple(found)


def monomialArrays(index: MultiIndex, x: np.ndarray, t: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    values = np.ones(np.broadcast_shapes(x.shape[:-1], t.shape))
    for axis, power in enumerate(index[:-1]):
        if power:
            values = values * x[..., axis] ** power
    if index[-1]:
        values = values * t ** index[-1]
    return values


class PolynomialHG:
    """sum_I c_I z^I with d(I) <= maxDegree"""

    def __init__(
        self, n: int, coefficients: Dict[MultiIndex, float], maxDegree: int
    ):
        self.n = n
        self.maxDegree = maxDegree
        self.coefficients: Dict[MultiIndex, float] = {}
        for index, value in coefficients.items():
            index = MultiIndex(index)
            if index.n != n:
                raise errors.DimensionMismatch(index.n, n)
            if value == 0:
                continue
            if index.degree > maxDegree:
                raise errors.ArgumentError(
                    f"Monomial {index} has degree {index.degree} > {maxDegree}"
                )
            self.coefficients[index] = self.coefficients.get(index, 0.0) + float(value)

    @classmethod
    def monomial(cls, index: MultiIndex, coefficient: float = 1.0) -> "PolynomialHG":
        return cls(index.n, {index: coefficient}, index.degree)

    def __call__(self, x: np.ndarray, t: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        values = np.zeros(np.broadcast_shapes(x.shape[:-1], t.shape))
        for index, coefficient in self.coefficients.items():
            values = values + coefficient * monomialArrays(index, x, t)
        return values

    def coefficient(self, index: Sequence[int]) -> float:
        return self.coefficients.get(MultiIndex(index), 0.0)

    def constantTerm(self) -> float:
        return self.coefficient(MultiIndex.zero(self.n))

    def degree(self) -> int:
        return max((index.degree for index in self.coefficients), default=0)

    def __add__(self, other: "PolynomialHG") -> "PolynomialHG":
        merged = dict(self.coefficients)
        for index, value in other.coefficients.items():
            merged[index] = merged.get(index, 0.0) + value
        return PolynomialHG(self.n, merged, max(self.maxDegree, other.maxDegree))

    def isclose(self, other: "PolynomialHG", tolerance: float = 1e-8) -> bool:
        indices = set(self.coefficients) | set(other.coefficients)
        return all(
            abs(self.coefficient(index) - other.coefficient(index)) <= tolerance
            for index in indices
        )

    def __eq__(self, other):
        if not isinstance(other, PolynomialHG) or other.n != self.n:
            return False
        return self.isclose(other, 1e-12)

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        terms = ", ".join(
            f"{tuple(index)}: {value}" for index, value in sorted(self.coefficients.items())
        )
        return f"PolynomialHG(n={self.n}, {{{terms}}})"


@dataclasses.dataclass(frozen=True)
class DerivativeSpec:
    """Finite difference settings

    step=None selects 1e-3 * (1 + rho(z)), enlarged by 2^(|I|-1) for
    derivatives of order |I| so rounding stays below truncation.
    """

    step: Optional[float] = None
    richardsonLevels: int = constants.DEFAULT_RICHARDSON_LEVELS
    maxDegree: int = constants.MAX_DERIVATIVE_DEGREE

    def __post_init__(self):
        if self.step is not None and not self.step > 0:
            raise errors.ArgumentError(f"Step must be positive; got {self.step}")
        if self.richardsonLevels < 1:
            raise errors.ArgumentError(
                f"richardsonLevels must be >= 1; got {self.richardsonLevels}"
            )
