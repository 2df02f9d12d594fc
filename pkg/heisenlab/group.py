"""
Heisenberg group arithmetic and Koranyi geometry

Points are (x, t) with x in R^{2n}.  The product is

    (x, t) . (y, s) = (x + y, t + s + x^T J y),   J = 1/2 [[0, -I], [I, 0]]

Every operation exists in two flavours: one acting on GroupPoint values and
an array form (suffix `Arrays`) acting on x arrays of shape (..., 2n) and t
arrays of shape (...) that broadcast against each other.
"""

import functools
from typing import Tuple

import numpy as np

from heisenlab.utilities import errors
from heisenlab.utilities.constants import GroupPoint


def homogeneousDimension(n: int) -> int:
    return 2 * n + 2


@functools.lru_cache(maxsize=None)
def _symplecticForm(n: int) -> np.ndarray:
    identity = np.eye(n)
    zeros = np.zeros((n, n))
    form = 0.5 * np.block([[zeros, -identity], [identity, zeros]])
    form.setflags(write=False)
    return form


def symplecticForm(n: int) -> np.ndarray:
    """The skew matrix J used by the group law (read only)"""
    if n < 1:
        raise errors.ArgumentError(f"n must be positive; got {n}")
    return _symplecticForm(n)


def symplecticPairing(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """x^T J y over the last axis"""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.shape[-1] // 2
    # J y = 1/2 (-y_lower, y_upper)
    return 0.5 * (
        np.sum(x[..., n:] * y[..., :n], axis=-1)
        - np.sum(x[..., :n] * y[..., n:], axis=-1)
    )


def mulArrays(
    x1: np.ndarray, t1: np.ndarray, x2: np.ndarray, t2: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if x1.shape[-1] != x2.shape[-1]:
        raise errors.DimensionMismatch(x1.shape[-1] // 2, x2.shape[-1] // 2)
    return x1 + x2, np.asarray(t1) + np.asarray(t2) + symplecticPairing(x1, x2)


def invArrays(x: np.ndarray, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    return -np.asarray(x, dtype=float), -np.asarray(t, dtype=float)


def dilateArrays(r, x: np.ndarray, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise errors.ArgumentError(f"Dilation factors must be positive; got {r}")
    return r[..., np.newaxis] * np.asarray(x, dtype=float), r ** 2 * np.asarray(t)


def koranyiNormArrays(x: np.ndarray, t: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    squaredLength = np.sum(x * x, axis=-1)
    return (squaredLength ** 2 + 16.0 * np.asarray(t, dtype=float) ** 2) ** 0.25


def koranyiDistanceArrays(
    x1: np.ndarray, t1: np.ndarray, x2: np.ndarray, t2: np.ndarray
) -> np.ndarray:
    """rho(a^-1 . b) for a = (x1, t1), b = (x2, t2)"""
    x, t = mulArrays(-np.asarray(x1, dtype=float), -np.asarray(t1), x2, t2)
    return koranyiNormArrays(x, t)


def rotateArrays(matrix: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.asarray(x, dtype=float) @ np.asarray(matrix, dtype=float).T


def _checkSameGroup(a: GroupPoint, b: GroupPoint) -> None:
    if a.n != b.n:
        raise errors.DimensionMismatch(a.n, b.n)


def mul(a: GroupPoint, b: GroupPoint) -> GroupPoint:
    _checkSameGroup(a, b)
    x, t = mulArrays(np.array(a.x), a.t, np.array(b.x), b.t)
    return GroupPoint.fromArrays(x, t)


def inv(a: GroupPoint) -> GroupPoint:
    return GroupPoint([-value for value in a.x], -a.t)


def dilate(r: float, a: GroupPoint) -> GroupPoint:
    if r <= 0:
        raise errors.ArgumentError(f"Dilation factor must be positive; got {r}")
    return GroupPoint([r * value for value in a.x], r * r * a.t)


def rotate(A, a: GroupPoint) -> GroupPoint:
    """(Ax, t) for a RotationMatrix A"""
    if A.n != a.n:
        raise errors.DimensionMismatch(A.n, a.n)
    return GroupPoint.fromArrays(A.matrix @ np.array(a.x), a.t)


def koranyiNorm(a: GroupPoint) -> float:
    return float(koranyiNormArrays(np.array(a.x), a.t))


def koranyiDistance(a: GroupPoint, b: GroupPoint) -> float:
    """rho(a^-1 . b), the left invariant quasi-distance"""
    return koranyiNorm(mul(inv(a), b))
