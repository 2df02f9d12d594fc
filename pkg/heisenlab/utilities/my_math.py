"""
Various math utilities
"""

import math
import sys
from typing import Callable, List, Sequence, Tuple

import numpy as np
from scipy import optimize

from heisenlab.utilities import constants
from heisenlab.utilities import errors


def numToStr(inputNum: float) -> str:
    if math.isfinite(inputNum) and isclose(inputNum, int(inputNum)):
        retVal = "%d" % inputNum
    else:
        retVal = "%s" % repr(float(inputNum))
    return retVal


def isclose(a: float, b: float, rel_tol: float = 1e-14, abs_tol: float = 0.0) -> bool:
    return abs(a - b) <= max(rel_tol * max(abs(a), abs(b)), abs_tol)


def relativeDifference(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    if scale == 0:
        return 0.0
    return abs(a - b) / scale


def richardsonTable(estimates: Sequence[float], order: int = 2) -> List[float]:
    """Diagonal of the Richardson table for estimates at steps h, h/2, h/4, ...

    The leading error of the estimates must be O(h^order) with only
    every other power present (true for central differences).
    Returns the last entry of every column; the final value is the best estimate.
    """
    column = list(estimates)
    diagonal = [column[-1]]
    power = order
    while len(column) > 1:
        factor = 2.0 ** power
        column = [
            (factor * fine - coarse) / (factor - 1)
            for coarse, fine in zip(column[:-1], column[1:])
        ]
        diagonal.append(column[-1])
        power += 2

    return diagonal


def fitPowerLaw(
    xValues: Sequence[float], yValues: Sequence[float]
) -> Tuple[float, float, float]:
    """Least squares fit of log(y) = slope * log(x) + intercept

    Returns:
        (slope, intercept, standard error of the slope)
    """
    x = np.log(np.asarray(xValues, dtype=float))
    y = np.log(np.abs(np.asarray(yValues, dtype=float)))
    if len(x) < 2:
        raise errors.ArgumentError("A power law fit needs at least two points")

    (slope, intercept), residuals, _rank, _sv, _rcond = np.polyfit(x, y, 1, full=True)
    slopeError = 0.0
    if len(x) > 2 and len(residuals) > 0:
        sigma2 = residuals[0] / (len(x) - 2)
        slopeError = math.sqrt(sigma2 / np.sum((x - x.mean()) ** 2))

    return float(slope), float(intercept), slopeError


def geometricGrid(start: float, stop: float, count: int) -> List[float]:
    if start <= 0 or stop <= 0 or count < 1:
        raise errors.ArgumentError(
            f"Bad geometric grid: start={start}, stop={stop}, count={count}"
        )
    if count == 1:
        return [float(start)]
    return [float(value) for value in np.geomspace(start, stop, count)]


def bracketDecreasing(
    func: Callable[[float], float],
    target: float,
    start: float = 1.0,
    maxSteps: int = constants.BRACKET_MAX_STEPS,
) -> Tuple[float, float]:
    """Finds lo < hi with func(lo) > target >= func(hi) for a nonincreasing func

    Doubling/halving from start.
    """
    lo = hi = start
    if func(start) > target:
        for _ in range(maxSteps):
            lo = hi
            hi = hi * 2.0
            if func(hi) <= target:
                return lo, hi
        raise errors.BracketNotFound(start, hi)

    for _ in range(maxSteps):
        hi = lo
        lo = lo / 2.0
        if func(lo) > target:
            return lo, hi
    raise errors.BracketNotFound(lo, start)


def solveDecreasing(
    func: Callable[[float], float],
    target: float,
    lo: float,
    hi: float,
    relativeWidth: float = constants.ROOT_RELATIVE_WIDTH,
    maxSteps: int = constants.ROOT_MAX_STEPS,
) -> float:
    """Solves func(x) = target inside a bracket from bracketDecreasing

    Brent's method runs on log(x), so the answer is relatively accurate to
    relativeWidth at every scale.

    Raises:
        BracketNotFound: if func(lo) > target >= func(hi) does not hold
    """
    top = func(lo) - target
    bottom = func(hi) - target
    if not (top > 0 and bottom <= 0):
        raise errors.BracketNotFound(lo, hi)
    if bottom == 0:
        return float(hi)

    def shifted(s: float) -> float:
        value = func(math.exp(s)) - target
        return value if math.isfinite(value) else sys.float_info.max

    root = optimize.brentq(
        shifted,
        math.log(lo),
        math.log(hi),
        xtol=relativeWidth / 4.0,
        maxiter=maxSteps,
    )
    return math.exp(root)
