"""
Left invariant calculus on H^n

X_i f(z) = d/ds f(z . gamma_i(s)) at s = 0 with gamma_i(s) = (s e_i, 0) for
i <= 2n and gamma_{2n+1}(s) = (0, s).  In coordinates

    X_i      = d/dx_i     + (x_{i+n} / 2) d/dt     (i <= n)
    X_{i+n}  = d/dx_{i+n} - (x_i / 2) d/dt
    X_{2n+1} = d/dt

X^I = X_1^{i_1} ... X_{2n+1}^{i_{2n+1}}, and since each gamma_i is a one
parameter subgroup,

    X_{a_1} ... X_{a_k} f(z) = d^k/ds_1...ds_k f(z . gamma_{a_1}(s_1) ... gamma_{a_k}(s_k))

which is what the nested central differences below evaluate.
"""

import functools
import logging
import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from heisenlab import group
from heisenlab.data_classes.geometry import KoranyiBall
from heisenlab.data_classes.multi_index import (
    DerivativeSpec,
    MultiIndex,
    PolynomialHG,
    monomialArrays,
)
from heisenlab.data_classes.reports import TaylorRemainderReport
from heisenlab.integration import sampleBallArrays
from heisenlab.utilities import constants
from heisenlab.utilities import errors
from heisenlab.utilities import my_math
from heisenlab.utilities.constants import GroupPoint

logger = logging.getLogger(__name__)

FieldLike = Callable[[np.ndarray, np.ndarray], np.ndarray]


def homogeneousDegree(index: Sequence[int]) -> int:
    return MultiIndex(index).degree


def monomialEval(index: Sequence[int], z: GroupPoint) -> float:
    index = MultiIndex(index)
    if index.n != z.n:
        raise errors.DimensionMismatch(index.n, z.n)
    return float(monomialArrays(index, np.array(z.x), np.array(z.t)))


def applyVectorFieldExact(axis: int, polynomial: PolynomialHG) -> PolynomialHG:
    """X_axis applied to a polynomial, using the coordinate formulas

    Coefficients stay exact in floating point: they are integers times powers of 1/2.
    """
    n = polynomial.n
    if not 1 <= axis <= 2 * n + 1:
        raise errors.ArgumentError(f"Axis must be in 1..{2 * n + 1}; got {axis}")

    result: Dict[MultiIndex, float] = {}

    def addTerm(entries: List[int], value: float):
        index = MultiIndex(entries)
        result[index] = result.get(index, 0.0) + value

    tAxis = 2 * n
    for index, coefficient in polynomial.coefficients.items():
        entries = list(index)
        if axis == 2 * n + 1:
            if entries[tAxis]:
                lowered = list(entries)
                lowered[tAxis] -= 1
                addTerm(lowered, coefficient * entries[tAxis])
            continue

        i = axis - 1
        if entries[i]:
            lowered = list(entries)
            lowered[i] -= 1
            addTerm(lowered, coefficient * entries[i])
        if entries[tAxis]:
            # the t-derivative is multiplied by +x_{i+n}/2 or -x_{i-n}/2
            partner, sign = (i + n, 0.5) if i < n else (i - n, -0.5)
            shifted = list(entries)
            shifted[tAxis] -= 1
            shifted[partner] += 1
            addTerm(shifted, coefficient * entries[tAxis] * sign)

    return PolynomialHG(n, result, max(polynomial.maxDegree - 1, 0))


def applyDerivativeExact(index: MultiIndex, polynomial: PolynomialHG) -> PolynomialHG:
    """X^I applied to a polynomial; the rightmost field acts first"""
    result = polynomial
    for axis in reversed(index.fieldSequence()):
        result = applyVectorFieldExact(axis, result)
    return result


@functools.lru_cache(maxsize=None)
def interpolationMatrix(n: int, degree: int) -> np.ndarray:
    """M[J, I] = (X^J z^I)(e) over all I, J with d(I), d(J) <= degree"""
    indices = MultiIndex.enumerate(n, degree)
    matrix = np.zeros((len(indices), len(indices)))
    for column, index in enumerate(indices):
        monomial = PolynomialHG.monomial(index)
        for row, derivative in enumerate(indices):
            if derivative.degree != index.degree:
                # X^J z^I is homogeneous of degree d(I) - d(J); nonconstant otherwise
                continue
            matrix[row, column] = applyDerivativeExact(
                derivative, monomial
            ).constantTerm()
    matrix.setflags(write=False)
    return matrix


def _stencil(
    sequence: List[int], n: int, steps: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Offsets gamma_{a_1}(s_1) ... gamma_{a_k}(s_k) for all sign patterns

    Returns x offsets (B, 2^k, 2n), t offsets (B, 2^k) and the weights
    prod(sign) / (2h)^k with shape (B, 2^k).
    """
    k = len(sequence)
    signs = np.array(
        [[1.0 - 2.0 * ((pattern >> j) & 1) for j in range(k)] for pattern in range(2 ** k)]
    ).reshape(2 ** k, k)
    batch = len(steps)
    offsetX = np.zeros((batch, 2 ** k, 2 * n))
    offsetT = np.zeros((batch, 2 ** k))
    for j, axis in enumerate(sequence):
        s = steps[:, None] * signs[None, :, j]
        stepX = np.zeros((batch, 2 ** k, 2 * n))
        stepT = np.zeros((batch, 2 ** k))
        if axis <= 2 * n:
            stepX[..., axis - 1] = s
        else:
            stepT = s
        offsetX, offsetT = group.mulArrays(offsetX, offsetT, stepX, stepT)

    weights = np.prod(signs, axis=-1)[None, :] / (2.0 * steps[:, None]) ** k
    return offsetX, offsetT, weights


def _defaultSteps(
    x: np.ndarray, t: np.ndarray, order: int, spec: DerivativeSpec
) -> np.ndarray:
    if spec.step is not None:
        return np.full(len(t), spec.step)
    scale = 1.0 + group.koranyiNormArrays(x, t)
    return constants.DEFAULT_DERIVATIVE_STEP * scale * 2.0 ** max(order - 1, 0)


def higherDerivativeArrays(
    index: Sequence[int],
    f: FieldLike,
    x: np.ndarray,
    t: np.ndarray,
    spec: DerivativeSpec = DerivativeSpec(),
    steps: Optional[np.ndarray] = None,
) -> np.ndarray:
    """X^I f at each of the base points (x[b], t[b])

    Nested central differences with Richardson extrapolation over
    spec.richardsonLevels halvings of the step.

    Raises:
        DerivativeInstability: non-finite samples, d(I) above spec.maxDegree,
            or an extrapolation table whose corrections grow
    """
    index = MultiIndex(index)
    if index.degree > spec.maxDegree:
        raise errors.DerivativeInstability(
            f"d(I) = {index.degree} exceeds the stable maximum {spec.maxDegree}"
        )
    x = np.atleast_2d(np.asarray(x, dtype=float))
    t = np.atleast_1d(np.asarray(t, dtype=float))
    n = x.shape[-1] // 2
    if index.n != n:
        raise errors.DimensionMismatch(index.n, n)

    sequence = index.fieldSequence()
    if steps is None:
        steps = _defaultSteps(x, t, len(sequence), spec)
    steps = np.broadcast_to(np.asarray(steps, dtype=float), t.shape)

    estimates = []
    for level in range(spec.richardsonLevels):
        offsetX, offsetT, weights = _stencil(sequence, n, steps / 2.0 ** level)
        pointX, pointT = group.mulArrays(x[:, None, :], t[:, None], offsetX, offsetT)
        values = np.asarray(f(pointX, pointT), dtype=float)
        if not np.all(np.isfinite(values)):
            raise errors.DerivativeInstability(
                f"Non-finite field values while differentiating X^{tuple(index)}"
            )
        estimates.append(np.sum(weights * values, axis=-1))

    if len(sequence) == 0:
        return estimates[0]

    results = np.empty(len(t))
    for b in range(len(t)):
        diagonal = my_math.richardsonTable([estimate[b] for estimate in estimates])
        _checkConvergence(diagonal, index)
        results[b] = diagonal[-1]
    return results


def _checkConvergence(diagonal: List[float], index: MultiIndex) -> None:
    if not all(math.isfinite(value) for value in diagonal):
        raise errors.DerivativeInstability(f"Extrapolation of X^{tuple(index)} overflowed")
    corrections = [abs(b - a) for a, b in zip(diagonal[:-1], diagonal[1:])]
    if len(corrections) >= 2:
        scale = max(abs(value) for value in diagonal)
        if corrections[-1] > 2.0 * corrections[0] and corrections[-1] > 1e-6 * scale:
            raise errors.DerivativeInstability(
                f"Richardson extrapolation of X^{tuple(index)} diverges: {diagonal}"
            )


def higherDerivative(
    index: Sequence[int],
    f: FieldLike,
    z: GroupPoint,
    spec: DerivativeSpec = DerivativeSpec(),
) -> float:
    """(X^I f)(z) by Richardson extrapolated nested central differences"""
    values = higherDerivativeArrays(index, f, np.array([z.x]), np.array([z.t]), spec)
    return float(values[0])


def vectorFieldApply(
    axis: int, f: FieldLike, z: GroupPoint, spec: DerivativeSpec = DerivativeSpec()
) -> float:
    """(X_axis f)(z) for a 1-based axis in 1..2n+1"""
    return higherDerivative(MultiIndex.unit(z.n, axis), f, z, spec)


def leftTaylor(
    f: FieldLike,
    base: GroupPoint,
    degree: int,
    spec: DerivativeSpec = DerivativeSpec(),
) -> PolynomialHG:
    """The left Taylor polynomial P of f at base

    P has homogeneous degree <= degree and X^I P(e) = X^I [w -> f(base . w)](e)
    for every d(I) <= degree.

    Raises:
        SingularSystemError: if the interpolation system is not invertible
    """
    if degree < 0:
        raise errors.ArgumentError(f"degree must be >= 0; got {degree}")
    n = base.n
    baseX, baseT = base.asArrays()

    def translated(x, t):
        return f(*group.mulArrays(baseX, baseT, x, t))

    indices = MultiIndex.enumerate(n, degree)
    origin = GroupPoint.identity(n)
    derivatives = np.array(
        [higherDerivative(index, translated, origin, spec) for index in indices]
    )

    matrix = interpolationMatrix(n, degree)
    if np.linalg.cond(matrix) > 1e12:
        raise errors.SingularSystemError(
            f"Taylor interpolation matrix for n={n}, degree={degree} is singular"
        )
    coefficients = np.linalg.solve(matrix, derivatives)
    return PolynomialHG(n, dict(zip(indices, coefficients)), degree)


def taylorRemainderRatio(
    f: FieldLike,
    base: GroupPoint,
    N: int,
    samples: Sequence[GroupPoint],
    spec: DerivativeSpec = DerivativeSpec(),
    beta: float = constants.DEFAULT_TAYLOR_BETA,
    cloudSize: int = 16,
    seed: int = 0,
) -> TaylorRemainderReport:
    """Fits the constant of the left Taylor inequality

        |f(base . z) - P(z)| <= C rho(z)^N sup_{rho(w) <= beta^N rho(z), d(I) = N} |X^I f(base . w)|

    where P is the left Taylor polynomial of degree N - 1.  The sup is taken
    over a random cloud of `cloudSize` points plus e.  Samples whose sup
    underflows are skipped and counted.
    """
    if N < 1:
        raise errors.ArgumentError(f"N must be >= 1; got {N}")
    n = base.n
    baseX, baseT = base.asArrays()

    def translated(x, t):
        return f(*group.mulArrays(baseX, baseT, x, t))

    polynomial = leftTaylor(f, base, N - 1, spec)
    topIndices = MultiIndex.ofDegree(n, N)

    ratios: List[float] = []
    maxRemainder = 0.0
    skipped = 0
    for i, z in enumerate(samples):
        zX, zT = z.asArrays()
        remainder = abs(float(translated(zX, zT)) - float(polynomial(zX, zT)))
        maxRemainder = max(maxRemainder, remainder)
        rho = group.koranyiNorm(z)
        if rho == 0:
            skipped += 1
            continue

        cloudBall = KoranyiBall.centered(n, beta ** N * rho)
        cloudX, cloudT = sampleBallArrays(cloudBall, cloudSize, seed + i)
        cloudX = np.vstack([np.zeros((1, 2 * n)), cloudX])
        cloudT = np.concatenate([[0.0], cloudT])
        sup = max(
            float(np.max(np.abs(higherDerivativeArrays(index, translated, cloudX, cloudT, spec))))
            for index in topIndices
        )
        denominator = rho ** N * sup
        if denominator < 1e-300:
            skipped += 1
            continue
        ratios.append(remainder / denominator)

    constant = max(ratios) if ratios else 0.0
    logger.debug("Taylor remainder constant %s from %d samples", constant, len(ratios))
    return TaylorRemainderReport(constant, beta, ratios, maxRemainder, skipped)
