"""
The generalized Riesz operator T_{alpha,m}, the Riesz potential, fractional
maximal functions and the geometry used to bound them

    T f(z) = int f(y, s) prod_j rho((A_j y, r_j^-2 s)^-1 . z)^-alpha_j dy ds

The j-th factor is singular at the preimage y*_j = (A_j^-1 x, r_j^2 t) of
z = (x, t).  Evaluation splits into a far field, where every preimage is at
least two support radii away and the field is integrated with its own rule,
and a near field, where a partition of unity isolates each preimage and the
support is swept by dyadic Koranyi shells about it.
"""

from collections import namedtuple
from concurrent import futures
import functools
import logging
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from heisenlab import calculus
from heisenlab import group
from heisenlab import integration
from heisenlab import varexp
from heisenlab.data_classes.atom import Atom, BumpDictionary, unitBallRule
from heisenlab.data_classes.exponent import ExponentFunction
from heisenlab.data_classes.field import Field
from heisenlab.data_classes.geometry import (
    Dimension,
    IntegrationResult,
    IntegrationSpec,
    KoranyiBall,
)
from heisenlab.data_classes.kernel_spec import KernelSpec
from heisenlab.data_classes.multi_index import DerivativeSpec, MultiIndex
from heisenlab.data_classes.quadrature_rule import QuadratureRule
from heisenlab.data_classes.reports import (
    DecayFit,
    FittedConstantReport,
    RatioReport,
    RegionDomination,
)
from heisenlab.utilities import constants
from heisenlab.utilities import errors
from heisenlab.utilities import my_math
from heisenlab.utilities import utils
from heisenlab.utilities.constants import GroupPoint

logger = logging.getLogger(__name__)

SeparationConstants = namedtuple(
    "SeparationConstants", ["beta", "gammaProof", "gammaStar"]
)

_SILENT = constants.ErrorReportingMode.SILENCE


def kernelArrays(
    kernel: KernelSpec,
    yX: np.ndarray,
    yT: np.ndarray,
    zX: np.ndarray,
    zT: np.ndarray,
) -> np.ndarray:
    """prod_j rho((A_j y, r_j^-2 s)^-1 . z)^-alpha_j, +inf on the singular sets"""
    yX = np.asarray(yX, dtype=float)
    yT = np.asarray(yT, dtype=float)
    product = np.ones(np.broadcast_shapes(yT.shape, np.shape(zT)))
    with np.errstate(divide="ignore"):
        for distance, exponent in zip(
            preimageDistances(kernel, yX, yT, zX, zT), kernel.alphas
        ):
            product = product * distance ** (-exponent)
    return product


def preimageDistances(
    kernel: KernelSpec,
    yX: np.ndarray,
    yT: np.ndarray,
    zX: np.ndarray,
    zT: np.ndarray,
) -> List[np.ndarray]:
    """rho_j = rho((A_j y, r_j^-2 s)^-1 . z) for every factor j"""
    distances = []
    for matrix, radius in zip(kernel.matrices, kernel.radii):
        imageX = np.asarray(yX) @ matrix.T
        imageT = np.asarray(yT) / (radius * radius)
        distances.append(group.koranyiDistanceArrays(imageX, imageT, zX, zT))
    return distances


def kernelEval(kernel: KernelSpec, y: GroupPoint, z: GroupPoint) -> float:
    yX, yT = y.asArrays()
    zX, zT = z.asArrays()
    return float(kernelArrays(kernel, yX, yT, zX, zT))


def singularPreimages(kernel: KernelSpec, z: GroupPoint) -> List[GroupPoint]:
    """The points y*_j = (A_j^-1 x, r_j^2 t) where the j-th factor blows up"""
    zX, zT = z.asArrays()
    return [
        GroupPoint.fromArrays(inverse @ zX, radius * radius * zT)
        for inverse, radius in zip(kernel.inverses, kernel.radii)
    ]


def _partitionWeight(
    preimages: Sequence[GroupPoint], j: int, x: np.ndarray, t: np.ndarray, Q: int
) -> np.ndarray:
    """D_j^-Q / sum_i D_i^-Q with D_i the distance to the i-th preimage"""
    distances = []
    for point in preimages:
        pointX, pointT = point.asArrays()
        distances.append(group.koranyiDistanceArrays(pointX, pointT, x, t))
    own = distances[j]
    total = np.ones(np.shape(own))
    with np.errstate(divide="ignore", invalid="ignore"):
        for i, other in enumerate(distances):
            if i != j:
                total = total + np.where(other > 0, (own / other) ** Q, np.inf)
    return 1.0 / total


def _integrateAroundPreimage(
    integrand: Callable[[np.ndarray, np.ndarray], np.ndarray],
    f: Field,
    kernel: KernelSpec,
    preimages: Sequence[GroupPoint],
    j: int,
    spec: IntegrationSpec,
) -> IntegrationResult:
    n = f.n
    Q = group.homogeneousDimension(n)
    center = preimages[j]
    reach = max(
        group.koranyiDistance(center, ball.center) + ball.radius for ball in f.support
    )
    gap = min(
        group.koranyiDistance(center, ball.center) - ball.radius for ball in f.support
    )
    ratio = 2.0 ** -(Q - kernel.alphas[j])
    perShell = max(64, spec.maxEvaluations // 8)

    def weighted(x, t):
        weights = _partitionWeight(preimages, j, x, t, Q)
        with np.errstate(invalid="ignore"):
            return np.where(weights > 0, integrand(x, t) * weights, 0.0)

    total = IntegrationResult(0.0, 0.0, 0)
    outer = reach
    last = None
    for k in range(constants.MAX_DYADIC_ANNULI):
        if outer <= gap:
            last = None
            break
        inner = outer / 2.0
        rule, companion = integration.shellRuleForSpec(
            n, inner, outer, spec, perShell, stream=j * constants.MAX_DYADIC_ANNULI + k
        )
        rule = rule.translated(center)
        if companion is not None:
            companion = companion.translated(center)
        last = integration.estimateOnRules(weighted, rule, companion)
        total = total + last
        outer = inner
        if (
            k + 1 >= constants.MIN_DYADIC_ANNULI
            and total.value != 0
            and abs(last.value) <= spec.tolerance * abs(total.value)
        ):
            break

    if last is not None:
        # unswept core about the preimage, continued geometrically from the last shell
        core = last.value * ratio / (1.0 - ratio)
        total = IntegrationResult(total.value + core, total.error + abs(core), total.evaluations)
    return total


def applyT(
    kernel: KernelSpec,
    f: Field,
    z: GroupPoint,
    spec: IntegrationSpec = IntegrationSpec(),
    regionMask: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None,
    errorMode: str = constants.ErrorReportingMode.WARNING,
) -> IntegrationResult:
    """(T f)(z) with an error estimate

    Args:
        kernel: the operator
        f: a bounded field with declared bounded support
        z: the evaluation point
        spec: quadrature settings
        regionMask: if given, computes T(chi_R f)(z) for R = {mask is true}
        errorMode: "silence", "warning" or "error" when the error estimate
            exceeds spec.tolerance relative to the value

    Raises:
        ArgumentError: f has no bounded support
        IntegrationBudgetExceeded: in "error" mode
    """
    if not f.hasBoundedSupport:
        raise errors.ArgumentError("T is only evaluated on fields with bounded support")
    if f.n != kernel.n:
        raise errors.DimensionMismatch(f.n, kernel.n)
    if z.n != kernel.n:
        raise errors.DimensionMismatch(z.n, kernel.n)
    errorReporter = utils.getErrorReporter(errorMode)

    zX, zT = z.asArrays()
    source = f if regionMask is None else f.masked(regionMask)

    def integrand(x, t):
        values = source(x, t)
        with np.errstate(invalid="ignore"):
            return np.where(values != 0, values * kernelArrays(kernel, x, t, zX, zT), 0.0)

    preimages = singularPreimages(kernel, z)
    isFarField = all(
        group.koranyiDistance(ball.center, point)
        >= constants.NEAR_FIELD_FACTOR * ball.radius
        for ball in f.support
        for point in preimages
    )
    if isFarField:
        result = integration.estimateOnRules(
            integrand, *integration.supportRules(source, spec)
        )
    else:
        result = IntegrationResult(0.0, 0.0, 0)
        for j in range(kernel.m):
            result = result + _integrateAroundPreimage(
                integrand, source, kernel, preimages, j, spec
            )

    if result.error > spec.tolerance * abs(result.value):
        errorReporter(
            errors.IntegrationBudgetExceeded,
            f"T f({z}) = {result.value} has error {result.error} above "
            f"tolerance {spec.tolerance}",
        )
    return result


def applyRiesz(
    alpha: float,
    f: Field,
    z: GroupPoint,
    spec: IntegrationSpec = IntegrationSpec(),
    errorMode: str = constants.ErrorReportingMode.WARNING,
) -> IntegrationResult:
    """The Riesz potential (f * rho^{alpha - Q})(z)"""
    Q = group.homogeneousDimension(f.n)
    if not 0 < alpha < Q:
        raise errors.ArgumentError(f"Riesz order must lie in (0, {Q}); got {alpha}")
    return applyT(KernelSpec.riesz(alpha, f.n), f, z, spec, errorMode=errorMode)


def _absIntegralOverBall(f: Field, ball: KoranyiBall, spec: IntegrationSpec) -> float:
    """int_ball |f|, integrated on whichever of the ball and the support is smaller"""
    if ball.radius <= min(support.radius for support in f.support):
        rule, _companion = integration.ballRule(ball, spec)
        values = np.abs(f(rule.x, rule.t))
    else:
        rule, _companion = integration.supportRules(f, spec)
        values = np.abs(f(rule.x, rule.t)) * ball.containsArrays(rule.x, rule.t)
    return rule.estimate(values)[0]


def defaultMaximalRadii(f: Field, z: GroupPoint) -> List[float]:
    """Powers of two times the smallest support radius, up to twice the reach from z"""
    scale = min(ball.radius for ball in f.support)
    reach = max(
        group.koranyiDistance(ball.center, z) + ball.radius for ball in f.support
    )
    top = max(0, int(math.ceil(math.log2(2.0 * reach / scale))))
    return [scale * 2.0 ** k for k in range(-8, top + 1)]


def fractionalMaximal(
    alpha: float,
    f: Field,
    z: GroupPoint,
    radii: Optional[Sequence[float]] = None,
    spec: IntegrationSpec = IntegrationSpec(),
    offCenterCount: int = constants.OFF_CENTER_COUNT,
) -> float:
    """A lower bound for sup_{B containing z} |B|^{alpha/Q - 1} int_B |f|

    Balls centered at z with the given radii, plus for each radius
    `offCenterCount` balls of that radius whose random centers lie within
    the radius of z.  The off-center centers depend only on (spec.seed,
    radius), so adding radii never lowers the result.
    """
    if not f.hasBoundedSupport:
        raise errors.ArgumentError("The maximal function needs a bounded support")
    Q = group.homogeneousDimension(f.n)
    if not 0 <= alpha < Q:
        raise errors.ArgumentError(f"alpha must lie in [0, {Q}); got {alpha}")
    radii = defaultMaximalRadii(f, z) if radii is None else sorted(set(radii))

    best = 0.0
    for radius in radii:
        ball = KoranyiBall(z, radius)
        factor = integration.ballVolume(ball) ** (alpha / Q - 1.0)
        centers = [z]
        if offCenterCount > 0:
            rng = utils.makeRng(spec.seed, utils.floatKey(radius))
            centers += integration.sampleBall(
                ball, offCenterCount, int(rng.integers(0, 2 ** 62))
            )
        for center in centers:
            average = factor * _absIntegralOverBall(f, KoranyiBall(center, radius), spec)
            best = max(best, average)
    return best


def separationConstants(radii: Sequence[float]) -> SeparationConstants:
    """beta = min_{i != j} min(|r_i - r_j|, |r_i^2 - r_j^2|^{1/2}), gamma = max r_i,
    gammaStar = (1 + max r_i) / min r_i

    Raises:
        KernelSpecError: two radii have the same square
    """
    radii = [float(radius) for radius in radii]
    if not radii or any(not radius > 0 for radius in radii):
        raise errors.KernelSpecError(f"Radii must be positive; got {radii}")
    beta = math.inf
    for i in range(len(radii)):
        for j in range(i + 1, len(radii)):
            squareGap = abs(radii[i] ** 2 - radii[j] ** 2)
            if math.isclose(radii[i] ** 2, radii[j] ** 2, rel_tol=1e-12):
                raise errors.KernelSpecError(
                    f"r_{i + 1}^2 = r_{j + 1}^2 for radii {radii}"
                )
            beta = min(beta, abs(radii[i] - radii[j]), math.sqrt(squareGap))
    return SeparationConstants(
        beta, max(abs(radius) for radius in radii), (1 + max(radii)) / min(radii)
    )


def pairSeparationArrays(
    ri: float, rj: float, x: np.ndarray, t: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """rho((r_i x, r_i^2 t)^-1 . (r_j x, r_j^2 t)) and its closed form

    x^T J x = 0 removes the cross term, leaving
    (|r_j - r_i|^4 |x|^4 + 16 (r_j^2 - r_i^2)^2 t^2)^{1/4}.
    """
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    direct = group.koranyiDistanceArrays(ri * x, ri * ri * t, rj * x, rj * rj * t)
    normX = np.sum(x * x, axis=-1)
    closed = (
        (rj - ri) ** 4 * normX ** 2 + 16.0 * (rj * rj - ri * ri) ** 2 * t * t
    ) ** 0.25
    return direct, closed


def _checkOmegaKernel(kernel: KernelSpec, z: GroupPoint) -> None:
    if kernel.alpha != 0:
        raise errors.KernelSpecError("The Omega partition is defined for alpha = 0")
    if group.koranyiNorm(z) == 0:
        raise errors.ArgumentError("The Omega partition needs z != e")


def omegaLabelArrays(
    kernel: KernelSpec, z: GroupPoint, yX: np.ndarray, yT: np.ndarray
) -> np.ndarray:
    """Region labels 1..m+2 of the points y for the evaluation point z

    Omega_j (j <= m): rho(y^-1 . (r_j x, r_j^2 t)) < (beta / 2) rho(z)
    Omega_{m+1}: outside those, rho(y) <= (1 + gamma) rho(z)
    Omega_{m+2}: outside those, rho(y) > (1 + gamma) rho(z)
    """
    _checkOmegaKernel(kernel, z)
    beta, gamma, _gammaStar = separationConstants(kernel.radii)
    zX, zT = z.asArrays()
    rhoZ = group.koranyiNorm(z)
    yX = np.asarray(yX, dtype=float)
    yT = np.asarray(yT, dtype=float)

    labels = np.zeros(np.shape(yT), dtype=int)
    assigned = np.zeros(np.shape(yT), dtype=bool)
    for j, radius in enumerate(kernel.radii):
        inside = (
            group.koranyiDistanceArrays(yX, yT, radius * zX, radius * radius * zT)
            < beta / 2.0 * rhoZ
        )
        labels = np.where(inside & ~assigned, j + 1, labels)
        assigned = assigned | inside
    near = group.koranyiNormArrays(yX, yT) <= (1.0 + gamma) * rhoZ
    labels = np.where(~assigned & near, kernel.m + 1, labels)
    labels = np.where(~assigned & ~near, kernel.m + 2, labels)
    return labels


def omegaPartition(kernel: KernelSpec, z: GroupPoint, y: GroupPoint) -> int:
    yX, yT = y.asArrays()
    return int(omegaLabelArrays(kernel, z, yX, yT))


def _kernelConstant(kernel: KernelSpec) -> float:
    """prod_j r_j^alpha_j, the factor relating T_{0,m} to prod rho(y^-1 (r_j x, r_j^2 t))^-alpha_j"""
    return math.prod(radius ** exponent for radius, exponent in zip(kernel.radii, kernel.alphas))


def omegaTailBound(
    kernel: KernelSpec,
    f: Field,
    z: GroupPoint,
    p0: float,
    spec: IntegrationSpec = IntegrationSpec(),
) -> float:
    """The Holder bound for |T(chi_{Omega_{m+2}} f)(z)|

    C (1 + gamma)^{Q/p0'} sigma^{1/p0'} ((p0' - 1) Q)^{-1/p0'} ||f||_{p0} rho(z)^{-Q/p0}
    """
    _checkOmegaKernel(kernel, z)
    if not p0 > 1:
        raise errors.ArgumentError(f"p0 must exceed 1; got {p0}")
    n = kernel.n
    Q = group.homogeneousDimension(n)
    dual = p0 / (p0 - 1.0)
    gamma = separationConstants(kernel.radii).gammaProof
    sigma = integration.sphereMeasure(Dimension(n))
    fNorm = varexp.luxemburgNorm(f, ExponentFunction.constant(p0, n), spec)
    return (
        _kernelConstant(kernel)
        * (1.0 + gamma) ** (Q / dual)
        * sigma ** (1.0 / dual)
        * ((dual - 1.0) * Q) ** (-1.0 / dual)
        * fNorm
        * group.koranyiNorm(z) ** (-Q / p0)
    )


def _ratio(value: float, comparison: float) -> float:
    if comparison > 0:
        return abs(value) / comparison
    return 0.0 if value == 0 else math.inf


def omegaDomination(
    kernel: KernelSpec,
    f: Field,
    z: GroupPoint,
    spec: IntegrationSpec = IntegrationSpec(),
    p0: float = 2.0,
    maximalRadii: Optional[Sequence[float]] = None,
) -> List[RegionDomination]:
    """T(chi_{Omega_j} f)(z) for every region, each against the proof's comparison

    Omega_j (j <= m) is compared with C M_0 f(r_j x, r_j^2 t) and carries the
    proof constant 2^alpha_j c_0 / (1 - 2^{-(Q - alpha_j)}); Omega_{m+1} is
    compared with C M_0 f(z), proof constant (4 (1 + gamma) / beta)^Q c_0;
    Omega_{m+2} is compared with omegaTailBound.
    """
    _checkOmegaKernel(kernel, z)
    n = kernel.n
    Q = group.homogeneousDimension(n)
    c0 = integration.ballVolumeConstant(n)
    beta, gamma, _gammaStar = separationConstants(kernel.radii)
    scale = _kernelConstant(kernel)
    zX, zT = z.asArrays()

    def regionValue(label: int) -> IntegrationResult:
        def mask(x, t):
            return omegaLabelArrays(kernel, z, x, t) == label

        return applyT(kernel, f, z, spec, regionMask=mask, errorMode=_SILENT)

    reports = []
    for j, (radius, exponent) in enumerate(zip(kernel.radii, kernel.alphas)):
        point = GroupPoint.fromArrays(radius * zX, radius * radius * zT)
        maximal = fractionalMaximal(0.0, f, point, maximalRadii, spec)
        value = regionValue(j + 1)
        comparison = scale * maximal
        proofConstant = 2.0 ** exponent * c0 / (1.0 - 2.0 ** -(Q - exponent))
        reports.append(
            RegionDomination(
                j + 1, value.value, value.error, comparison,
                _ratio(value.value, comparison), proofConstant,
            )
        )

    value = regionValue(kernel.m + 1)
    comparison = scale * fractionalMaximal(0.0, f, z, maximalRadii, spec)
    reports.append(
        RegionDomination(
            kernel.m + 1, value.value, value.error, comparison,
            _ratio(value.value, comparison), (4.0 * (1.0 + gamma) / beta) ** Q * c0,
        )
    )

    value = regionValue(kernel.m + 2)
    comparison = omegaTailBound(kernel, f, z, p0, spec)
    reports.append(
        RegionDomination(
            kernel.m + 2, value.value, value.error, comparison,
            _ratio(value.value, comparison), 1.0,
        )
    )
    return reports


def rieszDominationCheck(
    kernel: KernelSpec,
    f: Field,
    z: GroupPoint,
    spec: IntegrationSpec = IntegrationSpec(),
) -> RatioReport:
    """|T f(z)| against sum_j R_alpha |f| (A_j^-1 x, t), valid for alpha > 0"""
    if not kernel.alpha > 0:
        raise errors.KernelSpecError("Riesz domination needs alpha > 0")
    lhs = abs(applyT(kernel, f, z, spec, errorMode=_SILENT).value)
    absolute = f.absPower(1.0)
    rhs = sum(
        applyRiesz(kernel.alpha, absolute, point, spec, errorMode=_SILENT).value
        for point in singularPreimages(kernel, z)
    )
    return RatioReport(_ratio(lhs, rhs), lhs, rhs)


def sampleKernelPairs(
    kernel: KernelSpec, count: int, seed: int, radius: float = 2.0, guard: float = 0.05
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Pairs (y, z) in B_radius(e) with every rho_j >= guard * radius"""
    n = kernel.n
    ball = KoranyiBall.centered(n, radius)
    keptYX, keptYT, keptZX, keptZT = [], [], [], []
    total = 0
    batch = 0
    while total < count:
        yX, yT = integration.sampleBallArrays(ball, 2 * count, seed + 2 * batch)
        zX, zT = integration.sampleBallArrays(ball, 2 * count, seed + 2 * batch + 1)
        nearest = np.min(preimageDistances(kernel, yX, yT, zX, zT), axis=0)
        keep = nearest >= guard * radius
        keptYX.append(yX[keep])
        keptYT.append(yT[keep])
        keptZX.append(zX[keep])
        keptZT.append(zT[keep])
        total += int(np.sum(keep))
        batch += 1
    return (
        np.concatenate(keptYX)[:count],
        np.concatenate(keptYT)[:count],
        np.concatenate(keptZX)[:count],
        np.concatenate(keptZT)[:count],
    )


def _derivativeRatios(
    kernel: KernelSpec,
    index: MultiIndex,
    yX: np.ndarray,
    yT: np.ndarray,
    zX: np.ndarray,
    zT: np.ndarray,
    steps: np.ndarray,
    dspec: DerivativeSpec,
) -> np.ndarray:
    """|X^I K(y, .)(z)| / (K(y, z) (sum_j rho_j^-1)^d(I)); nan where differencing fails"""
    kernelValues = kernelArrays(kernel, yX, yT, zX, zT)
    scale = np.sum(1.0 / np.array(preimageDistances(kernel, yX, yT, zX, zT)), axis=0)

    def batchField(x, t):
        return kernelArrays(kernel, yX[:, None, :], yT[:, None], x, t)

    try:
        derivatives = calculus.higherDerivativeArrays(
            index, batchField, zX, zT, dspec, steps
        )
    except errors.DerivativeInstability:
        derivatives = np.full(len(zT), np.nan)
        for b in range(len(zT)):

            def pairField(x, t, b=b):
                return kernelArrays(kernel, yX[b], yT[b], x, t)

            try:
                derivatives[b] = calculus.higherDerivativeArrays(
                    index, pairField, zX[b : b + 1], zT[b : b + 1], dspec, steps[b : b + 1]
                )[0]
            except errors.DerivativeInstability:
                logger.debug("Skipping unstable pair %d for X^%s", b, tuple(index))
    return np.abs(derivatives) / (kernelValues * scale ** index.degree)


def kernelDerivativeBound(
    kernel: KernelSpec,
    N: int,
    yX: np.ndarray,
    yT: np.ndarray,
    zX: np.ndarray,
    zT: np.ndarray,
    dspec: DerivativeSpec = DerivativeSpec(),
) -> FittedConstantReport:
    """Fits C in |X^I_z K(y, z)| <= C K(y, z) (sum_j rho_j^-1)^d(I) for d(I) <= N

    Derivatives act on z.  The differencing step is 1e-3 min_j rho_j (or
    dspec.step), and pairs closer than 10 steps to a singular set are
    skipped.  The uncertainty is the change in the maximal ratio when the
    step is halved.
    """
    yX = np.atleast_2d(np.asarray(yX, dtype=float))
    yT = np.atleast_1d(np.asarray(yT, dtype=float))
    zX = np.atleast_2d(np.asarray(zX, dtype=float))
    zT = np.atleast_1d(np.asarray(zT, dtype=float))
    nearest = np.min(preimageDistances(kernel, yX, yT, zX, zT), axis=0)
    if dspec.step is None:
        baseSteps = constants.DEFAULT_DERIVATIVE_STEP * nearest
    else:
        baseSteps = np.full(len(zT), dspec.step)
    valid = np.isfinite(nearest) & (
        nearest >= constants.KERNEL_GUARD_FACTOR * baseSteps
    ) & (nearest > 0)
    skipped = int(np.sum(~valid))
    yX, yT, zX, zT, baseSteps = yX[valid], yT[valid], zX[valid], zT[valid], baseSteps[valid]

    best = 0.0
    bestAt = None
    byDegree = {}
    for index in MultiIndex.enumerate(kernel.n, N):
        steps = baseSteps * 2.0 ** max(index.length - 1, 0)
        ratios = _derivativeRatios(kernel, index, yX, yT, zX, zT, steps, dspec)
        finite = np.isfinite(ratios)
        if not np.any(finite):
            continue
        local = float(np.max(ratios[finite]))
        byDegree[index.degree] = max(byDegree.get(index.degree, 0.0), local)
        if local > best:
            best = local
            b = int(np.nanargmax(np.where(finite, ratios, -np.inf)))
            bestAt = (index, b, steps[b])

    uncertainty = 0.0
    if bestAt is not None:
        index, b, step = bestAt
        halved = _derivativeRatios(
            kernel, index, yX[b : b + 1], yT[b : b + 1], zX[b : b + 1], zT[b : b + 1],
            np.array([step / 2.0]), dspec,
        )[0]
        if math.isfinite(halved):
            uncertainty = abs(halved - best)
    return FittedConstantReport(best, uncertainty, int(len(zT)), skipped, byDegree)


def expandedBalls(
    kernel: KernelSpec, ball: KoranyiBall, N: int, beta: float
) -> List[KoranyiBall]:
    """B*_i = 2 beta^N gammaStar B_delta(A_i x0, r_i^-2 t0)"""
    gammaStar = separationConstants(kernel.radii).gammaStar
    factor = 2.0 * beta ** N * gammaStar
    centerX, centerT = ball.center.asArrays()
    return [
        KoranyiBall(
            GroupPoint.fromArrays(matrix @ centerX, centerT / (radius * radius)),
            factor * ball.radius,
        )
        for matrix, radius in zip(kernel.matrices, kernel.radii)
    ]


def farFieldAtomBound(
    kernel: KernelSpec,
    atom: Atom,
    p: ExponentFunction,
    N: int,
    samples: Sequence[GroupPoint],
    spec: IntegrationSpec = IntegrationSpec(),
    beta: float = constants.DEFAULT_TAYLOR_BETA,
    maximalRadii: Optional[Sequence[float]] = None,
) -> FittedConstantReport:
    """Fits C in |T a(z)| <= C (M_{alpha Q/(Q+N)} chi_B(w_k))^{(Q+N)/Q} / ||chi_B||_{p(.)}

    w_k = (A_k^-1 x, r_k^2 t) is the preimage of z closest to the center
    of the atom's ball.

    Raises:
        ArgumentError: a sample lies inside an expanded ball B*_i
    """
    n = kernel.n
    Q = group.homogeneousDimension(n)
    balls = expandedBalls(kernel, atom.ball, N, beta)
    for z in samples:
        if any(ball.contains(z) for ball in balls):
            raise errors.ArgumentError(f"Sample {z} lies inside an expanded ball")

    chiNorm = atom.chiNorm
    if chiNorm is None:
        chiNorm = varexp.luxemburgNorm(Field.indicator(atom.ball), p, spec)
    indicator = Field.indicator(atom.ball)
    order = kernel.alpha * Q / (Q + N)
    field = atom.asField(constants.FAR_FIELD_GRID_ORDER)

    ratios, uncertainties = [], []
    for z in samples:
        preimages = singularPreimages(kernel, z)
        k = int(
            np.argmin([group.koranyiDistance(point, atom.ball.center) for point in preimages])
        )
        value = applyT(kernel, field, z, spec, errorMode=_SILENT)
        maximal = fractionalMaximal(order, indicator, preimages[k], maximalRadii, spec)
        denominator = maximal ** ((Q + N) / Q) / chiNorm
        ratios.append(_ratio(value.value, denominator))
        uncertainties.append(value.error / denominator if denominator > 0 else 0.0)

    if not ratios:
        return FittedConstantReport(0.0, 0.0, 0, 0, {})
    b = int(np.argmax(ratios))
    return FittedConstantReport(ratios[b], uncertainties[b], len(ratios), 0, {})


def fitDecayExponent(
    kernel: KernelSpec,
    f: Field,
    direction: GroupPoint,
    radii: Sequence[float],
    spec: IntegrationSpec = IntegrationSpec(),
    center: Optional[GroupPoint] = None,
) -> DecayFit:
    """Log-log slope of |T f| along z_R = center . (R . direction / rho(direction))"""
    n = kernel.n
    center = GroupPoint.identity(n) if center is None else center
    norm = group.koranyiNorm(direction)
    if norm == 0:
        raise errors.ArgumentError("The ray direction must differ from e")
    unit = group.dilate(1.0 / norm, direction)

    values = []
    for radius in radii:
        z = group.mul(center, group.dilate(radius, unit))
        values.append(abs(applyT(kernel, f, z, spec, errorMode=_SILENT).value))
    radii = [float(radius) for radius in radii]
    kept = [(r, v) for r, v in zip(radii, values) if v > 0]
    if len(kept) < 3:
        raise errors.ArgumentError("Too few nonzero values to fit a decay exponent")
    slope, _intercept, slopeError = my_math.fitPowerLaw(
        [r for r, _ in kept], [v for _, v in kept]
    )
    return DecayFit(slope, slopeError, radii, values)


@functools.lru_cache(maxsize=32)
def _mollifierSeminorm(n: int, k: int) -> float:
    """max of |phi_k| and |X_i phi_k| over a fixed cloud in B_1(e)"""
    dictionary = BumpDictionary(n, k + 1)
    cloud = unitBallRule(n, 6)

    def element(x, t):
        return dictionary(x, t)[..., k]

    seminorm = float(np.max(np.abs(element(cloud.x, cloud.t))))
    for axis in range(1, 2 * n + 2):
        derivative = calculus.higherDerivativeArrays(
            MultiIndex.unit(n, axis), element, cloud.x, cloud.t
        )
        seminorm = max(seminorm, float(np.max(np.abs(derivative))))
    return seminorm


def grandMaximalProxy(
    f: Field,
    z: GroupPoint,
    dictionarySize: int = 8,
    scales: Optional[Sequence[float]] = None,
    spec: IntegrationSpec = IntegrationSpec(),
) -> float:
    """max_{k, s} |(f * phi_{k,s})(z)|, a lower bound of the grand maximal function

    phi_k are bump dictionary elements divided by an estimate of their first
    order seminorm, phi_{k,s}(w) = s^-Q phi_k(s^-1 . w).  Element k depends
    only on k, so enlarging the dictionary never lowers the value.
    """
    if not f.hasBoundedSupport:
        raise errors.ArgumentError("The proxy needs a bounded support")
    n = f.n
    Q = group.homogeneousDimension(n)
    if scales is None:
        base = min(ball.radius for ball in f.support)
        scales = [base * 2.0 ** k for k in range(-3, 4)]
    dictionary = BumpDictionary(n, dictionarySize)
    seminorms = np.array([_mollifierSeminorm(n, k) for k in range(dictionarySize)])

    rule, _companion = integration.supportRules(f, spec)
    weighted = rule.weights * f(rule.x, rule.t)
    zX, zT = z.asArrays()
    relX, relT = group.mulArrays(-rule.x, -rule.t, zX, zT)

    best = 0.0
    for s in scales:
        localX, localT = group.dilateArrays(1.0 / s, relX, relT)
        mollifiers = dictionary(localX, localT) / seminorms
        convolutions = s ** -Q * (weighted @ mollifiers)
        best = max(best, float(np.max(np.abs(convolutions))))
    return best


def distributionFunction(
    f: Field,
    levels: Sequence[float],
    region: KoranyiBall,
    count: int,
    seed: int,
    alpha: float = 0.0,
    spec: IntegrationSpec = IntegrationSpec(),
) -> List[float]:
    """|{z in region : M_alpha f(z) > lambda}| for each level, by Monte Carlo

    Centered balls only.
    """
    points = integration.sampleBall(region, count, seed)
    values = np.array(
        [fractionalMaximal(alpha, f, point, spec=spec, offCenterCount=0) for point in points]
    )
    volume = integration.ballVolume(region)
    return [volume * float(np.mean(values > level)) for level in levels]


def _outputRules(
    kernel: KernelSpec, f: Field, nodeBudget: int, farShells: int
) -> Tuple[QuadratureRule, List[QuadratureRule]]:
    """A grid on the ball carrying most of T f and grids on dyadic shells beyond it"""
    n = kernel.n
    imageRadius = f.supportRadius() * max(1.0, max(1.0 / radius for radius in kernel.radii))
    nearRadius = 2.0 * imageRadius
    near = integration.shellRule(
        n, 0.0, nearRadius, integration.gridOrders(n, nodeBudget)
    )
    shellOrders = integration.gridOrders(n, max(1, nodeBudget // 4))
    shells = [
        integration.shellRule(
            n, nearRadius * 2.0 ** k, nearRadius * 2.0 ** (k + 1), shellOrders
        )
        for k in range(farShells)
    ]
    return near, shells


def _evaluateT(
    kernel: KernelSpec,
    f: Field,
    rule: QuadratureRule,
    spec: IntegrationSpec,
    workers: Optional[int],
) -> np.ndarray:
    def evaluate(i):
        z = GroupPoint.fromArrays(rule.x[i], rule.t[i])
        return applyT(kernel, f, z, spec, errorMode=_SILENT).value

    with futures.ThreadPoolExecutor(max_workers=workers) as executor:
        return np.array(list(executor.map(evaluate, range(len(rule)))))


def _checkLebesgueExponent(kernel: KernelSpec, q0: float) -> None:
    Q = group.homogeneousDimension(kernel.n)
    if not q0 * (Q - kernel.alpha) > Q:
        raise errors.ArgumentError(
            f"T f is not in L^{q0}: need q0 (Q - alpha) > Q"
        )


class OperatorSamples(
    namedtuple("OperatorSamples", ["kernel", "rules", "values", "decayExponent"], defaults=(None,))
):
    """T f on the near grid (rules[0]) and on each far shell after it

    Beyond the last shell T f is continued with |T f| ~ rho^decay, where
    decay is decayExponent when given (atoms with vanishing moments decay
    faster) and alpha - Q otherwise.
    """

    @property
    def decay(self) -> float:
        if self.decayExponent is not None:
            return self.decayExponent
        return self.kernel.alpha - group.homogeneousDimension(self.kernel.n)

    def lebesgueNorm(self, q0: float) -> float:
        """||T f||_{L^q0} with the tail continuation"""
        if self.decayExponent is None:
            _checkLebesgueExponent(self.kernel, q0)
        Q = group.homogeneousDimension(self.kernel.n)
        pieces = [
            float(np.sum(rule.weights * np.abs(values) ** q0))
            for rule, values in zip(self.rules, self.values)
        ]
        total = sum(pieces)
        if len(pieces) > 1:
            ratio = 2.0 ** (self.decay * q0 + Q)
            if ratio >= 1.0:
                raise errors.ArgumentError(f"T f is not in L^{q0}: need q0 decay + Q < 0")
            total += pieces[-1] * ratio / (1.0 - ratio)
        return total ** (1.0 / q0)

    def _continuedWeights(self, exponents: np.ndarray):
        """(weights, tail): tail continues the last shell over all later dyadic shells"""
        rule = QuadratureRule.concatenate(self.rules)
        tail = np.zeros(len(rule))
        if len(self.rules) > 1:
            Q = group.homogeneousDimension(self.kernel.n)
            last = slice(len(rule) - len(self.rules[-1]), None)
            ratio = 2.0 ** (self.decay * exponents[last] + Q)
            if np.any(ratio >= 1.0):
                raise errors.ArgumentError(
                    "T f is not in L^{q(.)}: need q decay + Q < 0 on the last shell"
                )
            tail[last] = rule.weights[last] * ratio / (1.0 - ratio)
        return rule.weights, tail

    def luxemburgNorm(self, q: ExponentFunction) -> float:
        """||T f||_{L^{q(.)}}, the tail continued node by node"""
        rule = QuadratureRule.concatenate(self.rules)
        exponents = q(rule.x, rule.t)
        weights, tail = self._continuedWeights(exponents)
        return varexp.luxemburgNormOnRule(np.concatenate(self.values), exponents, weights + tail)

    def luxemburgTailShare(self, q: ExponentFunction) -> float:
        """The part of the modular at lambda = ||T f||_{q(.)} that the tail continuation adds"""
        rule = QuadratureRule.concatenate(self.rules)
        exponents = q(rule.x, rule.t)
        weights, tail = self._continuedWeights(exponents)
        values = np.abs(np.concatenate(self.values))
        norm = varexp.luxemburgNormOnRule(values, exponents, weights + tail)
        if norm == 0:
            return 0.0
        total = varexp.modularOnRule(values, exponents, weights + tail, norm)
        return varexp.modularOnRule(values, exponents, tail, norm) / total


def sampleOperator(
    kernel: KernelSpec,
    f: Field,
    spec: IntegrationSpec = IntegrationSpec(),
    nodeBudget: int = 256,
    farShells: int = 4,
    workers: Optional[int] = None,
    decayExponent: Optional[float] = None,
) -> OperatorSamples:
    """Evaluates T f on a grid over twice the image of the support and on
    `farShells` dyadic shells beyond it"""
    near, shells = _outputRules(kernel, f, nodeBudget, farShells)
    rules = [near] + shells
    values = [_evaluateT(kernel, f, rule, spec, workers) for rule in rules]
    return OperatorSamples(kernel, rules, values, decayExponent)


def operatorLebesgueNorm(
    kernel: KernelSpec,
    f: Field,
    q0: float,
    spec: IntegrationSpec = IntegrationSpec(),
    nodeBudget: int = 256,
    farShells: int = 4,
    workers: Optional[int] = None,
) -> float:
    """||T f||_{L^q0}

    Raises:
        ArgumentError: q0 (Q - alpha) <= Q, where T f need not be q0-integrable
    """
    _checkLebesgueExponent(kernel, q0)
    samples = sampleOperator(kernel, f, spec, nodeBudget, farShells, workers)
    return samples.lebesgueNorm(q0)


def operatorLuxemburgNorm(
    kernel: KernelSpec,
    f: Field,
    q: ExponentFunction,
    spec: IntegrationSpec = IntegrationSpec(),
    nodeBudget: int = 256,
    farShells: int = 4,
    workers: Optional[int] = None,
    decayExponent: Optional[float] = None,
) -> float:
    """||T f||_{L^{q(.)}}

    For an atom with moments vanishing up to degree N - 1 pass
    decayExponent = alpha - Q - N.
    """
    samples = sampleOperator(kernel, f, spec, nodeBudget, farShells, workers, decayExponent)
    return samples.luxemburgNorm(q)
