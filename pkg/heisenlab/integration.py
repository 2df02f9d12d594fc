"""
Haar measure integration on H^n

Everything is built on Koranyi polar coordinates about a center c:

    z = c . (rho sqrt(cos phi) xi, rho^2 sin(phi) / 4),   xi in S^{2n-1}
    dz = rho^{Q-1} cos^{n-1}(phi) / 4  d rho  d phi  d xi

so a ball or a shell around any point is a product domain.  Three engines
share this parametrisation: a product Gauss rule (grid-quadrature), plain
rejection sampling from a bounding box (monte-carlo) and equal-volume
Koranyi shells with exact polar sampling (stratified-mc).
"""

from collections import namedtuple
import functools
import logging
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate as scipy_integrate
from scipy import special
from scipy.stats import qmc

from heisenlab import group
from heisenlab.data_classes.field import Field
from heisenlab.data_classes.geometry import (
    Dimension,
    IntegrationResult,
    IntegrationSpec,
    KoranyiBall,
)
from heisenlab.data_classes.quadrature_rule import QuadratureRule
from heisenlab.utilities import constants
from heisenlab.utilities import errors
from heisenlab.utilities import utils
from heisenlab.utilities.constants import GroupPoint

logger = logging.getLogger(__name__)

GridOrders = namedtuple("GridOrders", ["radial", "polar", "directions"])


class BallComplement(namedtuple("BallComplement", ["balls", "decayExponent"])):
    """H^n minus a finite union of balls, for integrands with declared decay"""

    def __new__(cls, balls: Sequence[KoranyiBall], decayExponent: Optional[float]):
        return super(BallComplement, cls).__new__(cls, list(balls), decayExponent)


@functools.lru_cache(maxsize=None)
def ballVolumeConstant(n: int) -> float:
    """c_0 = |B_1(e)| = pi^n B(n/2, 3/2) / (4 Gamma(n))"""
    return math.pi ** n * special.beta(n / 2.0, 1.5) / (4.0 * special.gamma(n))


@functools.lru_cache(maxsize=None)
def unitBallVolume(
    dim: Dimension, spec: IntegrationSpec = IntegrationSpec()
) -> float:
    """c_0 = |B_1(e)|, by reduction to a one dimensional integral

    |{|x|^4 + 16 t^2 < 1}| = pi^n / (2 Gamma(n)) * int_0^1 u^{n-1} sqrt(1 - u^2) du

    Raises:
        IntegrationBudgetExceeded: if quadrature cannot reach spec.tolerance
            within spec.maxEvaluations subintervals
    """
    n = dim.n
    value, absError = scipy_integrate.quad(
        lambda u: u ** (n - 1) * math.sqrt(max(0.0, 1.0 - u * u)),
        0.0,
        1.0,
        limit=max(1, spec.maxEvaluations),
    )
    prefactor = math.pi ** n / (2.0 * special.gamma(n))
    if absError > spec.tolerance * abs(value):
        raise errors.IntegrationBudgetExceeded(
            f"Ball volume for n={n} has error {absError} > tolerance {spec.tolerance}"
        )

    return prefactor * value


def sphereMeasure(dim: Dimension) -> float:
    """sigma({rho = 1}) = Q c_0"""
    return dim.Q * ballVolumeConstant(dim.n)


def ballVolume(ball: KoranyiBall) -> float:
    n = ball.n
    return ballVolumeConstant(n) * ball.radius ** group.homogeneousDimension(n)


def shellVolume(n: int, inner: float, outer: float) -> float:
    Q = group.homogeneousDimension(n)
    return ballVolumeConstant(n) * (outer ** Q - inner ** Q)


def gridOrders(n: int, budget: int) -> GridOrders:
    """Orders of the polar product rule whose node count fits in the budget"""
    k = max(constants.MIN_GRID_ORDER, int((max(budget, 1) / 2.0) ** (1.0 / 3.0)))
    if n == 1:
        return GridOrders(k, k, 2 * k)
    directions = 2 ** max(1, int(round(math.log2(2 * k))))
    return GridOrders(k, k, directions)


def coarsenOrders(orders: GridOrders) -> GridOrders:
    def shrink(value):
        return max(2, int(math.ceil(2 * value / 3)))

    directions = orders.directions
    if directions & (directions - 1) == 0:
        directions = max(2, directions // 2)
    else:
        directions = shrink(directions)
    return GridOrders(shrink(orders.radial), shrink(orders.polar), directions)


@functools.lru_cache(maxsize=64)
def _sphereRule(n: int, polarOrder: int, directionCount: int, seed: int):
    nodes, nodeWeights = leggauss(polarOrder)
    phi = 0.5 * math.pi * nodes
    u = np.sin(phi)
    cosPhi = np.cos(phi)
    polarWeights = 0.5 * math.pi * nodeWeights * cosPhi ** (n - 1)

    if n == 1:
        theta = 2.0 * math.pi * (np.arange(directionCount) + 0.5) / directionCount
        directions = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        directionWeights = np.full(directionCount, 2.0 * math.pi / directionCount)
    else:
        sampler = qmc.Sobol(d=2 * n, scramble=True, seed=seed)
        uniform = sampler.random_base2(int(round(math.log2(directionCount))))
        directions = special.ndtri(np.clip(uniform, 1e-12, 1.0 - 1e-12))
        directions /= np.linalg.norm(directions, axis=-1, keepdims=True)
        surface = 2.0 * math.pi ** n / special.gamma(n)
        directionWeights = np.full(len(directions), surface / len(directions))

    x = np.sqrt(cosPhi)[:, None, None] * directions[None, :, :]
    t = np.broadcast_to((u / 4.0)[:, None], x.shape[:2])
    weights = 0.25 * polarWeights[:, None] * directionWeights[None, :]

    x = x.reshape(-1, 2 * n)
    t = np.ascontiguousarray(t).reshape(-1)
    weights = weights.reshape(-1)
    for array in (x, t, weights):
        array.setflags(write=False)
    return x, t, weights


def sphereRule(
    n: int, polarOrder: int, directionCount: int, seed: int = 0
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Nodes on the unit Koranyi sphere with weights summing to sigma"""
    return _sphereRule(n, polarOrder, directionCount, seed)


def sampleSphere(
    n: int, count: int, rng: np.random.Generator
) -> Tuple[np.ndarray, np.ndarray]:
    """Draws points of the unit Koranyi sphere distributed like the measure sigma"""
    u = 2.0 * rng.beta(n / 2.0, n / 2.0, size=count) - 1.0
    xi = rng.standard_normal((count, 2 * n))
    xi /= np.linalg.norm(xi, axis=-1, keepdims=True)
    cosPhi = np.sqrt(np.clip(1.0 - u * u, 0.0, None))
    return np.sqrt(cosPhi)[:, None] * xi, u / 4.0


def shellRule(
    n: int,
    inner: float,
    outer: float,
    orders: GridOrders,
    center: Optional[GroupPoint] = None,
    seed: int = 0,
) -> QuadratureRule:
    """Product Gauss rule on the shell inner <= rho(c^-1 z) < outer"""
    Q = group.homogeneousDimension(n)
    nodes, nodeWeights = leggauss(orders.radial)
    radii = inner + (outer - inner) * (nodes + 1.0) / 2.0
    radialWeights = (outer - inner) / 2.0 * nodeWeights * radii ** (Q - 1)

    omegaX, omegaT, omegaWeights = sphereRule(n, orders.polar, orders.directions, seed)
    x = radii[:, None, None] * omegaX[None, :, :]
    t = radii[:, None] ** 2 * omegaT[None, :]
    weights = radialWeights[:, None] * omegaWeights[None, :]

    rule = QuadratureRule(x.reshape(-1, 2 * n), t.reshape(-1), weights.reshape(-1))
    if center is not None:
        rule = rule.translated(center)
    return rule


def shellSampleRule(
    n: int,
    inner: float,
    outer: float,
    count: int,
    rng: np.random.Generator,
    center: Optional[GroupPoint] = None,
) -> QuadratureRule:
    """Uniform Haar samples in a Koranyi shell forming a single stratum"""
    Q = group.homogeneousDimension(n)
    count = max(2, count)
    radii = (inner ** Q + rng.uniform(size=count) * (outer ** Q - inner ** Q)) ** (
        1.0 / Q
    )
    omegaX, omegaT = sampleSphere(n, count, rng)
    x, t = group.dilateArrays(radii, omegaX, omegaT)
    weights = np.full(count, shellVolume(n, inner, outer) / count)

    rule = QuadratureRule(x, t, weights, np.zeros(count, dtype=int))
    if center is not None:
        rule = rule.translated(center)
    return rule


def sampleBallArrays(
    ball: KoranyiBall, count: int, seed: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Uniform samples by rejection from [-d, d]^{2n} x [-d^2/4, d^2/4] about the center"""
    if count < 1:
        raise errors.ArgumentError(f"count must be at least 1; got {count}")
    n = ball.n
    delta = ball.radius
    rng = np.random.default_rng(seed)

    acceptedX: List[np.ndarray] = []
    acceptedT: List[np.ndarray] = []
    remaining = count
    while remaining > 0:
        batch = max(64, int(2 * remaining))
        x = rng.uniform(-delta, delta, size=(batch, 2 * n))
        t = rng.uniform(-delta * delta / 4.0, delta * delta / 4.0, size=batch)
        inside = group.koranyiNormArrays(x, t) < delta
        acceptedX.append(x[inside][:remaining])
        acceptedT.append(t[inside][:remaining])
        remaining -= len(acceptedT[-1])

    centerX, centerT = ball.center.asArrays()
    return group.mulArrays(
        centerX, centerT, np.concatenate(acceptedX), np.concatenate(acceptedT)
    )


def sampleBall(ball: KoranyiBall, count: int, seed: int) -> List[GroupPoint]:
    x, t = sampleBallArrays(ball, count, seed)
    return [GroupPoint.fromArrays(xi, ti) for xi, ti in zip(x, t)]


def monteCarloBallVolume(ball: KoranyiBall, count: int, seed: int) -> IntegrationResult:
    """Box hit-or-miss estimate of |B|, independent of the closed form"""
    n = ball.n
    delta = ball.radius
    rng = np.random.default_rng(seed)
    x = rng.uniform(-delta, delta, size=(count, 2 * n))
    t = rng.uniform(-delta * delta / 4.0, delta * delta / 4.0, size=count)
    hits = group.koranyiNormArrays(x, t) < delta
    boxVolume = (2 * delta) ** (2 * n) * delta * delta / 2.0
    fraction = float(np.mean(hits))
    error = boxVolume * math.sqrt(max(fraction * (1 - fraction), 0.0) / count)
    return IntegrationResult(boxVolume * fraction, error, count)


def _stratifiedBallRule(
    n: int, outer: float, budget: int, seed: int, stream: int, inner: float = 0.0
) -> QuadratureRule:
    Q = group.homogeneousDimension(n)
    strata = constants.STRATA_COUNT
    perStratum = max(2, budget // strata)
    edges = [
        (inner ** Q + (outer ** Q - inner ** Q) * k / strata) ** (1.0 / Q)
        for k in range(strata + 1)
    ]
    rules = [
        shellSampleRule(
            n, edges[k], edges[k + 1], perStratum, utils.makeRng(seed, stream, k)
        )
        for k in range(strata)
    ]
    return QuadratureRule.concatenate(rules)


def _monteCarloBallRule(n: int, radius: float, budget: int, seed: int, stream: int):
    rng = utils.makeRng(seed, stream)
    localBall = KoranyiBall.centered(n, radius)
    x, t = sampleBallArrays(localBall, budget, int(rng.integers(0, 2 ** 62)))
    weights = np.full(budget, ballVolume(localBall) / budget)
    return QuadratureRule(x, t, weights, np.zeros(budget, dtype=int))


def shellRuleForSpec(
    n: int,
    inner: float,
    outer: float,
    spec: IntegrationSpec,
    budget: int,
    stream: int = 0,
) -> Tuple[QuadratureRule, Optional[QuadratureRule]]:
    """A rule on a shell about e, plus a coarser companion for grid error estimates"""
    if spec.method == constants.IntegrationMethods.GRID_QUADRATURE:
        orders = gridOrders(n, budget)
        return (
            shellRule(n, inner, outer, orders, seed=spec.seed),
            shellRule(n, inner, outer, coarsenOrders(orders), seed=spec.seed),
        )
    if spec.method == constants.IntegrationMethods.STRATIFIED_MC:
        return _stratifiedBallRule(n, outer, budget, spec.seed, stream, inner), None

    if inner == 0.0:
        return _monteCarloBallRule(n, outer, budget, spec.seed, stream), None
    rule = shellSampleRule(n, inner, outer, budget, utils.makeRng(spec.seed, stream))
    return rule, None


def ballRule(
    ball: KoranyiBall,
    spec: IntegrationSpec,
    budget: Optional[int] = None,
    stream: int = 0,
) -> Tuple[QuadratureRule, Optional[QuadratureRule]]:
    """A quadrature rule for the ball, plus a coarse companion for grid methods"""
    budget = spec.maxEvaluations if budget is None else budget
    rule, companion = shellRuleForSpec(ball.n, 0.0, ball.radius, spec, budget, stream)
    rule = rule.translated(ball.center)
    if companion is not None:
        companion = companion.translated(ball.center)
    return rule, companion


def multiplicityWeights(
    balls: Sequence[KoranyiBall], x: np.ndarray, t: np.ndarray
) -> np.ndarray:
    """1 / (number of balls containing each node), so overlaps are counted once"""
    counts = np.zeros(np.shape(t))
    for ball in balls:
        counts += ball.containsArrays(x, t)
    return np.where(counts > 0, 1.0 / np.maximum(counts, 1.0), 0.0)


def supportRules(
    field: Field, spec: IntegrationSpec, budget: Optional[int] = None
) -> Tuple[QuadratureRule, Optional[QuadratureRule]]:
    """A rule covering the declared support of a field

    A field carrying its own rule is integrated with it.  Otherwise each
    support ball gets its own rule, reweighted so overlaps count once.
    """
    if field.support is None:
        raise errors.ArgumentError("The field has no declared bounded support")
    if field.rule is not None:
        return field.rule, None

    budget = spec.maxEvaluations if budget is None else budget
    perBall = max(1, budget // len(field.support))
    rules, companions = [], []
    for i, ball in enumerate(field.support):
        rule, companion = ballRule(ball, spec, perBall, stream=i)
        rules.append(rule)
        companions.append(companion)

    def merge(parts):
        merged = QuadratureRule.concatenate(parts)
        if len(field.support) > 1:
            merged = merged.reweighted(
                multiplicityWeights(field.support, merged.x, merged.t)
            )
        return merged

    companion = None
    if all(part is not None for part in companions):
        companion = merge(companions)
    return merge(rules), companion


def estimateOnRules(
    func: Callable[[np.ndarray, np.ndarray], np.ndarray],
    rule: QuadratureRule,
    companion: Optional[QuadratureRule] = None,
) -> IntegrationResult:
    value, error = rule.estimate(func(rule.x, rule.t))
    evaluations = len(rule)
    if companion is not None:
        coarse, _ = companion.estimate(func(companion.x, companion.t))
        error = abs(value - coarse)
        evaluations += len(companion)
    return IntegrationResult(value, error, evaluations)


def _integrateTail(
    f: Field, radius: float, decayExponent: float, spec: IntegrationSpec
) -> IntegrationResult:
    n = f.n
    Q = group.homogeneousDimension(n)
    orders = gridOrders(n, max(spec.maxEvaluations // 50, 16))
    omegaX, omegaT, omegaWeights = sphereRule(n, orders.polar, orders.directions)

    def radialIntegrand(rho):
        x, t = group.dilateArrays(rho, omegaX, omegaT)
        return rho ** (Q - 1) * float(np.sum(omegaWeights * f(x, t)))

    value, absError, info = scipy_integrate.quad(
        radialIntegrand, radius, np.inf, limit=200, full_output=True
    )[:3]
    return IntegrationResult(value, absError, info["neval"] * len(omegaWeights))


def _integrateComplement(
    f: Field, region: BallComplement, spec: IntegrationSpec
) -> IntegrationResult:
    n = f.n
    Q = group.homogeneousDimension(n)
    if region.decayExponent is None or region.decayExponent <= Q:
        raise errors.NonIntegrableError(region.decayExponent, Q)

    reach = max(
        [group.koranyiNorm(ball.center) + ball.radius for ball in region.balls],
        default=0.5,
    )
    coreRadius = 2.0 * reach

    def coreIntegrand(x, t):
        outside = multiplicityWeights(region.balls, x, t) == 0
        return np.where(outside, f(x, t), 0.0)

    # Dyadic shells about e; a single centered ball is then aligned with a shell edge
    shells = constants.COMPLEMENT_CORE_SHELLS
    edges = [0.0] + [coreRadius / 2 ** k for k in range(shells - 1, -1, -1)]
    perShell = max(16, spec.maxEvaluations // shells)
    total = IntegrationResult(0.0, 0.0, 0)
    variance = 0.0
    for k, (inner, outer) in enumerate(zip(edges[:-1], edges[1:])):
        rule, companion = shellRuleForSpec(n, inner, outer, spec, perShell, stream=k)
        part = estimateOnRules(coreIntegrand, rule, companion)
        if spec.isMonteCarlo:
            variance += part.error ** 2
            part = IntegrationResult(part.value, 0.0, part.evaluations)
        total = total + part
    if spec.isMonteCarlo:
        total = IntegrationResult(total.value, math.sqrt(variance), total.evaluations)

    return total + _integrateTail(f, coreRadius, region.decayExponent, spec)


def haarIntegrate(
    f: Field,
    region=None,
    spec: IntegrationSpec = IntegrationSpec(),
    errorMode: str = constants.ErrorReportingMode.WARNING,
) -> IntegrationResult:
    """Integrates f against Haar measure over a region

    Args:
        f: the integrand
        region: a KoranyiBall, a BallComplement, or None for the declared
            support of f
        spec: engine, tolerance, budget and seed
        errorMode: what to do when the error estimate exceeds the tolerance;
            one of "silence", "warning", "error"

    Returns:
        IntegrationResult with the estimate and its error

    Raises:
        NonIntegrableError: the complement of a ball union with a declared
            decay exponent that does not exceed Q
        IntegrationBudgetExceeded: in "error" mode, if the tolerance is not met
    """
    errorReporter = utils.getErrorReporter(errorMode)

    if region is None:
        result = estimateOnRules(f, *supportRules(f, spec))
    elif isinstance(region, KoranyiBall):
        rule, companion = ballRule(region, spec)
        result = estimateOnRules(f, rule, companion)
    elif isinstance(region, BallComplement):
        result = _integrateComplement(f, region, spec)
    else:
        raise errors.ArgumentError(f"Unsupported integration region: {region!r}")

    if result.error > spec.tolerance * abs(result.value) and result.error > 1e-300:
        errorReporter(
            errors.IntegrationBudgetExceeded,
            f"Integral {result.value} has error {result.error}, above relative "
            f"tolerance {spec.tolerance} after {result.evaluations} evaluations",
        )
    logger.debug(
        "haarIntegrate: value=%s error=%s evaluations=%s",
        result.value,
        result.error,
        result.evaluations,
    )
    return result
