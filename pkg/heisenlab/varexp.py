"""
Variable exponent Lebesgue machinery: log-Holder checks, modulars,
Luxemburg norms, conjugate exponents and the A-quantity of ball families
"""

from concurrent import futures
from fractions import Fraction
import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from heisenlab import group
from heisenlab import integration
from heisenlab.data_classes.exponent import (
    BallFamily,
    BallTransform,
    ExponentFunction,
    RadialProfile,
)
from heisenlab.data_classes.field import Field
from heisenlab.data_classes.geometry import IntegrationSpec, KoranyiBall
from heisenlab.data_classes.quadrature_rule import QuadratureRule
from heisenlab.data_classes.reports import (
    LogHolderReport,
    PowerIdentityReport,
    RatioReport,
)
from heisenlab.utilities import constants
from heisenlab.utilities import errors
from heisenlab.utilities import my_math
from heisenlab.utilities import utils

logger = logging.getLogger(__name__)

_SYMMETRY_TOLERANCE = 1e-9


def _distanceBand(distance: float) -> int:
    """Index k of the dyadic band (2^-(k+2), 2^-(k+1)] below 1/2"""
    return max(0, int(math.floor(-math.log2(distance))) - 1)


def _bandUpperEdge(band: int) -> float:
    return 2.0 ** -(band + 1)


def checkLogHolder(
    p: ExponentFunction,
    sampleCount: int = 2000,
    seed: int = 0,
    regionRadius: float = 4.0,
    zoomPairs: int = 8,
) -> LogHolderReport:
    """Fits the local and at-infinity log-Holder constants of p by sampling

    Local: |p(a) - p(b)| <= C / (-log rho(a^-1 b)) for rho(a^-1 b) <= 1/2,
    fitted per dyadic distance band over random pairs.  The pairs with the
    largest differences are then zoomed: the path a -> b is halved repeatedly,
    keeping the half that carries more of the change, so a jump survives down
    to tiny distances and shows up as a growing constant.

    Infinity: |p(z) - p_inf| <= C_inf / log(e + rho(z)) on random singletons.

    Never raises; violations of the declared bounds are counted.
    """
    n = p.n
    rng = utils.makeRng(seed)
    minDistance = constants.LOG_HOLDER_MIN_DISTANCE
    maxDistance = constants.LOG_HOLDER_MAX_DISTANCE

    violations = 0

    def evaluate(x, t):
        nonlocal violations
        values = p(x, t)
        bad = (
            ~np.isfinite(values)
            | (values <= 0)
            | (values < p.pMinus - 1e-12)
            | (values > p.pPlus + 1e-12)
        )
        violations += int(np.count_nonzero(bad))
        return values

    byBand = {}

    def record(distances, differences):
        for distance, difference in zip(distances, differences):
            if distance <= 0 or distance > maxDistance:
                continue
            band = _distanceBand(max(distance, minDistance))
            constant = difference * -math.log(distance)
            byBand[band] = max(byBand.get(band, 0.0), constant)

    # Random pairs, log-uniform in distance
    aX, aT = integration.sampleBallArrays(
        KoranyiBall.centered(n, regionRadius), sampleCount, int(rng.integers(2 ** 62))
    )
    distances = np.exp(
        rng.uniform(math.log(minDistance), math.log(maxDistance), sampleCount)
    )
    omegaX, omegaT = integration.sampleSphere(n, sampleCount, rng)
    wX, wT = group.dilateArrays(distances, omegaX, omegaT)
    bX, bT = group.mulArrays(aX, aT, wX, wT)
    differences = np.abs(evaluate(aX, aT) - evaluate(bX, bT))
    record(group.koranyiNormArrays(wX, wT), differences)

    # Zoom into the coarse pairs with the largest differences
    coarse = distances > maxDistance / 4
    order = np.argsort(-np.where(coarse, differences, -1.0))[:zoomPairs]
    for index in order:
        if not coarse[index] or differences[index] == 0:
            continue
        startX, startT = aX[index], aT[index]
        endX, endT = bX[index], bT[index]
        for _ in range(constants.LOG_HOLDER_ZOOM_LEVELS):
            stepX, stepT = group.mulArrays(-startX, -startT, endX, endT)
            halfX, halfT = group.dilateArrays(0.5, stepX, stepT)
            midX, midT = group.mulArrays(startX, startT, halfX, halfT)
            values = evaluate(np.stack([startX, midX, endX]), np.array([startT, midT, endT]))
            if abs(values[0] - values[1]) >= abs(values[1] - values[2]):
                endX, endT = midX, midT
            else:
                startX, startT = midX, midT
            distance = float(group.koranyiDistanceArrays(startX, startT, endX, endT))
            difference = float(
                np.abs(evaluate(startX[None], np.array([startT])) - evaluate(endX[None], np.array([endT])))[0]
            )
            record([distance], [difference])
            if distance < minDistance:
                break

    # Singletons for the behaviour at infinity
    pInfinity = p.pInfinity
    farCount = max(sampleCount // 4, 16)
    radii = np.exp(rng.uniform(0.0, math.log(1e6), farCount))
    farX, farT = group.dilateArrays(radii, *integration.sampleSphere(n, farCount, rng))
    if pInfinity is None:
        farthestX, farthestT = group.dilateArrays(
            np.full(16, 1e12), *integration.sampleSphere(n, 16, rng)
        )
        pInfinity = float(np.mean(evaluate(farthestX, farthestT)))
    farValues = evaluate(farX, farT)
    cInfinity = float(
        np.max(
            np.abs(farValues - pInfinity) * np.log(math.e + group.koranyiNormArrays(farX, farT))
        )
    )

    cLocalByScale = {_bandUpperEdge(band): byBand[band] for band in sorted(byBand)}
    cLocal = max(byBand.values(), default=0.0)
    localDivergent = False
    if byBand:
        coarsest = byBand[min(byBand)]
        finest = byBand[max(byBand)]
        localDivergent = finest > 0 and finest > (
            constants.LOG_HOLDER_DIVERGENCE_FACTOR * coarsest
        )

    report = LogHolderReport(
        cLocal, cInfinity, violations, cLocalByScale, localDivergent, pInfinity
    )
    logger.debug("log-Holder report for %s: %s", p.name, report)
    return report


def checkProfileLogHolder(
    profile: RadialProfile, sampleCount: int = 2000, seed: int = 0
) -> LogHolderReport:
    """The same fit for a one dimensional profile r on [0, inf)"""
    rng = utils.makeRng(seed)
    span = 2.0 * max(profile.knots[-1], 1.0)
    s = rng.uniform(0.0, span, sampleCount)
    distances = np.exp(
        rng.uniform(
            math.log(constants.LOG_HOLDER_MIN_DISTANCE),
            math.log(constants.LOG_HOLDER_MAX_DISTANCE),
            sampleCount,
        )
    )
    differences = np.abs(profile(s + distances) - profile(s))
    constants_ = differences * -np.log(distances)

    byBand = {}
    for distance, constant in zip(distances, constants_):
        band = _distanceBand(distance)
        byBand[band] = max(byBand.get(band, 0.0), float(constant))

    far = np.exp(rng.uniform(0.0, math.log(1e6), sampleCount))
    cInfinity = float(
        np.max(np.abs(profile(far) - profile.limitAtInfinity) * np.log(math.e + far))
    )
    values = profile(np.concatenate([s, far]))
    violations = int(np.count_nonzero(values <= 0))
    return LogHolderReport(
        max(byBand.values(), default=0.0),
        cInfinity,
        violations,
        {_bandUpperEdge(band): byBand[band] for band in sorted(byBand)},
        False,
        profile.limitAtInfinity,
    )


def _supportRule(f: Field, spec: IntegrationSpec) -> QuadratureRule:
    rule, _companion = integration.supportRules(f, spec)
    return rule


def modularOnRule(
    absValues: np.ndarray, exponents: np.ndarray, weights: np.ndarray, lam: float
) -> float:
    with np.errstate(over="ignore", divide="ignore"):
        terms = np.where(absValues > 0, (absValues / lam) ** exponents, 0.0)
    return float(np.sum(weights * terms))


def modular(
    f: Field, p: ExponentFunction, lam: float, spec: IntegrationSpec = IntegrationSpec()
) -> float:
    """int |f / lam|^{p(z)} dz over the declared support (or with declared decay)

    Raises:
        NonIntegrableError: f has neither bounded support nor enough decay
    """
    if not lam > 0:
        raise errors.ArgumentError(f"lambda must be positive; got {lam}")

    if f.hasBoundedSupport:
        rule = _supportRule(f, spec)
        return modularOnRule(
            np.abs(f(rule.x, rule.t)), p(rule.x, rule.t), rule.weights, lam
        )

    Q = group.homogeneousDimension(f.n)
    if f.decayExponent is None or f.decayExponent * p.pMinus <= Q:
        decay = None if f.decayExponent is None else f.decayExponent * p.pMinus
        raise errors.NonIntegrableError(decay, Q)
    integrand = Field(
        lambda x, t: np.abs(f(x, t) / lam) ** p(x, t),
        f.n,
        decayExponent=f.decayExponent * p.pMinus,
    )
    region = integration.BallComplement([], integrand.decayExponent)
    return integration.haarIntegrate(integrand, region, spec).value


def luxemburgNormOnRule(
    values: np.ndarray, exponents: np.ndarray, weights: np.ndarray
) -> float:
    """inf {lam > 0 : sum_i w_i |v_i / lam|^{p_i} <= 1} by doubling/halving then Brent's method"""
    absValues = np.abs(np.asarray(values, dtype=float))
    exponents = np.asarray(exponents, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if not np.any((absValues > 0) & (weights > 0)):
        return 0.0

    def func(lam):
        return modularOnRule(absValues, exponents, weights, lam)

    start = float(np.max(absValues))
    lo, hi = my_math.bracketDecreasing(func, 1.0, start)
    return my_math.solveDecreasing(func, 1.0, lo, hi)


def luxemburgNorm(
    f: Field, p: ExponentFunction, spec: IntegrationSpec = IntegrationSpec()
) -> float:
    """||f||_{L^{p(.)}}

    Raises:
        BracketNotFound: if no lambda with modular <= 1 < modular is found
    """
    if f.hasBoundedSupport:
        rule = _supportRule(f, spec)
        return luxemburgNormOnRule(f(rule.x, rule.t), p(rule.x, rule.t), rule.weights)

    def func(lam):
        return modular(f, p, lam, spec)

    lo, hi = my_math.bracketDecreasing(func, 1.0)
    return my_math.solveDecreasing(func, 1.0, lo, hi)


def powerIdentityCheck(
    f: Field, p: ExponentFunction, s: float, spec: IntegrationSpec = IntegrationSpec()
) -> PowerIdentityReport:
    """Compares ||f||_{p(.)}^s with || |f|^s ||_{p(.)/s}"""
    lhs = luxemburgNorm(f, p, spec) ** s
    rhs = luxemburgNorm(f.absPower(s), p.divided(s), spec)
    difference = my_math.relativeDifference(lhs, rhs)
    threshold = 5 * constants.ROOT_RELATIVE_WIDTH * max(1.0, s)
    return PowerIdentityReport(difference <= threshold, lhs, rhs, difference, s)


def quasiTriangleCheck(
    f: Field, g: Field, p: ExponentFunction, spec: IntegrationSpec = IntegrationSpec()
) -> Tuple[bool, float, float]:
    """||f + g|| <= 2^{1/underline(p) - 1} (||f|| + ||g||)

    Returns (holds, lhs, rhs).
    """
    lhs = luxemburgNorm(f + g, p, spec)
    factor = 2.0 ** (1.0 / p.underlineP - 1.0)
    rhs = factor * (luxemburgNorm(f, p, spec) + luxemburgNorm(g, p, spec))
    slack = 1.0 + 4 * constants.ROOT_RELATIVE_WIDTH
    return lhs <= rhs * slack, lhs, rhs


def conjugateExponent(p: ExponentFunction, alpha: float) -> ExponentFunction:
    """q(.) with 1/q(.) = 1/p(.) - alpha/Q

    Raises:
        ExponentError: if pPlus >= Q/alpha, so q would be nonpositive somewhere
    """
    Q = group.homogeneousDimension(p.n)
    if not 0 <= alpha < Q:
        raise errors.ArgumentError(f"alpha must be in [0, {Q}); got {alpha}")
    if alpha == 0:
        return p
    if p.pPlus >= Q / alpha:
        raise errors.ExponentError(
            f"pPlus = {p.pPlus} must be below Q/alpha = {Q / alpha}"
        )

    def conjugate(value):
        return 1.0 / (1.0 / value - alpha / Q)

    pInfinity = None if p.pInfinity is None else conjugate(p.pInfinity)
    return ExponentFunction(
        lambda x, t: conjugate(p(x, t)),
        p.n,
        conjugate(p.pMinus),
        conjugate(p.pPlus),
        pInfinity,
        name=f"conjugate of {p.name} (alpha={alpha})",
    )


def indicatorNorms(
    balls: List[KoranyiBall],
    p: ExponentFunction,
    spec: IntegrationSpec = IntegrationSpec(),
    workers: Optional[int] = None,
) -> List[float]:
    """||chi_B||_{p(.)} for every ball, computed concurrently"""
    with futures.ThreadPoolExecutor(max_workers=workers) as executor:
        return list(
            executor.map(lambda ball: luxemburgNorm(Field.indicator(ball), p, spec), balls)
        )


def aQuantity(
    family: BallFamily, p: ExponentFunction, spec: IntegrationSpec = IntegrationSpec()
) -> float:
    """|| (sum_j (lam_j chi_{B_j} / ||chi_{B_j}||)^{p_} )^{1/p_} ||_{p(.)}, p_ = underline p"""
    active = [
        (ball, weight) for ball, weight in zip(family.balls, family.weights) if weight > 0
    ]
    if not active:
        return 0.0
    balls = [ball for ball, _ in active]
    weights = [weight for _, weight in active]
    norms = indicatorNorms(balls, p, spec)
    power = p.underlineP

    def evaluator(x, t):
        total = 0.0
        for ball, weight, norm in zip(balls, weights, norms):
            total = total + (weight * ball.containsArrays(x, t) / norm) ** power
        return total ** (1.0 / power)

    return luxemburgNorm(Field(evaluator, p.n, balls), p, spec)


def bStarComparison(
    family: BallFamily,
    p: ExponentFunction,
    transform: BallTransform,
    gamma: float,
    spec: IntegrationSpec = IntegrationSpec(),
) -> RatioReport:
    """A(family*) / A(family) for B*_j = B_{gamma delta_j}(T z_j)

    Raises:
        SymmetryViolation: p is not invariant under the transform
    """
    if gamma < 1:
        raise errors.ArgumentError(f"gamma must be >= 1; got {gamma}")
    defect = p.symmetryDefect(transform)
    if defect > _SYMMETRY_TOLERANCE:
        raise errors.SymmetryViolation(
            f"p changes by up to {defect} under the {transform.kind}"
        )

    original = aQuantity(family, p, spec)
    expanded = aQuantity(family.transformed(transform, gamma), p, spec)
    ratio = expanded / original if original > 0 else 0.0
    return RatioReport(ratio, expanded, original)


def hardyMomentDegree(p: ExponentFunction, n: int) -> int:
    """The least k >= 0 with (2n + k + 3) pMinus > 2n + 2

    pMinus is read as the nearest fraction with a small denominator so that
    boundary cases like 6/7 are decided exactly.
    """
    pMinus = Fraction(p.pMinus).limit_denominator(10 ** 6)
    k = 0
    while (2 * n + k + 3) * pMinus <= 2 * n + 2:
        k += 1
    return k
