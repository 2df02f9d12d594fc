"""
The experiment harness

Each experiment exercises one family of identities or inequalities with the
library's operations and hands back an ExperimentReport: one row per trial
or per check, the verdict of every pass/fail criterion, and the constants it
fitted along the way.  Every number an experiment compares against comes from
the configuration's "thresholds" block.

Trials are independent and run on a thread pool; trial i draws its
randomness from utils.makeRng(seed, i), so the rows of a run do not depend
on the worker count.
"""

from concurrent import futures
import logging
import math
import statistics
from typing import Callable, Dict, List, Sequence

import numpy as np

from heisenlab import atoms
from heisenlab import calculus
from heisenlab import group
from heisenlab import integration
from heisenlab import operators
from heisenlab import varexp
from heisenlab.data_classes.experiment import ExperimentConfig, ExperimentReport
from heisenlab.data_classes.exponent import (
    BallFamily,
    BallTransform,
    ExponentFunction,
)
from heisenlab.data_classes.field import Field
from heisenlab.data_classes.geometry import Dimension, KoranyiBall, RotationMatrix
from heisenlab.data_classes.kernel_spec import KernelSpec
from heisenlab.data_classes.multi_index import MultiIndex, PolynomialHG
from heisenlab.utilities import constants
from heisenlab.utilities import errors
from heisenlab.utilities import experiment_io
from heisenlab.utilities import my_math
from heisenlab.utilities import utils
from heisenlab.utilities.constants import Experiments, GroupPoint

logger = logging.getLogger(__name__)

CHECK_COLUMNS = ["criterion", "check", "samples", "measured", "threshold", "passed"]

DEFAULT_EXPONENT = {"kind": "radial", "knots": [0.0, 1.0, 4.0], "values": [0.9, 0.8, 0.7]}

# alpha = 0 kernels used when the configuration does not name one
DILATED_KERNELS = [{"radii": [1.0, 2.0]}, {"radii": [1.0, 1.5, 2.5]}]


def _rieszKernel(n: int) -> dict:
    return {"alpha": 1.0, "blockAngles": [[0.0] * n]}


def _rotatedKernel(n: int) -> dict:
    return {"alpha": 1.0, "blockAngles": [[0.0] * n, [math.pi / 2] * n]}


def _gaussian(x: np.ndarray, t: np.ndarray) -> np.ndarray:
    return np.exp(-np.sum(x * x, axis=-1) - t * t)


def _randomArrays(rng: np.random.Generator, count: int, n: int, scale: float = 2.0):
    x = rng.uniform(-scale, scale, (count, 2 * n))
    t = rng.uniform(-scale, scale, count)
    return x, t


def _randomPoint(rng: np.random.Generator, n: int, scale: float = 2.0) -> GroupPoint:
    x, t = _randomArrays(rng, 1, n, scale)
    return GroupPoint.fromArrays(x[0], t[0])


def _pointAtDistance(rng: np.random.Generator, n: int, low: float, high: float) -> GroupPoint:
    """A point with rho(z) drawn uniformly from [low, high]"""
    x, t = integration.sampleSphere(n, 1, rng)
    radius = rng.uniform(low, high)
    x, t = group.dilateArrays(radius, x, t)
    return GroupPoint.fromArrays(x[0], t[0])


def _deviation(first, second) -> float:
    return max(
        float(np.max(np.abs(first[0] - second[0]))),
        float(np.max(np.abs(first[1] - second[1]))),
    )


def _fieldCorpusMember(rng: np.random.Generator, n: int) -> Field:
    """A signed combination of one to three bumps near the identity"""
    field = None
    for _ in range(int(rng.integers(1, 4))):
        ball = KoranyiBall(_randomPoint(rng, n, 1.0), rng.uniform(0.25, 1.0))
        term = Field.bump(ball) * float(rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0))
        field = term if field is None else field + term
    return field


def _unitMeasureBall(n: int, center: GroupPoint) -> KoranyiBall:
    Q = group.homogeneousDimension(n)
    return KoranyiBall(center, integration.ballVolumeConstant(n) ** (-1.0 / Q))


def _mapTrials(
    config: ExperimentConfig,
    trial: Callable[[int, np.random.Generator], object],
    count: int,
) -> list:
    """trial(i, rng_i) for i < count, results in trial order"""

    def runOne(index):
        return trial(index, utils.makeRng(config.seed, index))

    with futures.ThreadPoolExecutor(max_workers=config.workers) as executor:
        return list(executor.map(runOne, range(count)))


def _check(
    report: ExperimentReport,
    criterion: str,
    description: str,
    value: float,
    threshold: float,
) -> bool:
    value = float(value)
    passed = value <= threshold
    report.addCriterion(criterion, description, passed, value, float(threshold))
    logger.info(
        "%s [%s]: %s (threshold %s) %s",
        criterion,
        description,
        my_math.numToStr(value),
        my_math.numToStr(threshold),
        "pass" if passed else "FAIL",
    )
    return passed


def _checkRow(
    report: ExperimentReport,
    criterion: str,
    description: str,
    samples: int,
    value: float,
    threshold: float,
) -> bool:
    passed = _check(report, criterion, description, value, threshold)
    report.addRow([criterion, description, int(samples), float(value), float(threshold), passed])
    return passed


def _relativeChange(first: float, second: float) -> float:
    scale = max(abs(first), abs(second))
    return 0.0 if scale == 0 else abs(first - second) / scale


def groupAxioms(config: ExperimentConfig) -> ExperimentReport:
    """Group law, inverse, dilations and rotations hold to rounding on random triples"""
    n = config.n
    count = config.sample("groupSamples")
    tolerance = config.threshold("exactIdentity")
    rng = utils.makeRng(config.seed)
    report = ExperimentReport(config, CHECK_COLUMNS)

    aX, aT = _randomArrays(rng, count, n)
    bX, bT = _randomArrays(rng, count, n)
    cX, cT = _randomArrays(rng, count, n)
    r = rng.uniform(0.5, 2.0, count)
    eX, eT = np.zeros_like(aX), np.zeros_like(aT)

    abX, abT = group.mulArrays(aX, aT, bX, bT)
    bcX, bcT = group.mulArrays(bX, bT, cX, cT)
    invX, invT = group.invArrays(aX, aT)

    measured = {}
    measured["associativity"] = _deviation(
        group.mulArrays(abX, abT, cX, cT), group.mulArrays(aX, aT, bcX, bcT)
    )
    measured["neutral element"] = max(
        _deviation(group.mulArrays(aX, aT, eX, eT), (aX, aT)),
        _deviation(group.mulArrays(eX, eT, aX, aT), (aX, aT)),
    )
    measured["inverse"] = max(
        _deviation(group.mulArrays(aX, aT, invX, invT), (eX, eT)),
        _deviation(group.mulArrays(invX, invT, aX, aT), (eX, eT)),
    )
    measured["inverse formula"] = _deviation((invX, invT), (-aX, -aT))
    measured["skewness of J"] = float(np.max(np.abs(group.symplecticPairing(aX, aX))))
    measured["antisymmetry of J"] = float(
        np.max(np.abs(group.symplecticPairing(aX, bX) + group.symplecticPairing(bX, aX)))
    )
    measured["dilation homomorphism"] = _deviation(
        group.dilateArrays(r, abX, abT),
        group.mulArrays(*group.dilateArrays(r, aX, aT), *group.dilateArrays(r, bX, bT)),
    )

    rotationError = 0.0
    for chunk in np.array_split(np.arange(count), 16):
        A = RotationMatrix.random(n, rng).matrix
        rotated = (group.rotateArrays(A, abX[chunk]), abT[chunk])
        product = group.mulArrays(
            group.rotateArrays(A, aX[chunk]), aT[chunk],
            group.rotateArrays(A, bX[chunk]), bT[chunk],
        )
        rotationError = max(rotationError, _deviation(rotated, product))
    measured["rotation homomorphism"] = rotationError

    for name, value in measured.items():
        _checkRow(report, "group-exactness", name, count, value, tolerance)
    return report


def koranyiProps(config: ExperimentConfig) -> ExperimentReport:
    """Norm properties of rho, the unit ball volume c0 and the scaling |B_r| = c0 r^Q"""
    n = config.n
    Q = group.homogeneousDimension(n)
    count = config.sample("groupSamples")
    tolerance = config.threshold("exactIdentity")
    rng = utils.makeRng(config.seed)
    report = ExperimentReport(config, CHECK_COLUMNS)

    aX, aT = _randomArrays(rng, count, n)
    bX, bT = _randomArrays(rng, count, n)
    r = rng.uniform(0.1, 10.0, count)
    rhoA = group.koranyiNormArrays(aX, aT)
    rhoB = group.koranyiNormArrays(bX, bT)
    rhoAB = group.koranyiNormArrays(*group.mulArrays(aX, aT, bX, bT))

    rotated = np.empty_like(aX)
    for chunk in np.array_split(np.arange(count), 16):
        rotated[chunk] = group.rotateArrays(RotationMatrix.random(n, rng).matrix, aX[chunk])

    measured = {
        "homogeneity": float(
            np.max(np.abs(group.koranyiNormArrays(*group.dilateArrays(r, aX, aT)) - r * rhoA) / (r * rhoA))
        ),
        "symmetry": float(np.max(np.abs(group.koranyiNormArrays(*group.invArrays(aX, aT)) - rhoA))),
        "rotation invariance": float(np.max(np.abs(group.koranyiNormArrays(rotated, aT) - rhoA))),
        "triangle inequality": float(np.max(np.clip(rhoAB - rhoA - rhoB, 0.0, None))),
        "reverse triangle inequality": float(
            np.max(np.clip(np.abs(rhoA - rhoB) - rhoAB, 0.0, None))
        ),
    }
    unitX = np.zeros(2 * n)
    unitX[0] = 1.0
    measured["rho examples"] = max(
        abs(group.koranyiNorm(GroupPoint(unitX, 0.0)) - 1.0),
        abs(group.koranyiNorm(GroupPoint(np.zeros(2 * n), 1.0)) - 2.0),
    )
    for name, value in measured.items():
        _checkRow(report, "koranyi-norm", name, count, value, tolerance)

    volumeTolerance = config.threshold("ballVolumeRelative")
    c0 = integration.ballVolumeConstant(n)
    quadrature = integration.unitBallVolume(Dimension(n))
    _checkRow(
        report,
        "ball-volume",
        "c0 by quadrature against the beta function form",
        0,
        my_math.relativeDifference(quadrature, c0),
        volumeTolerance,
    )
    if n == 1:
        _checkRow(
            report,
            "ball-volume",
            "c0 = pi^2 / 8 on H^1",
            0,
            my_math.relativeDifference(c0, math.pi ** 2 / 8.0),
            volumeTolerance,
        )
    _checkRow(
        report,
        "sphere-measure",
        "sigma = Q c0",
        0,
        my_math.relativeDifference(integration.sphereMeasure(Dimension(n)), Q * c0),
        volumeTolerance,
    )

    volumeSamples = config.sample("volumeSamples")
    radii = config.sample("volumeRadii")
    sigmas = config.threshold("monteCarloSigmas")
    estimate = integration.monteCarloBallVolume(KoranyiBall.centered(n, 1.0), volumeSamples, config.seed)
    _checkRow(
        report,
        "ball-volume-monte-carlo",
        "box hit-or-miss |B_1| in standard errors from c0",
        volumeSamples,
        abs(estimate.value - c0) / estimate.error if estimate.error > 0 else math.inf,
        sigmas,
    )

    volumes = []
    for i, radius in enumerate(radii):
        ball = KoranyiBall(_randomPoint(rng, n), radius)
        volumes.append(
            integration.monteCarloBallVolume(ball, volumeSamples, config.seed + i + 1).value
        )
    slope, intercept, slopeError = my_math.fitPowerLaw(radii, volumes)
    report.addConstant("volume exponent", slope, slopeError)
    report.addConstant("c0", math.exp(intercept), 0.0)
    _checkRow(
        report,
        "volume-exponent",
        f"|B_r| ~ r^Q with Q = {Q}",
        volumeSamples * len(radii),
        abs(slope - Q),
        config.threshold("volumeExponent"),
    )
    report.addPlot(
        "ball-volume",
        {
            "x": list(radii),
            "y": {"Monte Carlo": volumes, "c0 r^Q": [c0 * radius ** Q for radius in radii]},
            "xlabel": "r",
            "ylabel": "|B_r|",
            "log": True,
        },
    )
    return report


def calculusSuite(config: ExperimentConfig) -> ExperimentReport:
    """Degrees, monomials, vector fields, left Taylor polynomials and their remainders"""
    n = config.n
    dspec = config.derivativeSpec
    rng = utils.makeRng(config.seed)
    exact = config.threshold("exactIdentity")
    derivativeTolerance = config.threshold("derivativeRelative")
    report = ExperimentReport(config, CHECK_COLUMNS)
    identity = GroupPoint.identity(n)

    examples = [
        (MultiIndex.unit(n, 1), 1),
        (MultiIndex.unit(n, 2 * n + 1), 2),
        (MultiIndex.zero(n), 0),
        (MultiIndex([1] * (2 * n) + [1]), 2 * n + 2),
    ]
    mismatches = sum(
        calculus.homogeneousDegree(index) != degree for index, degree in examples
    )
    _checkRow(report, "homogeneous-degree", "d(I) on worked examples", len(examples), mismatches, 0)

    monomialError = 0.0
    indices = MultiIndex.enumerate(n, 4)
    for _ in range(200):
        index = indices[int(rng.integers(len(indices)))]
        z = _randomPoint(rng, n, 1.5)
        radius = rng.uniform(0.5, 2.0)
        scaled = calculus.monomialEval(index, group.dilate(radius, z))
        expected = radius ** index.degree * calculus.monomialEval(index, z)
        monomialError = max(monomialError, abs(scaled - expected) / max(1.0, abs(expected)))
    _checkRow(report, "monomial-homogeneity", "(r.z)^I = r^d(I) z^I", 200, monomialError, exact)

    cubic = PolynomialHG(
        n, {index: rng.standard_normal() for index in MultiIndex.enumerate(n, 3)}, 3
    )
    fieldError = 0.0
    for axis in range(1, 2 * n + 2):
        expectedField = calculus.applyVectorFieldExact(axis, cubic)
        for _ in range(5):
            z = _randomPoint(rng, n, 1.0)
            x, t = z.asArrays()
            expected = float(expectedField(x, t))
            value = calculus.vectorFieldApply(axis, cubic, z, dspec)
            fieldError = max(fieldError, abs(value - expected) / max(1.0, abs(expected)))
        z = _randomPoint(rng, n, 1.0)
        value = calculus.vectorFieldApply(axis, lambda x, t: t, z, dspec)
        if axis == 2 * n + 1:
            expected = 1.0
        elif axis <= n:
            expected = z.x[axis - 1 + n] / 2.0
        else:
            expected = -z.x[axis - 1 - n] / 2.0
        fieldError = max(fieldError, abs(value - expected))
    _checkRow(
        report,
        "vector-fields",
        "finite differences against the coordinate formulas",
        6 * (2 * n + 1),
        fieldError,
        derivativeTolerance,
    )

    quadratic = PolynomialHG(
        n, {index: rng.standard_normal() for index in MultiIndex.enumerate(n, 2)}, 2
    )
    taylor = calculus.leftTaylor(quadratic, identity, 2, dspec)
    coefficientError = max(
        abs(taylor.coefficient(index) - quadratic.coefficient(index))
        for index in MultiIndex.enumerate(n, 2)
    )
    _checkRow(
        report,
        "taylor-reproduction",
        "P_{e,2} of a degree 2 polynomial is the polynomial",
        1,
        coefficientError,
        config.threshold("polynomialCoefficient"),
    )

    gaussianTaylor = calculus.leftTaylor(_gaussian, identity, 2, dspec)
    projectorError = 0.0
    for index in MultiIndex.enumerate(n, 2):
        derivative = calculus.higherDerivative(index, _gaussian, identity, dspec)
        fromPolynomial = calculus.applyDerivativeExact(index, gaussianTaylor).constantTerm()
        projectorError = max(
            projectorError, abs(derivative - fromPolynomial) / max(1.0, abs(derivative))
        )
    _checkRow(
        report,
        "taylor-projector",
        "X^I (f - P) (e) = 0 for d(I) <= 2",
        len(MultiIndex.enumerate(n, 2)),
        projectorError,
        derivativeTolerance,
    )

    homogeneityError = 0.0
    lowIndices = [index for index in MultiIndex.enumerate(n, 2) if index.length > 0]
    for _ in range(20):
        index = lowIndices[int(rng.integers(len(lowIndices)))]
        z = _randomPoint(rng, n, 0.7)
        radius = float(rng.uniform(0.5, 2.0))

        def dilated(x, t, radius=radius):
            return _gaussian(*group.dilateArrays(radius, x, t))

        lhs = calculus.higherDerivative(index, dilated, z, dspec)
        rhs = radius ** index.degree * calculus.higherDerivative(
            index, _gaussian, group.dilate(radius, z), dspec
        )
        homogeneityError = max(homogeneityError, abs(lhs - rhs) / max(1.0, abs(rhs)))
    _checkRow(
        report,
        "derivative-homogeneity",
        "X^I (f o delta_r) = r^d(I) (X^I f) o delta_r",
        20,
        homogeneityError,
        derivativeTolerance,
    )

    moments = sum(
        calculus.interpolationMatrix(n, D).shape[0] != atoms.momentDimension(n, D)
        for D in range(4)
    )
    _checkRow(report, "moment-dimension", "one monomial per d(I) <= D", 4, moments, 0)

    taylorSamples = config.sample("taylorSamples")
    unitBall = KoranyiBall.centered(n, 1.0)
    points = integration.sampleBall(unitBall, 2 * taylorSamples, config.seed)
    small = calculus.taylorRemainderRatio(
        _gaussian, identity, 2, points[:taylorSamples], dspec, config.taylorBeta, seed=config.seed
    )
    large = calculus.taylorRemainderRatio(
        _gaussian, identity, 2, points, dspec, config.taylorBeta, seed=config.seed
    )
    report.addConstant("taylor remainder constant (N=2)", large.constant, abs(large.constant - small.constant))
    _checkRow(
        report,
        "taylor-remainder",
        "fitted remainder constant, change when the sample set doubles",
        2 * taylorSamples,
        _relativeChange(small.constant, large.constant) if math.isfinite(large.constant) else math.inf,
        config.threshold("stabilityRelative"),
    )
    return report


def _goldenRatioCase(config: ExperimentConfig) -> float:
    """||chi_E1 + chi_E2|| with |E1| = |E2| = 1, p = 1 on E1 and 2 on E2

    The modular is 1/lambda + 1/lambda^2, which equals 1 at the golden ratio.
    """
    n = config.n
    first = _unitMeasureBall(n, GroupPoint.identity(n))
    farX = np.zeros(2 * n)
    farX[0] = 10.0
    second = _unitMeasureBall(n, GroupPoint(farX, 0.0))
    p = ExponentFunction.piecewise([first, second], [1.0, 2.0], 2.0)
    f = Field.indicator(first) + Field.indicator(second)
    return varexp.luxemburgNorm(f, p, config.integrationSpec)


GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0


def luxemburgGolden(config: ExperimentConfig) -> ExperimentReport:
    """The two-exponent Luxemburg norm whose value is the golden ratio"""
    report = ExperimentReport(config, CHECK_COLUMNS)
    value = _goldenRatioCase(config)
    report.addConstant("golden ratio case", value, abs(value - GOLDEN_RATIO))
    _checkRow(
        report,
        "golden-ratio",
        "||chi_E1 + chi_E2|| with p = 1 on E1 and 2 on E2",
        1,
        abs(value - GOLDEN_RATIO),
        config.threshold("goldenRatio"),
    )
    return report


def _powerIdentityTrial(config: ExperimentConfig, index: int, rng: np.random.Generator):
    n = config.n
    balls = [KoranyiBall(_randomPoint(rng, n, 2.0), rng.uniform(0.3, 1.0)) for _ in range(2)]
    p = ExponentFunction.piecewise(
        balls, list(rng.uniform(0.5, 3.0, 2)), float(rng.uniform(0.5, 3.0))
    )
    f = Field.bump(balls[0]) * float(rng.uniform(0.5, 3.0)) + Field.indicator(balls[1]) * float(
        rng.uniform(0.5, 3.0)
    )
    s = p.underlineP if index % 2 == 0 else float(rng.uniform(0.5, 2.0))
    result = varexp.powerIdentityCheck(f, p, s, config.integrationSpec)
    threshold = (
        config.threshold("powerIdentityFactor")
        * constants.ROOT_RELATIVE_WIDTH
        * max(1.0, s)
    )
    return result.relativeDifference / threshold


def luxemburgSuite(config: ExperimentConfig) -> ExperimentReport:
    """Closed forms, homogeneity, the power identity, log-Holder fits and d_p"""
    n = config.n
    spec = config.integrationSpec
    rng = utils.makeRng(config.seed)
    report = ExperimentReport(config, CHECK_COLUMNS)
    closedForm = config.threshold("closedFormRelative")

    worst = 0.0
    checked = 0
    for p0 in [0.5] + list(config.sample("lpP0")):
        for radius in (0.5, 1.0, 2.0):
            ball = KoranyiBall(_randomPoint(rng, n), radius)
            value = varexp.luxemburgNorm(Field.indicator(ball), ExponentFunction.constant(p0, n), spec)
            expected = integration.ballVolume(ball) ** (1.0 / p0)
            worst = max(worst, my_math.relativeDifference(value, expected))
            checked += 1
    _checkRow(report, "closed-form", "||chi_B||_p0 = |B|^(1/p0)", checked, worst, closedForm)

    unitBall = _unitMeasureBall(n, GroupPoint.identity(n))
    twoEverywhere = ExponentFunction.constant(2.0, n)
    value = varexp.modular(Field.indicator(unitBall) * 3.0, twoEverywhere, 1.0, spec)
    _checkRow(report, "closed-form", "rho_2(3 chi_B) = 9 for |B| = 1", 1, abs(value - 9.0) / 9.0, closedForm)

    p = config.exponentFunction(DEFAULT_EXPONENT)
    f = _fieldCorpusMember(rng, n)
    norm = varexp.luxemburgNorm(f, p, spec)
    homogeneityError = 0.0
    for c in (-3.0, 0.25, 7.0):
        scaled = varexp.luxemburgNorm(f * c, p, spec)
        homogeneityError = max(homogeneityError, my_math.relativeDifference(scaled, abs(c) * norm))
    _checkRow(
        report,
        "homogeneity",
        "||c f|| = |c| ||f||",
        3,
        homogeneityError,
        10.0 * constants.ROOT_RELATIVE_WIDTH,
    )

    golden = _goldenRatioCase(config)
    _checkRow(
        report,
        "golden-ratio",
        "||chi_E1 + chi_E2|| with p = 1 on E1 and 2 on E2",
        1,
        abs(golden - GOLDEN_RATIO),
        config.threshold("goldenRatio"),
    )

    cases = config.sample("powerIdentityCases")
    ratios = _mapTrials(config, lambda i, trialRng: _powerIdentityTrial(config, i, trialRng), cases)
    _checkRow(
        report,
        "power-identity",
        "|| |f|^s ||_{p/s} = ||f||_p^s, difference over its tolerance",
        cases,
        max(ratios, default=0.0),
        1.0,
    )

    violations = 0
    for _ in range(10):
        g = _fieldCorpusMember(rng, n)
        holds, _lhs, _rhs = varexp.quasiTriangleCheck(f, g, p, spec)
        violations += not holds
    _checkRow(report, "quasi-triangle", "||f + g|| <= 2^(1/p-) (||f|| + ||g||)", 10, violations, 0)

    logHolderSamples = config.sample("logHolderSamples")
    constant = varexp.checkLogHolder(ExponentFunction.constant(1.5, n), logHolderSamples, config.seed)
    _checkRow(
        report,
        "log-holder",
        "constant exponent has zero constants",
        logHolderSamples,
        constant.cLocal + constant.cInfinity,
        0.0,
    )
    fitted = varexp.checkLogHolder(p, logHolderSamples, config.seed)
    report.addConstant("log-Holder local constant", fitted.cLocal, 0.0)
    report.addConstant("log-Holder constant at infinity", fitted.cInfinity, 0.0)
    _checkRow(
        report,
        "log-holder",
        f"{p.name} exponent is log-Holder",
        logHolderSamples,
        0.0 if fitted.isLogHolder else 1.0,
        0.0,
    )
    step = ExponentFunction(
        lambda x, t: np.where(x[..., 0] > 0, 2.0, 1.5), n, 1.5, 2.0, name="step"
    )
    jump = varexp.checkLogHolder(step, logHolderSamples, config.seed)
    _checkRow(
        report,
        "log-holder",
        "a jump is flagged as locally divergent",
        logHolderSamples,
        0.0 if jump.localDivergent else 1.0,
        0.0,
    )

    table = [(1, 1.0, 0), (1, 0.5, 4), (2, 6.0 / 7.0, 1)]
    mismatches = sum(
        varexp.hardyMomentDegree(ExponentFunction.constant(pMinus, dimension), dimension) != expected
        for dimension, pMinus, expected in table
    )
    _checkRow(report, "moment-degree", "d_p on worked examples", len(table), mismatches, 0)
    return report


ATOM_COLUMNS = [
    "trial",
    "D",
    "p0",
    "radius",
    "lpNorm",
    "sizeBound",
    "maxMomentResidual",
    "supportOk",
    "sizeOk",
    "momentsOk",
]


def atomSuite(config: ExperimentConfig) -> ExperimentReport:
    """Random atoms satisfy the support, size and moment conditions"""
    n = config.n
    spec = config.integrationSpec
    p = config.exponentFunction(DEFAULT_EXPONENT)
    degrees = config.sample("atomDegrees")
    exponents = config.sample("atomP0")
    count = config.sample("atomCount")
    report = ExperimentReport(config, ATOM_COLUMNS)

    def trial(index, rng):
        D = degrees[index // count]
        p0 = exponents[index % len(exponents)]
        ball = KoranyiBall(_randomPoint(rng, n), 2.0 ** rng.uniform(-2.0, 1.0))
        seed = int(rng.integers(2 ** 31))
        try:
            atom = atoms.makeAtom(ball, p, p0, D, seed, spec)
        except errors.AtomConstructionError as e:
            logger.warning("Trial %d: %s", index, e)
            return [index, D, p0, ball.radius, math.nan, math.nan, math.nan, False, False, False]
        result = atoms.verifyAtom(atom, spec.withSeed(spec.seed + 1))
        return [
            index,
            D,
            p0,
            ball.radius,
            result.lpNorm,
            result.sizeBound,
            result.maxMomentResidual,
            result.supportOk,
            result.sizeOk,
            result.momentsOk,
        ]

    for row in _mapTrials(config, trial, count * len(degrees)):
        report.addRow(row)

    passed = [all(row[-3:]) for row in report.rows]
    _check(
        report,
        "atom-conditions",
        "atoms failing support, size or moments",
        len(passed) - sum(passed),
        0,
    )
    residuals = [value for value in report.column("maxMomentResidual") if not math.isnan(value)]
    _check(
        report,
        "moment-residual",
        "largest scale-corrected moment",
        max(residuals, default=math.inf),
        config.threshold("momentResidual"),
    )

    rankDeficit = 0
    for D in degrees:
        dimension = atoms.momentDimension(n, D)
        dictionary = atoms.defaultDictionary(n, D)
        matrix = atoms.momentMatrix(dictionary, D)
        rankDeficit += dimension - int(np.linalg.matrix_rank(matrix))
    _check(report, "moment-rank", "rank deficit of the moment matrices", rankDeficit, 0)

    rng = utils.makeRng(config.seed, count * len(degrees))
    ball = KoranyiBall(_randomPoint(rng, n), 0.5)
    atom = atoms.makeAtom(ball, p, exponents[0], max(degrees), config.seed, spec)
    moved = atoms.translateAtom(atom, _randomPoint(rng, n), spec, p)
    stretched = atoms.dilateAtom(atom, 3.0, spec, p)
    failures = sum(
        not atoms.verifyAtom(candidate, spec, p).passed for candidate in (moved, stretched)
    )
    _check(report, "atom-transport", "translated or dilated atoms failing", failures, 0)

    counterexample = atoms.indicatorAtom(ball, p, exponents[0], 0, spec)
    _check(
        report,
        "indicator-counterexample",
        "a scaled indicator is rejected for its zeroth moment",
        1.0 if atoms.verifyAtom(counterexample, spec, p).momentsOk else 0.0,
        0,
    )
    return report


LP_COLUMNS = ["function", "dilation", "p0", "q0", "normF", "normTF", "ratio"]


def lpLqRatio(config: ExperimentConfig) -> ExperimentReport:
    """||T f||_q0 / ||f||_p0 with 1/q0 = 1/p0 - alpha/Q stays flat under dilation

    An alpha = 0 kernel is run with q0 = p0; the Riesz covariance check
    needs alpha > 0 and is skipped for it.
    """
    n = config.n
    Q = group.homogeneousDimension(n)
    kernel = config.kernelSpec(_rieszKernel(n))
    upper = math.inf if kernel.alpha == 0 else Q / kernel.alpha
    spec = config.integrationSpec
    operatorSpec = spec.withBudget(config.sample("operatorBudget"))
    dilations = config.sample("dilations")
    exponents = config.sample("lpP0")
    corpusSize = config.sample("corpusSize")
    report = ExperimentReport(config, LP_COLUMNS)

    for p0 in exponents:
        if not 1.0 < p0 < upper:
            raise errors.ConfigurationError(f"p0 = {p0} must lie in (1, Q/alpha)")

    def trial(index, rng):
        k, j = divmod(index, len(dilations))
        f = _fieldCorpusMember(utils.makeRng(config.seed, k), n).composedWithDilation(dilations[j])
        samples = operators.sampleOperator(
            kernel,
            f,
            operatorSpec,
            config.sample("nodeBudget"),
            config.sample("farShells"),
            workers=1,
        )
        rows = []
        for p0 in exponents:
            q0 = 1.0 / (1.0 / p0 - kernel.alpha / Q)
            normF = varexp.luxemburgNorm(f, ExponentFunction.constant(p0, n), spec)
            normTF = samples.lebesgueNorm(q0)
            rows.append([k, dilations[j], p0, q0, normF, normTF, normTF / normF])
        return rows

    for rows in _mapTrials(config, trial, corpusSize * len(dilations)):
        for row in rows:
            report.addRow(row)

    flatness = 0.0
    for p0 in exponents:
        ratios = [row[-1] for row in report.rows if row[2] == p0]
        report.addConstant(f"||T f||_q0 / ||f||_p0 at p0={p0}", max(ratios), max(ratios) - min(ratios))
        for k in range(corpusSize):
            perFunction = [row[-1] for row in report.rows if row[2] == p0 and row[0] == k]
            flatness = max(flatness, (max(perFunction) - min(perFunction)) / max(perFunction))
    _check(
        report,
        "lp-lq-flatness",
        "spread of the ratio across dilations",
        flatness,
        config.threshold("lpRatioFlatness"),
    )
    report.addPlot(
        "ratio-by-dilation",
        {
            "x": list(dilations),
            "y": {
                f"p0={p0}": [row[-1] for row in report.rows if row[2] == p0 and row[0] == 0]
                for p0 in exponents
            },
            "xlabel": "dilation r",
            "ylabel": "||T f_r||_q0 / ||f_r||_p0",
            "log": True,
        },
    )

    if kernel.alpha == 0:
        logger.info("Riesz covariance skipped for an alpha = 0 kernel")
        return report

    factor = config.threshold("covarianceErrorFactor")
    base = Field.bump(KoranyiBall.centered(n, 1.0))

    def covariance(index, rng):
        r = 2.0 ** rng.uniform(-1.0, 1.0)
        z = _randomPoint(rng, n, 1.5)
        lhs = operators.applyRiesz(
            kernel.alpha, base.composedWithDilation(r), z, spec,
            errorMode=constants.ErrorReportingMode.SILENCE,
        )
        rhs = operators.applyRiesz(
            kernel.alpha, base, group.dilate(r, z), spec,
            errorMode=constants.ErrorReportingMode.SILENCE,
        )
        violation = abs(lhs.value * r ** kernel.alpha - rhs.value)
        bound = factor * (lhs.error * r ** kernel.alpha + rhs.error) + 1e-12 * abs(rhs.value)
        return violation / bound if bound > 0 else (0.0 if violation == 0 else math.inf)

    offset = corpusSize * len(dilations)
    violations = _mapTrials(
        config,
        lambda i, _rng: covariance(i, utils.makeRng(config.seed, offset + i)),
        config.sample("covarianceSamples"),
    )
    _check(
        report,
        "riesz-dilation-covariance",
        "|I_a(f o delta_r)(z) r^a - I_a f(r z)| over its error bound",
        max(violations, default=0.0),
        1.0,
    )
    return report


def omegaGeometry(config: ExperimentConfig) -> ExperimentReport:
    """Separation of the singular preimages, the Omega partition and region-wise domination"""
    n = config.n
    spec = config.integrationSpec
    exact = config.threshold("exactIdentity")
    stability = config.threshold("stabilityRelative")
    rng = utils.makeRng(config.seed)
    report = ExperimentReport(config, CHECK_COLUMNS)

    documents = DILATED_KERNELS if config.document["kernel"] is None else [config.document["kernel"]]
    kernels = [KernelSpec.fromDict(document, n) for document in documents]
    if any(kernel.alpha != 0 for kernel in kernels):
        raise errors.ConfigurationError("omega-geometry needs an alpha = 0 kernel")

    separationSamples = config.sample("separationSamples")
    partitionSamples = config.sample("partitionSamples")
    for kernel in kernels:
        name = "r=(" + ",".join(my_math.numToStr(radius) for radius in kernel.radii) + ")"
        beta = operators.separationConstants(kernel.radii).beta
        x, t = _randomArrays(rng, separationSamples, n, 4.0)
        rhoZ = group.koranyiNormArrays(x, t)
        closedError = 0.0
        shortfall = 0.0
        for i in range(kernel.m):
            for j in range(i + 1, kernel.m):
                direct, closed = operators.pairSeparationArrays(kernel.radii[i], kernel.radii[j], x, t)
                closedError = max(closedError, float(np.max(np.abs(direct - closed) / np.maximum(1.0, closed))))
                shortfall = max(shortfall, float(np.max((beta * rhoZ - direct) / rhoZ)))
        _checkRow(report, "separation-closed-form", name, separationSamples, closedError, exact)
        _checkRow(report, "separation", f"{name}: beta rho(z) minus preimage distance", separationSamples, max(shortfall, 0.0), exact)

        zCount = max(1, int(math.isqrt(partitionSamples)))
        perPoint = max(1, partitionSamples // zCount)
        badLabels = 0
        overlaps = 0
        for _ in range(zCount):
            z = _pointAtDistance(rng, n, 0.25, 4.0)
            yX, yT = _randomArrays(rng, perPoint, n, 6.0)
            labels = operators.omegaLabelArrays(kernel, z, yX, yT)
            badLabels += int(np.count_nonzero((labels < 1) | (labels > kernel.m + 2)))
            zX, zT = z.asArrays()
            memberships = sum(
                group.koranyiDistanceArrays(yX, yT, radius * zX, radius * radius * zT)
                < beta / 2.0 * group.koranyiNorm(z)
                for radius in kernel.radii
            )
            overlaps += int(np.count_nonzero(memberships > 1))
        _checkRow(report, "partition", f"{name}: points without exactly one label", zCount * perPoint, badLabels + overlaps, 0)

        f = Field.bump(KoranyiBall.centered(n, 1.0))
        points = [_pointAtDistance(rng, n, 0.5, 2.0) for _ in range(config.sample("dominationPoints"))]

        def fittedRatios(integrationSpec):
            byLabel: Dict[int, float] = {}
            for z in points:
                for region in operators.omegaDomination(kernel, f, z, integrationSpec):
                    byLabel[region.label] = max(byLabel.get(region.label, 0.0), region.ratio)
            return byLabel

        base = fittedRatios(spec)
        doubled = fittedRatios(spec.withBudget(2 * spec.maxEvaluations))
        for label in sorted(base):
            report.addConstant(f"{name} Omega_{label} domination", doubled[label], abs(doubled[label] - base[label]))
            _checkRow(
                report,
                "domination-stability",
                f"{name} Omega_{label}: change under a doubled budget",
                len(points),
                _relativeChange(base[label], doubled[label]),
                stability,
            )

    if config.plot:
        f = Field.indicator(KoranyiBall.centered(n, 1.0))
        levels = my_math.geometricGrid(0.01, 1.0, 8)
        region = KoranyiBall.centered(n, 4.0)
        measures = operators.distributionFunction(f, levels, region, 64, config.seed, spec=spec)
        report.addPlot(
            "distribution",
            {
                "x": levels,
                "y": {"|{M f > lambda}|": measures, "|B_1| / lambda": [integration.ballVolume(KoranyiBall.centered(n, 1.0)) / level for level in levels]},
                "xlabel": "lambda",
                "ylabel": "measure",
                "log": True,
            },
        )
    return report


KERNEL_COLUMNS = [
    "kernel",
    "N",
    "pairs",
    "constant",
    "uncertainty",
    "skipped",
    "doubledConstant",
    "relativeChange",
]


def kernelDerivatives(config: ExperimentConfig) -> ExperimentReport:
    """Fitted constants of |X_z^I K(y, z)| / (K(y, z) (sum_j rho_j^-1)^d(I)) over random pairs

    The left invariant derivatives act on z; rho_j is the distance from z to
    the j-th singular preimage of y.
    """
    n = config.n
    dspec = config.derivativeSpec
    pairs = config.sample("kernelPairs")
    orders = config.sample("derivativeOrders")
    report = ExperimentReport(config, KERNEL_COLUMNS)

    if config.document["kernel"] is None:
        documents = [_rieszKernel(n), _rotatedKernel(n), DILATED_KERNELS[0]]
    else:
        documents = [config.document["kernel"]]
    kernels = [KernelSpec.fromDict(document, n) for document in documents]

    def trial(index, rng):
        kernelIndex, orderIndex = divmod(index, len(orders))
        kernel = kernels[kernelIndex]
        N = orders[orderIndex]
        yX, yT, zX, zT = operators.sampleKernelPairs(kernel, 2 * pairs, config.seed + kernelIndex)
        small = operators.kernelDerivativeBound(
            kernel, N, yX[:pairs], yT[:pairs], zX[:pairs], zT[:pairs], dspec
        )
        large = operators.kernelDerivativeBound(kernel, N, yX, yT, zX, zT, dspec)
        return kernel, N, small, large

    stability = config.threshold("stabilityRelative")
    worstIdentity = 0.0
    for kernel, N, small, large in _mapTrials(config, trial, len(kernels) * len(orders)):
        change = _relativeChange(small.constant, large.constant)
        report.addRow(
            [repr(kernel), N, 2 * pairs, small.constant, small.uncertainty, small.skipped, large.constant, change]
        )
        report.addConstant(f"{kernel!r} N={N}", large.constant, large.uncertainty)
        _check(report, "kernel-derivative-stability", f"{kernel!r} N={N}", change, stability)
        zeroth = large.byDegree.get(0, 1.0) if large.byDegree else 1.0
        worstIdentity = max(worstIdentity, abs(zeroth - 1.0))
    _check(
        report,
        "kernel-normalization",
        "the d(I) = 0 ratio |K| / K is 1",
        worstIdentity,
        config.threshold("exactIdentity"),
    )
    return report


UNIFORM_COLUMNS = ["trial", "scale", "radius", "centerNorm", "normTa", "lpNorm", "tailShare"]


def atomUniform(config: ExperimentConfig) -> ExperimentReport:
    """||T a||_q(.) stays uniformly bounded over atoms of every scale"""
    n = config.n
    Q = group.homogeneousDimension(n)
    spec = config.integrationSpec
    operatorSpec = spec.withBudget(config.sample("operatorBudget"))
    kernel = config.kernelSpec(_rotatedKernel(n))
    p = config.exponentFunction(DEFAULT_EXPONENT)
    report = ExperimentReport(config, UNIFORM_COLUMNS)

    if kernel.alpha > 0:
        transforms = [BallTransform.rotation(rotation) for rotation in kernel.rotations]
    else:
        transforms = [BallTransform.dilation(radius) for radius in kernel.radii]
    defect = max(p.symmetryDefect(transform, seed=config.seed) for transform in transforms)
    _check(report, "exponent-symmetry", "max |p(A z) - p(z)| over the kernel's maps", defect, config.threshold("exactIdentity"))

    try:
        q = varexp.conjugateExponent(p, kernel.alpha)
    except errors.ExponentError as e:
        raise errors.ConfigurationError(str(e)) from e
    D = varexp.hardyMomentDegree(p, n)
    scales = config.sample("radiusScales")

    def trial(index, rng):
        scale = index % scales
        ball = KoranyiBall(_randomPoint(rng, n), 2.0 ** (scale - 1))
        atom = atoms.makeAtom(ball, p, 2.0, D, int(rng.integers(2 ** 31)), spec)
        samples = operators.sampleOperator(
            kernel,
            atom.asField(),
            operatorSpec,
            config.sample("nodeBudget"),
            config.sample("farShells"),
            workers=1,
            decayExponent=kernel.alpha - Q - (D + 1),
        )
        normTa = samples.luxemburgNorm(q)
        share = samples.luxemburgTailShare(q)
        return [index, scale, ball.radius, group.koranyiNorm(ball.center), normTa, atom.lpNorm, share]

    for row in _mapTrials(config, trial, config.sample("uniformAtoms")):
        report.addRow(row)

    norms = report.column("normTa")
    median = statistics.median(norms)
    spread = max(norms) / median if median > 0 else math.inf
    report.addConstant("sup ||T a||_q", max(norms), max(norms) - min(norms))
    report.addConstant("largest tail share of the modular", max(report.column("tailShare")), 0.0)
    _check(report, "uniform-bound", "max / median of ||T a||_q over atoms", spread, config.threshold("uniformSpread"))
    report.addPlot(
        "norm-by-scale",
        {
            "x": list(range(scales)),
            "y": {
                "max": [max(row[4] for row in report.rows if row[1] == scale) for scale in range(scales)],
                "median": [
                    statistics.median(row[4] for row in report.rows if row[1] == scale)
                    for scale in range(scales)
                ],
            },
            "xlabel": "log2 radius + 1",
            "ylabel": "||T a||_q",
            "log": False,
        },
    )
    return report


DECAY_COLUMNS = ["case", "alpha", "m", "N", "radius", "absTa"]


def farFieldDecay(config: ExperimentConfig) -> ExperimentReport:
    """|T a(z)| ~ rho(z)^(alpha - Q - N) for atoms with moments up to N - 1"""
    n = config.n
    Q = group.homogeneousDimension(n)
    spec = config.integrationSpec
    p = config.exponentFunction(DEFAULT_EXPONENT)
    radii = config.sample("decayRadii")
    report = ExperimentReport(config, DECAY_COLUMNS)

    if config.document["kernel"] is None:
        cases = [
            (KernelSpec.fromDict(_rieszKernel(n), n), 2),
            (KernelSpec.fromDict(DILATED_KERNELS[0], n), 1),
        ]
    else:
        cases = [(config.kernelSpec({}), config.sample("decayOrder"))]

    rng = utils.makeRng(config.seed)
    unitBall = KoranyiBall.centered(n, 1.0)
    for caseIndex, (kernel, N) in enumerate(cases):
        atom = atoms.makeAtom(unitBall, p, 2.0, N - 1, config.seed + caseIndex, spec)
        directionX, directionT = integration.sampleSphere(n, 1, rng)
        direction = GroupPoint.fromArrays(directionX[0], directionT[0])
        field = atom.asField(constants.FAR_FIELD_GRID_ORDER)
        fit = operators.fitDecayExponent(kernel, field, direction, radii, spec)
        for radius, value in zip(fit.radii, fit.values):
            report.addRow([caseIndex, kernel.alpha, kernel.m, N, radius, abs(value)])

        target = kernel.alpha - Q - N
        report.addConstant(f"case {caseIndex} decay exponent", fit.exponent, fit.exponentError)
        _check(
            report,
            "decay-exponent",
            f"case {caseIndex}: fitted minus alpha - Q - N = {target}",
            abs(fit.exponent - target),
            config.threshold("decayExponent"),
        )

        expanded = operators.expandedBalls(kernel, unitBall, N, config.taylorBeta)
        samples = [
            point
            for point in (group.dilate(radius, direction) for radius in radii)
            if not any(ball.contains(point) for ball in expanded)
        ]
        if samples:
            bound = operators.farFieldAtomBound(kernel, atom, p, N, samples, spec, config.taylorBeta)
            report.addConstant(f"case {caseIndex} far-field constant", bound.constant, bound.uncertainty)

        zeroAtom = atom.withCoefficients(np.zeros(atom.dictionary.size))
        zeroField = zeroAtom.asField(constants.FAR_FIELD_GRID_ORDER)
        zeroValue = abs(operators.applyT(kernel, zeroField, group.dilate(radii[0], direction), spec).value)
        _check(report, "zero-atom", f"case {caseIndex}: |T 0|", zeroValue, 0.0)

        report.addPlot(
            f"decay-case-{caseIndex}",
            {
                "x": list(fit.radii),
                "y": {
                    "|T a|": [abs(value) for value in fit.values],
                    "fit": [
                        abs(fit.values[0]) * (radius / fit.radii[0]) ** fit.exponent
                        for radius in fit.radii
                    ],
                },
                "xlabel": "rho(z)",
                "ylabel": "|T a(z)|",
                "log": True,
            },
        )
    return report


FAMILY_COLUMNS = ["family", "balls", "ratio", "aFamily", "aExpanded"]


def aQuantitySuite(config: ExperimentConfig) -> ExperimentReport:
    """A({lambda_j}, {B_j}) against its expanded-ball counterpart under a symmetry of p"""
    n = config.n
    spec = config.integrationSpec
    p = config.exponentFunction(DEFAULT_EXPONENT)
    gamma = config.sample("familyGamma")
    familyCount = config.sample("familyCount")
    maxBalls = config.sample("familyMaxBalls")
    report = ExperimentReport(config, FAMILY_COLUMNS)

    def trial(index, rng):
        size = int(rng.integers(1, maxBalls + 1))
        balls = [KoranyiBall(_randomPoint(rng, n, 3.0), 2.0 ** rng.uniform(-2.0, 1.0)) for _ in range(size)]
        family = BallFamily(balls, list(rng.uniform(0.0, 1.0, size)))
        transform = BallTransform.rotation(RotationMatrix.random(n, rng))
        try:
            result = varexp.bStarComparison(family, p, transform, gamma, spec)
        except errors.SymmetryViolation as e:
            raise errors.ConfigurationError(f"The exponent is not rotation invariant: {e}") from e
        return [index, size, result.ratio, result.denominator, result.numerator]

    for row in _mapTrials(config, trial, 2 * familyCount):
        report.addRow(row)

    ratios = report.column("ratio")
    small = max(ratios[:familyCount])
    large = max(ratios)
    report.addConstant("sup A_expanded / A", large, large - small)
    _check(
        report,
        "a-quantity-stability",
        "change in the fitted constant when the corpus doubles",
        _relativeChange(small, large),
        config.threshold("stabilityRelative"),
    )
    _check(report, "a-quantity-finite", "the fitted constant is finite", 0.0 if math.isfinite(large) else 1.0, 0.0)

    closedForm = config.threshold("closedFormRelative")
    rng = utils.makeRng(config.seed, 2 * familyCount)
    single = BallFamily([KoranyiBall(_randomPoint(rng, n), 0.7)], [1.0])
    _check(report, "a-quantity-closed-form", "A of a single ball is 1", abs(varexp.aQuantity(single, p, spec) - 1.0), closedForm)

    p0 = 0.8
    weights = [0.5, 1.0, 2.0]
    balls = [KoranyiBall(GroupPoint([4.0 * k] + [0.0] * (2 * n - 1), 0.0), 1.0) for k in range(3)]
    value = varexp.aQuantity(BallFamily(balls, weights), ExponentFunction.constant(p0, n), spec)
    expected = sum(weight ** p0 for weight in weights) ** (1.0 / p0)
    _check(
        report,
        "a-quantity-closed-form",
        "disjoint balls, constant p0: (sum lambda^p0)^(1/p0)",
        my_math.relativeDifference(value, expected),
        closedForm,
    )
    unchanged = varexp.bStarComparison(single, p, BallTransform.identity(n), 1.0, spec)
    _check(report, "a-quantity-closed-form", "identity map with gamma = 1 gives ratio 1", abs(unchanged.ratio - 1.0), closedForm)
    return report


EXPERIMENTS: Dict[str, Callable[[ExperimentConfig], ExperimentReport]] = {
    Experiments.GROUP_AXIOMS: groupAxioms,
    Experiments.KORANYI_PROPS: koranyiProps,
    Experiments.CALCULUS_SUITE: calculusSuite,
    Experiments.LUXEMBURG_SUITE: luxemburgSuite,
    Experiments.LUXEMBURG_GOLDEN: luxemburgGolden,
    Experiments.ATOM_SUITE: atomSuite,
    Experiments.LP_LQ_RATIO: lpLqRatio,
    Experiments.OMEGA_GEOMETRY: omegaGeometry,
    Experiments.KERNEL_DERIVATIVES: kernelDerivatives,
    Experiments.ATOM_UNIFORM: atomUniform,
    Experiments.FAR_FIELD_DECAY: farFieldDecay,
    Experiments.A_QUANTITY_SUITE: aQuantitySuite,
}


def describe() -> List[Sequence[str]]:
    """(name, one line summary) for every registered experiment"""
    return [
        (name, (function.__doc__ or "").strip().splitlines()[0])
        for name, function in EXPERIMENTS.items()
    ]


def run(config: ExperimentConfig, write: bool = True) -> ExperimentReport:
    """Runs one experiment and, if `write`, stores its artifacts in config.outputDirectory

    Raises:
        UnknownExperiment: the experiment is not registered
    """
    if config.experiment not in EXPERIMENTS:
        raise errors.UnknownExperiment(config.experiment, list(EXPERIMENTS))
    logger.info(
        "Running %s (seed %d, config %s)",
        config.experiment,
        config.seed,
        config.configHash()[:12],
    )
    report = EXPERIMENTS[config.experiment](config)
    if write:
        for path in experiment_io.writeReport(report, config.outputDirectory, config.plot):
            logger.debug("Wrote %s", path)
    logger.info("%s %s", config.experiment, "passed" if report.passed else "FAILED")
    return report
