"""
Construction and verification of (p(.), p0, D)-atoms

An atom supported in B = B_delta(c) is written in the local coordinates
w = delta^-1 . (c^-1 z) as a combination of bump dictionary elements.  The
dictionary elements are polynomials inside their ball, so the moment map
has a closed form in Beta functions and never depends on a quadrature rule.
Vanishing local moments up to degree D are equivalent to vanishing global
ones, since translations and dilations preserve the homogeneous degree of
polynomials.
"""

import functools
import logging
import math
from typing import Optional

import numpy as np
from scipy import linalg
from scipy import special

from heisenlab import group
from heisenlab import integration
from heisenlab import varexp
from heisenlab.data_classes.atom import Atom, BumpDictionary
from heisenlab.data_classes.exponent import ExponentFunction
from heisenlab.data_classes.field import Field
from heisenlab.data_classes.geometry import IntegrationSpec, KoranyiBall
from heisenlab.data_classes.multi_index import MultiIndex, monomialArrays
from heisenlab.data_classes.quadrature_rule import QuadratureRule
from heisenlab.data_classes.reports import AtomReport
from heisenlab.utilities import constants
from heisenlab.utilities import errors
from heisenlab.utilities import utils
from heisenlab.utilities.constants import GroupPoint

logger = logging.getLogger(__name__)

_SUPPORT_PROBES = 512


def momentDimension(n: int, D: int) -> int:
    """The number of multiindices I with d(I) <= D"""
    if D < 0:
        raise errors.ArgumentError(f"D must be >= 0; got {D}")
    return len(MultiIndex.enumerate(n, D))


def defaultDictionary(
    n: int, D: int, size: Optional[int] = None, supportFactor: float = 1.0
) -> BumpDictionary:
    """4 moment_dimension(n, D) elements, monomials up to degree max(D, 1)"""
    if size is None:
        size = constants.DICTIONARY_SIZE_FACTOR * momentDimension(n, D)
    return BumpDictionary(n, size, supportFactor, degree=max(D, 1))


@functools.lru_cache(maxsize=None)
def sphereMonomialIntegral(index: MultiIndex) -> float:
    """int over the unit Koranyi sphere of w^I d sigma

    With w = (sqrt(cos phi) xi, sin(phi) / 4) and d sigma = cos^{n-1}(phi) / 4 dphi dxi,
    the xi integral is the Gaussian moment formula on S^{2n-1} and the phi
    integral a Beta function.  Odd powers integrate to zero.
    """
    n = index.n
    powers = index[:-1]
    tPower = index[-1]
    if any(power % 2 for power in powers) or tPower % 2:
        return 0.0
    xDegree = sum(powers)
    directional = 2.0 * math.exp(
        sum(special.gammaln((power + 1) / 2.0) for power in powers)
        - special.gammaln((xDegree + 2 * n) / 2.0)
    )
    polar = special.beta((n + xDegree / 2.0) / 2.0, (tPower + 1) / 2.0)
    return 0.25 * 4.0 ** -tPower * polar * directional


def _radialProfileIntegral(power: int, exponent: int) -> float:
    """int_0^1 (1 - r^4)^power r^{exponent - 1} dr; power 0 is the flat profile"""
    if power == 0:
        return 1.0 / exponent
    return 0.25 * special.beta(exponent / 4.0, power + 1)


def momentMatrix(dictionary: BumpDictionary, D: int) -> np.ndarray:
    """M[I, k] = int phi_k(w) w^I dw, in closed form

    For phi_k = (1 - rho^4 / sigma^4)_+^K w^J the substitution w = sigma . v
    splits the integral into a radial Beta integral and a sphere moment.
    """
    n = dictionary.n
    Q = group.homogeneousDimension(n)
    sigma = dictionary.supportFactor
    rows = []
    for index in MultiIndex.enumerate(n, D):
        row = []
        for power, element in zip(dictionary.powers, dictionary.monomials):
            combined = index + element
            sphere = sphereMonomialIntegral(combined)
            if sphere == 0.0:
                row.append(0.0)
                continue
            exponent = Q + combined.degree
            row.append(sigma ** exponent * _radialProfileIntegral(power, exponent) * sphere)
        rows.append(row)
    return np.array(rows)


def quadratureMomentMatrix(dictionary: BumpDictionary, D: int, rule: QuadratureRule) -> np.ndarray:
    """The moment map of the dictionary estimated on a local rule"""
    values = dictionary(rule.x, rule.t)
    return np.array(
        [
            (rule.weights * monomialArrays(index, rule.x, rule.t)) @ values
            for index in MultiIndex.enumerate(dictionary.n, D)
        ]
    )


def projectOntoMomentKernel(
    coefficients: np.ndarray, dictionary: BumpDictionary, D: int
) -> np.ndarray:
    """Orthogonal projection onto {c : M c = 0}"""
    basis = linalg.null_space(momentMatrix(dictionary, D))
    return basis @ (basis.T @ coefficients)


def _lpNormOnRule(atom: Atom, p0: float) -> float:
    rule = atom.rule()
    values = np.abs(atom.localValues())
    return float(np.sum(rule.weights * values ** p0)) ** (1.0 / p0)


def _sizeBound(
    ball: KoranyiBall, p: ExponentFunction, spec: IntegrationSpec, p0: float
):
    """(|B|^{1/p0} / ||chi_B||_{p(.)}, ||chi_B||_{p(.)})"""
    chiNorm = varexp.luxemburgNorm(Field.indicator(ball), p, spec)
    return integration.ballVolume(ball) ** (1.0 / p0) / chiNorm, chiNorm


def makeAtom(
    ball: KoranyiBall,
    p: ExponentFunction,
    p0: float,
    D: int,
    seed: int,
    spec: IntegrationSpec = IntegrationSpec(),
    dictionarySize: Optional[int] = None,
    supportFactor: float = 1.0,
) -> Atom:
    """Draws a random atom with vanishing moments up to degree D

    Random dictionary coefficients are projected onto the kernel of the
    moment map and rescaled so ||a||_{p0} is 0.99 of the size bound
    |B|^{1/p0} / ||chi_B||_{p(.)}.

    Raises:
        ArgumentError: the dictionary is not larger than the moment dimension
        AtomConstructionError: every retry projected to zero
    """
    if not p0 > 1:
        raise errors.ArgumentError(f"p0 must exceed 1; got {p0}")
    if p.n != ball.n:
        raise errors.DimensionMismatch(p.n, ball.n)
    n = ball.n
    dimension = momentDimension(n, D)
    size = constants.DICTIONARY_SIZE_FACTOR * dimension
    if dictionarySize is not None:
        size = dictionarySize
    if size <= dimension:
        raise errors.ArgumentError(
            f"Dictionary size {size} must exceed the moment dimension {dimension}"
        )

    dictionary = defaultDictionary(n, D, size, supportFactor)
    order = constants.ATOM_GRID_ORDER
    basis = linalg.null_space(momentMatrix(dictionary, D))

    for attempt in range(constants.ATOM_MAX_RETRIES):
        draw = utils.makeRng(seed, 0, attempt).standard_normal(size)
        coefficients = basis @ (basis.T @ draw)
        if np.linalg.norm(coefficients) > constants.MOMENT_TOLERANCE * np.linalg.norm(
            draw
        ):
            break
        logger.debug("Moment projection collapsed on attempt %d", attempt)
    else:
        raise errors.AtomConstructionError(
            f"Moment projection collapsed {constants.ATOM_MAX_RETRIES} times "
            f"(n={n}, D={D}, seed={seed})"
        )

    atom = Atom(ball, p0, D, dictionary, coefficients, p, gridOrder=order)
    bound, chiNorm = _sizeBound(ball, p, spec, p0)
    lpNorm = _lpNormOnRule(atom, p0)
    coefficients = coefficients * (constants.ATOM_SIZE_SLACK * bound / lpNorm)
    return Atom(
        ball,
        p0,
        D,
        dictionary,
        coefficients,
        p,
        lpNorm=constants.ATOM_SIZE_SLACK * bound,
        chiNorm=chiNorm,
        gridOrder=order,
    )


def _supportProbe(atom: Atom, seed: int) -> bool:
    """True if the atom vanishes on samples of B_{2 delta}(c) outside B"""
    x, t = integration.sampleBallArrays(atom.ball.scaled(2.0), _SUPPORT_PROBES, seed)
    outside = ~atom.ball.containsArrays(x, t)
    return bool(np.all(atom(x[outside], t[outside]) == 0.0))


def _localL1Norm(atom: Atom) -> float:
    local = atom.localRule()
    return float(np.sum(local.weights * np.abs(atom.localValues())))


def momentResiduals(atom: Atom) -> dict:
    """|int a w^I dw| / ||a||_1 over the local coordinates, for every d(I) <= D

    Equal to |int a z^I| / (||a||_1 delta^d(I)) on balls centered at e.
    """
    moments = momentMatrix(atom.dictionary, atom.D) @ atom.coefficients
    l1Norm = _localL1Norm(atom)
    indices = MultiIndex.enumerate(atom.n, atom.D)
    return {
        index: abs(float(moment)) / l1Norm if l1Norm > 0 else 0.0
        for index, moment in zip(indices, moments)
    }


def quadratureMomentResiduals(atom: Atom, rule: QuadratureRule) -> dict:
    """|int a z^I| / (||a||_1 delta^d(I)) on a rule of the caller's choosing

    The rule must cover the support of the atom; moments are global.
    """
    values = atom(rule.x, rule.t)
    l1Norm = float(np.sum(rule.weights * np.abs(values)))
    residuals = {}
    for index in MultiIndex.enumerate(atom.n, atom.D):
        moment = float(np.sum(rule.weights * values * monomialArrays(index, rule.x, rule.t)))
        scale = l1Norm * atom.ball.radius ** index.degree
        residuals[index] = abs(moment) / scale if scale > 0 else 0.0
    return residuals


def sampledMomentSigmas(atom: Atom, count: int, seed: int) -> float:
    """max_I |int a w^I dw| in standard errors of a Monte Carlo estimate

    Points are uniform on the local support; a moment that vanishes gives
    an ordinary normal deviate.
    """
    n = atom.n
    reachBall = KoranyiBall.centered(n, atom.dictionary.maxReach())
    x, t = integration.sampleBallArrays(reachBall, count, seed)
    values = atom.evaluateLocal(x, t)
    worst = 0.0
    for index in MultiIndex.enumerate(n, atom.D):
        samples = values * monomialArrays(index, x, t)
        mean = float(np.mean(samples))
        standardError = float(np.std(samples, ddof=1)) / math.sqrt(count)
        if standardError > 0:
            worst = max(worst, abs(mean) / standardError)
        elif mean != 0:
            worst = math.inf
    return worst


def verifyAtom(
    atom: Atom,
    spec: IntegrationSpec = IntegrationSpec(),
    p: Optional[ExponentFunction] = None,
) -> AtomReport:
    """Recomputes the support, size and moment conditions of an atom

    The moments are checked twice: exactly through the closed form moment
    map, and by Monte Carlo on the support.  The exponent defaults to the
    one the atom was built with.  Never raises on a failed condition; the
    report carries one flag per condition.
    """
    p = atom.exponent if p is None else p
    if p is None:
        raise errors.ArgumentError("verifyAtom needs the exponent p(.)")

    supportOk = atom.dictionary.maxReach() <= 1.0 + constants.POINT_TOLERANCE
    supportOk = supportOk and _supportProbe(atom, spec.seed)

    lpNorm = _lpNormOnRule(atom, atom.p0)
    sizeBound, _chiNorm = _sizeBound(atom.ball, p, spec, atom.p0)
    sizeOk = lpNorm <= sizeBound

    residuals = momentResiduals(atom)
    maxResidual = max(residuals.values(), default=0.0)
    sigmas = sampledMomentSigmas(atom, constants.MOMENT_SAMPLES, spec.seed)
    momentsOk = maxResidual <= constants.MOMENT_TOLERANCE and sigmas <= constants.MOMENT_SIGMAS

    report = AtomReport(supportOk, sizeOk, momentsOk, lpNorm, sizeBound, maxResidual, sigmas)
    if not report.passed:
        logger.info("Atom failed verification: %s", report)
    return report


def _recertified(
    atom: Atom,
    ball: KoranyiBall,
    coefficients: np.ndarray,
    spec: IntegrationSpec,
    p: Optional[ExponentFunction],
) -> Atom:
    moved = Atom(
        ball, atom.p0, atom.D, atom.dictionary, coefficients, p,
        gridOrder=atom.gridOrder,
    )
    chiNorm = None
    if p is not None:
        chiNorm = varexp.luxemburgNorm(Field.indicator(ball), p, spec)
    return Atom(
        ball,
        atom.p0,
        atom.D,
        atom.dictionary,
        coefficients,
        p,
        _lpNormOnRule(moved, atom.p0),
        chiNorm,
        atom.gridOrder,
    )


def translateAtom(
    atom: Atom,
    z0: GroupPoint,
    spec: IntegrationSpec = IntegrationSpec(),
    p: Optional[ExponentFunction] = None,
) -> Atom:
    """The pullback z -> a(z0 . z), an atom on B_delta(e)

    Certificates are recomputed against p (defaulting to the atom's own
    exponent); the L^{p0} norm is unchanged by Haar invariance.

    Raises:
        CenterMismatch: z0 is not the center of the atom's ball
    """
    if z0 != atom.ball.center:
        raise errors.CenterMismatch(
            f"Translation point {z0} is not the ball center {atom.ball.center}"
        )
    p = atom.exponent if p is None else p
    ball = KoranyiBall.centered(atom.n, atom.ball.radius)
    return _recertified(atom, ball, atom.coefficients, spec, p)


def dilateAtom(
    atom: Atom,
    r: float,
    spec: IntegrationSpec = IntegrationSpec(),
    p: Optional[ExponentFunction] = None,
) -> Atom:
    """r^{-Q/p0} a(r^-1 . z), supported in B_{r delta}(r . c)

    Support and moment conditions carry over exactly; the size condition is
    re-certified.
    """
    if not r > 0:
        raise errors.ArgumentError(f"Dilation factor must be positive; got {r}")
    p = atom.exponent if p is None else p
    Q = group.homogeneousDimension(atom.n)
    ball = KoranyiBall(group.dilate(r, atom.ball.center), r * atom.ball.radius)
    coefficients = atom.coefficients * r ** (-Q / atom.p0)
    return _recertified(atom, ball, coefficients, spec, p)


def indicatorAtom(
    ball: KoranyiBall,
    p: ExponentFunction,
    p0: float,
    D: int,
    spec: IntegrationSpec = IntegrationSpec(),
) -> Atom:
    """A multiple of chi_B meeting the size condition; its integral never vanishes"""
    bound, chiNorm = _sizeBound(ball, p, spec, p0)
    height = constants.ATOM_SIZE_SLACK * bound / integration.ballVolume(ball) ** (1.0 / p0)
    atom = Atom.fromIndicator(ball, p0, D, p, height)
    return Atom(
        ball,
        p0,
        D,
        atom.dictionary,
        atom.coefficients,
        p,
        _lpNormOnRule(atom, p0),
        chiNorm,
        atom.gridOrder,
    )
