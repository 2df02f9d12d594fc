"""
Constant values and primitive definitions that can be shared throughout the code
"""
from collections import namedtuple
import math
from typing import Sequence, Tuple

import numpy as np
from typing_extensions import Final

from heisenlab.utilities import errors

# Entrywise absolute tolerance for the RotationMatrix invariants
MATRIX_TOLERANCE: Final = 1e-10
# Kernel exponents must sum to Q - alpha to within this
KERNEL_EXPONENT_TOLERANCE: Final = 1e-12

POINT_TOLERANCE: Final = 1e-12


class GroupPoint(namedtuple("GroupPoint", ["x", "t"])):
    """An element (x, t) of H^n with x in R^{2n}"""

    def __new__(cls, x: Sequence[float], t: float):
        x = tuple(float(value) for value in x)
        t = float(t)
        if len(x) == 0 or len(x) % 2 != 0:
            raise errors.ArgumentError(
                f"The horizontal part must have even positive length; got {len(x)}"
            )
        if not all(math.isfinite(value) for value in x) or not math.isfinite(t):
            raise errors.ArgumentError(f"Coordinates must be finite: {x}, {t}")

        return super(GroupPoint, cls).__new__(cls, x, t)

    @classmethod
    def identity(cls, n: int) -> "GroupPoint":
        return cls((0.0,) * (2 * n), 0.0)

    @classmethod
    def fromArrays(cls, x: np.ndarray, t: float) -> "GroupPoint":
        return cls(tuple(np.asarray(x, dtype=float).ravel()), float(t))

    @property
    def n(self) -> int:
        return len(self.x) // 2

    def asArrays(self) -> Tuple[np.ndarray, float]:
        return np.array(self.x, dtype=float), self.t

    def __eq__(self, other):
        if not isinstance(other, GroupPoint) or len(self.x) != len(other.x):
            return False

        return all(
            math.isclose(a, b, abs_tol=POINT_TOLERANCE) for a, b in zip(self.x, other.x)
        ) and math.isclose(self.t, other.t, abs_tol=POINT_TOLERANCE)

    def __ne__(self, other):
        return not self == other


class IntegrationMethods:
    GRID_QUADRATURE: Final = "grid-quadrature"
    MONTE_CARLO: Final = "monte-carlo"
    STRATIFIED_MC: Final = "stratified-mc"

    validOptions = [GRID_QUADRATURE, MONTE_CARLO, STRATIFIED_MC]


class ErrorReportingMode:
    SILENCE: Final = "silence"
    WARNING: Final = "warning"
    ERROR: Final = "error"

    validOptions = [SILENCE, WARNING, ERROR]


class TransformKinds:
    ROTATION: Final = "rotation"
    DILATION: Final = "dilation"

    validOptions = [ROTATION, DILATION]


class ExponentKinds:
    CONSTANT: Final = "constant"
    RADIAL: Final = "radial"
    PIECEWISE: Final = "piecewise"
    SYMMETRIZED: Final = "symmetrized"

    validOptions = [CONSTANT, RADIAL, PIECEWISE, SYMMETRIZED]


class BumpProfiles:
    POLYNOMIAL: Final = "polynomial"
    FLAT: Final = "flat"

    validOptions = [POLYNOMIAL, FLAT]


# Integration
DEFAULT_TOLERANCE: Final = 1e-3
DEFAULT_MAX_EVALUATIONS: Final = 20000
STRATA_COUNT: Final = 8
MAX_DYADIC_ANNULI: Final = 40
MIN_DYADIC_ANNULI: Final = 4
NEAR_FIELD_FACTOR: Final = 2.0
COMPLEMENT_CORE_SHELLS: Final = 8
MIN_GRID_ORDER: Final = 4

# Luxemburg norm root finding
ROOT_RELATIVE_WIDTH: Final = 1e-6
ROOT_MAX_STEPS: Final = 400
BRACKET_MAX_STEPS: Final = 200

# Derivatives
DEFAULT_DERIVATIVE_STEP: Final = 1e-3
DEFAULT_RICHARDSON_LEVELS: Final = 2
MAX_DERIVATIVE_DEGREE: Final = 6
DEFAULT_TAYLOR_BETA: Final = 2.0
KERNEL_GUARD_FACTOR: Final = 10.0

# Atoms
ATOM_SIZE_SLACK: Final = 0.99
MOMENT_TOLERANCE: Final = 1e-8
DICTIONARY_SIZE_FACTOR: Final = 4
ATOM_GRID_ORDER: Final = 12
ATOM_MAX_RETRIES: Final = 5
BUMP_PROFILE_POWER: Final = 4
MOMENT_SAMPLES: Final = 20000
MOMENT_SIGMAS: Final = 5.0
FAR_FIELD_GRID_ORDER: Final = 24

# Log-Holder sampling
LOG_HOLDER_MAX_DISTANCE: Final = 0.5
LOG_HOLDER_MIN_DISTANCE: Final = 1e-6
LOG_HOLDER_ZOOM_LEVELS: Final = 40
LOG_HOLDER_DIVERGENCE_FACTOR: Final = 2.0

# Maximal functions
OFF_CENTER_COUNT: Final = 32


class Experiments:
    GROUP_AXIOMS: Final = "group-axioms"
    KORANYI_PROPS: Final = "koranyi-props"
    CALCULUS_SUITE: Final = "calculus-suite"
    LUXEMBURG_SUITE: Final = "luxemburg-suite"
    LUXEMBURG_GOLDEN: Final = "luxemburg-golden"
    ATOM_SUITE: Final = "atom-suite"
    LP_LQ_RATIO: Final = "lp-lq-ratio"
    OMEGA_GEOMETRY: Final = "omega-geometry"
    KERNEL_DERIVATIVES: Final = "kernel-derivatives"
    ATOM_UNIFORM: Final = "atom-uniform"
    FAR_FIELD_DECAY: Final = "far-field-decay"
    A_QUANTITY_SUITE: Final = "a-quantity-suite"

    validOptions = [
        GROUP_AXIOMS,
        KORANYI_PROPS,
        CALCULUS_SUITE,
        LUXEMBURG_SUITE,
        LUXEMBURG_GOLDEN,
        ATOM_SUITE,
        LP_LQ_RATIO,
        OMEGA_GEOMETRY,
        KERNEL_DERIVATIVES,
        ATOM_UNIFORM,
        FAR_FIELD_DECAY,
        A_QUANTITY_SUITE,
    ]


# Experiment configuration.  Every key a config document may set, with its
# default.  "kernel" and "exponent" default per experiment when left null.
DEFAULT_EXPERIMENT_CONFIG: Final = {
    "n": 1,
    "seed": 0,
    "workers": None,
    "integration": {
        "method": IntegrationMethods.GRID_QUADRATURE,
        "tolerance": DEFAULT_TOLERANCE,
        "maxEvaluations": DEFAULT_MAX_EVALUATIONS,
    },
    "derivative": {
        "step": None,
        "richardsonLevels": DEFAULT_RICHARDSON_LEVELS,
        "maxDegree": MAX_DERIVATIVE_DEGREE,
    },
    "taylorBeta": DEFAULT_TAYLOR_BETA,
    "kernel": None,
    "exponent": None,
    "samples": {
        "groupSamples": 100000,
        "volumeSamples": 200000,
        "volumeRadii": [0.5, 1.0, 2.0, 4.0],
        "taylorSamples": 64,
        "logHolderSamples": 2000,
        "powerIdentityCases": 20,
        "atomCount": 100,
        "atomDegrees": [0, 1, 2],
        "atomP0": [1.5, 2.0, 3.0],
        "lpP0": [1.5, 2.0, 3.0],
        "corpusSize": 6,
        "dilations": [0.5, 1.0, 2.0],
        "covarianceSamples": 50,
        "nodeBudget": 128,
        "farShells": 4,
        "separationSamples": 100000,
        "partitionSamples": 10000,
        "dominationPoints": 6,
        "kernelPairs": 1000,
        "derivativeOrders": [1, 2, 3],
        "uniformAtoms": 100,
        "radiusScales": 4,
        "decayRadii": [16.0, 32.0, 64.0, 128.0],
        "familyCount": 50,
        "familyMaxBalls": 8,
        "familyGamma": 2.0,
        "operatorBudget": 4000,
        "decayOrder": 2,
    },
    "thresholds": {
        "exactIdentity": 1e-10,
        "ballVolumeRelative": 1e-3,
        "volumeExponent": 1e-2,
        "closedFormRelative": 1e-2,
        "goldenRatio": 1e-3,
        "powerIdentityFactor": 5.0,
        "momentResidual": MOMENT_TOLERANCE,
        "polynomialCoefficient": 1e-8,
        "stabilityRelative": 0.25,
        "covarianceErrorFactor": 1.0,
        "decayExponent": 0.3,
        "uniformSpread": 10.0,
        "lpRatioFlatness": 0.25,
        "derivativeRelative": 1e-5,
        "monteCarloSigmas": 5.0,
    },
}
