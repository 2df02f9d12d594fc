"""
Result records returned by checks that report instead of raising
"""

from collections import namedtuple


class TaylorRemainderReport(
    namedtuple(
        "TaylorRemainderReport",
        ["constant", "beta", "ratios", "maxRemainder", "skipped"],
    )
):
    pass


class LogHolderReport(
    namedtuple(
        "LogHolderReport",
        [
            "cLocal",
            "cInfinity",
            "violationCount",
            "cLocalByScale",
            "localDivergent",
            "pInfinity",
        ],
    )
):
    """Fitted log-Holder constants

    cLocalByScale maps the upper end of each dyadic distance band to the
    constant fitted from pairs in that band.  localDivergent is set when the
    finest bands need a much larger constant than the coarse ones.
    """

    @property
    def isLogHolder(self) -> bool:
        return self.violationCount == 0 and not self.localDivergent


class PowerIdentityReport(
    namedtuple(
        "PowerIdentityReport", ["passed", "lhs", "rhs", "relativeDifference", "s"]
    )
):
    pass


class RatioReport(
    namedtuple("RatioReport", ["ratio", "numerator", "denominator"])
):
    pass


class AtomReport(
    namedtuple(
        "AtomReport",
        [
            "supportOk",
            "sizeOk",
            "momentsOk",
            "lpNorm",
            "sizeBound",
            "maxMomentResidual",
            "sampledMomentSigmas",
        ],
    )
):
    """maxMomentResidual is scale corrected: |int a z^I| / (||a||_1 delta^d(I))

    sampledMomentSigmas is the largest Monte Carlo moment in standard errors.
    """

    @property
    def passed(self) -> bool:
        return self.supportOk and self.sizeOk and self.momentsOk


class FittedConstantReport(
    namedtuple(
        "FittedConstantReport",
        ["constant", "uncertainty", "samples", "skipped", "byDegree"],
    )
):
    """A constant fitted as the max ratio over samples

    uncertainty propagates the quadrature/differencing errors of the
    sample achieving the max.  byDegree is empty when not applicable.
    """

    def stableAgainst(self, other: "FittedConstantReport", tolerance: float) -> bool:
        scale = max(abs(self.constant), abs(other.constant))
        if scale == 0:
            return True
        return abs(self.constant - other.constant) / scale <= tolerance


class DecayFit(
    namedtuple("DecayFit", ["exponent", "exponentError", "radii", "values"])
):
    pass


class RegionDomination(
    namedtuple(
        "RegionDomination",
        ["label", "value", "error", "comparison", "ratio", "proofConstant"],
    )
):
    """|T(chi_Omega f)(z)| against the quantity the boundedness proof compares it with

    comparison is M_0 f at the matching point for the inner regions and the
    Holder tail bound for the outer one; ratio = |value| / comparison.
    """
