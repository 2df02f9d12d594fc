from typing import List, Sequence


class HeisenlabException(Exception):
    pass


class FileNotFound(HeisenlabException):
    def __init__(self, fullPath: str):
        super(FileNotFound, self).__init__()
        self.fullPath = fullPath

    def __str__(self):
        return "File not found:\n%s" % self.fullPath


class ArgumentError(HeisenlabException):
    pass


class WrongOption(HeisenlabException):
    def __init__(
        self, argumentName: str, givenValue: str, availableOptions: Sequence[str]
    ):
        super(WrongOption, self).__init__()
        self.argumentName = argumentName
        self.givenValue = givenValue
        self.availableOptions = list(availableOptions)

    def __str__(self):
        return (
            f"For argument '{self.argumentName}' was given the value '{self.givenValue}'. "
            f"However, expected one of [{', '.join(self.availableOptions)}]"
        )


class DimensionMismatch(ArgumentError):
    def __init__(self, nA: int, nB: int):
        super(DimensionMismatch, self).__init__()
        self.nA = nA
        self.nB = nB

    def __str__(self):
        return f"Points live in different groups: H^{self.nA} and H^{self.nB}"


class InvalidRotationMatrix(ArgumentError):
    pass


class IntegrationError(HeisenlabException):
    pass


class IntegrationBudgetExceeded(IntegrationError):
    pass


class NonIntegrableError(IntegrationError):
    def __init__(self, decayExponent, homogeneousDimension: int):
        super(NonIntegrableError, self).__init__()
        self.decayExponent = decayExponent
        self.homogeneousDimension = homogeneousDimension

    def __str__(self):
        return (
            f"Declared decay exponent {self.decayExponent} does not exceed "
            f"the homogeneous dimension {self.homogeneousDimension}; "
            "the tail integral diverges"
        )


class DerivativeInstability(HeisenlabException):
    pass


# Raised when an interpolation system that should always be invertible is not
class SingularSystemError(HeisenlabException):
    pass


class BracketNotFound(HeisenlabException):
    def __init__(self, lowest: float, highest: float):
        super(BracketNotFound, self).__init__()
        self.lowest = lowest
        self.highest = highest

    def __str__(self):
        return (
            "Could not bracket the Luxemburg norm: "
            f"searched lambda in [{self.lowest}, {self.highest}]"
        )


class ExponentError(ArgumentError):
    pass


class SymmetryViolation(HeisenlabException):
    pass


class KernelSpecError(ArgumentError):
    pass


class AtomConstructionError(HeisenlabException):
    pass


class CenterMismatch(ArgumentError):
    pass


class ConfigurationError(HeisenlabException):
    pass


class UnknownExperiment(ConfigurationError):
    def __init__(self, name: str, availableExperiments: List[str]):
        super(UnknownExperiment, self).__init__()
        self.name = name
        self.availableExperiments = availableExperiments

    def __str__(self):
        return (
            f"No experiment named '{self.name}'. "
            f"Available: [{', '.join(self.availableExperiments)}]"
        )
