"""
Experiment configuration and the reports experiments hand back
"""

from collections import namedtuple
import copy
from typing import Any, Dict, List, Optional

from heisenlab.data_classes.exponent import ExponentFunction
from heisenlab.data_classes.geometry import IntegrationSpec
from heisenlab.data_classes.kernel_spec import KernelSpec
from heisenlab.data_classes.multi_index import DerivativeSpec
from heisenlab.utilities import constants
from heisenlab.utilities import errors
from heisenlab.utilities import utils

# Keys that steer how a run is carried out but not what it computes
_EXCLUDED_FROM_HASH = ("seed", "workers")


def _merged(defaults: dict, overrides: dict, path: str = "") -> dict:
    merged = copy.deepcopy(defaults)
    for key, value in overrides.items():
        if key not in defaults:
            raise errors.ConfigurationError(f"Unknown configuration key '{path}{key}'")
        if isinstance(defaults[key], dict):
            if not isinstance(value, dict):
                raise errors.ConfigurationError(
                    f"'{path}{key}' must be an object; got {value!r}"
                )
            merged[key] = _merged(defaults[key], value, f"{path}{key}.")
        else:
            merged[key] = copy.deepcopy(value)
    return merged


class ExperimentConfig:
    """A validated configuration for one experiment run

    `document` holds every key of constants.DEFAULT_EXPERIMENT_CONFIG,
    with the caller's overrides merged in.

    Raises:
        UnknownExperiment: the experiment is not in the registry
        ConfigurationError: an unknown key or a value that does not validate
    """

    def __init__(
        self,
        experiment: str,
        document: Optional[dict] = None,
        outputDirectory: str = ".",
        plot: bool = False,
    ):
        if experiment not in constants.Experiments.validOptions:
            raise errors.UnknownExperiment(
                experiment, constants.Experiments.validOptions
            )
        self.experiment = experiment
        self.document = _merged(constants.DEFAULT_EXPERIMENT_CONFIG, document or {})
        self.outputDirectory = outputDirectory
        self.plot = plot

        n = self.document["n"]
        if not isinstance(n, int) or n < 1:
            raise errors.ConfigurationError(f"n must be a positive integer; got {n!r}")
        seed = self.document["seed"]
        if not isinstance(seed, int) or seed < 0:
            raise errors.ConfigurationError(f"seed must be unsigned; got {seed!r}")

        try:
            self.integrationSpec = IntegrationSpec(
                seed=seed, **self.document["integration"]
            )
            self.derivativeSpec = DerivativeSpec(**self.document["derivative"])
            if self.document["kernel"] is not None:
                KernelSpec.fromDict(self.document["kernel"], n)
            if self.document["exponent"] is not None:
                ExponentFunction.fromDict(self.document["exponent"], n)
        except (errors.HeisenlabException, TypeError, ValueError) as e:
            raise errors.ConfigurationError(str(e)) from e

    @property
    def n(self) -> int:
        return self.document["n"]

    @property
    def seed(self) -> int:
        return self.document["seed"]

    @property
    def workers(self) -> Optional[int]:
        return self.document["workers"]

    @property
    def taylorBeta(self) -> float:
        return float(self.document["taylorBeta"])

    def sample(self, name: str) -> Any:
        return self.document["samples"][name]

    def threshold(self, name: str) -> float:
        return float(self.document["thresholds"][name])

    def kernelSpec(self, default: dict) -> KernelSpec:
        """The configured kernel, or `default` when the config leaves it null"""
        document = self.document["kernel"]
        return KernelSpec.fromDict(default if document is None else document, self.n)

    def exponentFunction(self, default: dict) -> ExponentFunction:
        document = self.document["exponent"]
        return ExponentFunction.fromDict(
            default if document is None else document, self.n
        )

    def withSeed(self, seed: int) -> "ExperimentConfig":
        document = copy.deepcopy(self.document)
        document["seed"] = seed
        return ExperimentConfig(self.experiment, document, self.outputDirectory, self.plot)

    def withOverrides(self, overrides: dict) -> "ExperimentConfig":
        document = _merged(self.document, overrides)
        return ExperimentConfig(self.experiment, document, self.outputDirectory, self.plot)

    def toDict(self) -> dict:
        document = copy.deepcopy(self.document)
        document["experiment"] = self.experiment
        return document

    def configHash(self) -> str:
        """sha256 of the configuration, seed and worker count excluded"""
        document = self.toDict()
        for key in _EXCLUDED_FROM_HASH:
            document.pop(key)
        return utils.configHash(document)


class CriterionResult(
    namedtuple(
        "CriterionResult", ["criterion", "description", "passed", "value", "threshold"]
    )
):
    pass


class FittedConstant(namedtuple("FittedConstant", ["name", "value", "uncertainty"])):
    pass


class ExperimentReport:
    """Per-trial rows, fitted constants and the verdict of every criterion"""

    def __init__(self, config: ExperimentConfig, columns: List[str]):
        self.experiment = config.experiment
        self.configHash = config.configHash()
        self.seed = config.seed
        self.columns = list(columns)
        self.rows: List[list] = []
        self.criteria: List[CriterionResult] = []
        self.constants: List[FittedConstant] = []
        self.plots: Dict[str, dict] = {}

    def addRow(self, row: list) -> None:
        if len(row) != len(self.columns):
            raise errors.ArgumentError(
                f"Row has {len(row)} entries for {len(self.columns)} columns"
            )
        self.rows.append(list(row))

    def addCriterion(
        self,
        criterion: str,
        description: str,
        passed: bool,
        value: float,
        threshold: float,
    ) -> CriterionResult:
        result = CriterionResult(criterion, description, bool(passed), value, threshold)
        self.criteria.append(result)
        return result

    def addConstant(self, name: str, value: float, uncertainty: float) -> None:
        self.constants.append(FittedConstant(name, value, uncertainty))

    def addPlot(self, name: str, series: dict) -> None:
        """series: {"x": [...], "y": {label: [...]}, "xlabel": str, "ylabel": str, "log": bool}"""
        self.plots[name] = series

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.criteria)

    def column(self, name: str) -> list:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]
