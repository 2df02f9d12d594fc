"""
Various generic utility functions
"""

import hashlib
import json
import logging
import os
from typing import Any, NoReturn, Type

import numpy as np
from typing_extensions import Literal

from heisenlab.utilities import constants
from heisenlab.utilities import errors

logger = logging.getLogger(__name__)


def reportNoop(_exception: Type[BaseException], _text: str) -> None:
    pass


def reportException(exception: Type[BaseException], text: str) -> NoReturn:
    raise exception(text)


def reportWarning(_exception: Type[BaseException], text: str) -> None:
    logger.warning(text)


def getErrorReporter(reportingMode: Literal["silence", "warning", "error"]):
    validateOption("reportingMode", reportingMode, constants.ErrorReportingMode)
    modeToFunc = {
        constants.ErrorReportingMode.SILENCE: reportNoop,
        constants.ErrorReportingMode.WARNING: reportWarning,
        constants.ErrorReportingMode.ERROR: reportException,
    }

    return modeToFunc[reportingMode]


def validateOption(variableName, value, optionClass):
    if value not in optionClass.validOptions:
        raise errors.WrongOption(variableName, value, optionClass.validOptions)


def makeDir(path: str) -> None:
    """Create a new directory

    Unlike os.mkdir, it does not throw an exception if the directory already exists
    """
    if not os.path.exists(path):
        os.makedirs(path)


def makeRng(seed: int, *stream: int) -> np.random.Generator:
    """Returns a generator for an independent, reproducible stream

    Streams are keyed by (seed, *stream) so that work split across strata,
    trials or threads draws the same numbers regardless of scheduling.
    """
    if seed < 0 or any(key < 0 for key in stream):
        raise errors.ArgumentError(f"Seeds must be unsigned; got {seed}, {stream}")
    return np.random.default_rng(np.random.SeedSequence([seed, *stream]))


def floatKey(value: float) -> int:
    """An unsigned integer with the bit pattern of a float, usable as a stream key"""
    return int(np.array(value, dtype=np.float64).view(np.uint64))


def configHash(document: Any) -> str:
    """A stable sha256 digest of a json-serializable document"""
    canonical = json.dumps(document, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
