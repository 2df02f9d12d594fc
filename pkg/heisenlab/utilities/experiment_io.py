"""
Reading experiment configurations and writing experiment artifacts

A run writes <experiment>.csv (column names, then a "#config_hash=...,seed=..."
line, then one row per trial), <experiment>.json (criteria and fitted
constants) and, when plotting is requested, one <experiment>-<plot>.svg per
plot.  Every artifact is a pure function of (config, seed).
"""

import csv
import io
import json
import os
from typing import List, Optional

import matplotlib
from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure

from heisenlab.data_classes.experiment import ExperimentConfig, ExperimentReport
from heisenlab.utilities import errors
from heisenlab.utilities import my_math
from heisenlab.utilities import utils

# Fixes the ids matplotlib writes into svg files
_SVG_HASH_SALT = "heisenlab"


def loadConfig(
    fn: Optional[str],
    experiment: str,
    seed: Optional[int] = None,
    outputDirectory: str = ".",
    plot: bool = False,
) -> ExperimentConfig:
    """Reads a json configuration; fn=None gives the documented defaults

    Raises:
        FileNotFound: fn does not exist
        ConfigurationError: the file is not json or does not validate
    """
    document = {}
    if fn is not None:
        if not os.path.exists(fn):
            raise errors.FileNotFound(fn)
        with io.open(fn, "r", encoding="utf-8") as fd:
            try:
                document = json.load(fd)
            except json.JSONDecodeError as e:
                raise errors.ConfigurationError(f"{fn} is not valid json: {e}") from e
        if not isinstance(document, dict):
            raise errors.ConfigurationError(f"{fn} must hold a json object")

    document = dict(document)
    named = document.pop("experiment", experiment)
    if named != experiment:
        raise errors.ConfigurationError(
            f"{fn} configures '{named}', not '{experiment}'"
        )
    if seed is not None:
        document["seed"] = seed
    return ExperimentConfig(experiment, document, outputDirectory, plot)


def _formatCell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return my_math.numToStr(value)
    try:
        return my_math.numToStr(float(value))
    except (TypeError, ValueError):
        return str(value)


def reportToCsv(report: ExperimentReport) -> str:
    output = io.StringIO()
    writer = csv.writer(output, lineterminator="\n")
    writer.writerow(report.columns)
    output.write(f"#config_hash={report.configHash},seed={report.seed}\n")
    for row in report.rows:
        writer.writerow([_formatCell(value) for value in row])
    return output.getvalue()


def readCsv(fn: str) -> dict:
    """Reads a run's csv back: {"columns", "configHash", "seed", "rows"}"""
    if not os.path.exists(fn):
        raise errors.FileNotFound(fn)
    with io.open(fn, "r", encoding="utf-8", newline="") as fd:
        lines = fd.read().splitlines()
    if len(lines) < 2 or not lines[1].startswith("#"):
        raise errors.ConfigurationError(f"{fn} lacks the two line header")

    header = dict(entry.split("=", 1) for entry in lines[1][1:].split(","))
    rows = list(csv.reader(lines[2:]))
    return {
        "columns": next(csv.reader([lines[0]])),
        "configHash": header["config_hash"],
        "seed": int(header["seed"]),
        "rows": rows,
    }


def reportToDict(report: ExperimentReport) -> dict:
    return {
        "experiment": report.experiment,
        "configHash": report.configHash,
        "seed": report.seed,
        "passed": report.passed,
        "criteria": [result._asdict() for result in report.criteria],
        "constants": [constant._asdict() for constant in report.constants],
    }


def _plotToSvg(series: dict) -> str:
    figure = Figure(figsize=(6.0, 4.0))
    FigureCanvasSVG(figure)
    ax = figure.add_subplot(1, 1, 1)
    for label, values in sorted(series["y"].items()):
        ax.plot(series["x"], values, marker="o", label=label)
    if series.get("log"):
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel(series.get("xlabel", ""))
    ax.set_ylabel(series.get("ylabel", ""))
    ax.grid(True, alpha=0.3)
    ax.legend()

    output = io.StringIO()
    with matplotlib.rc_context({"svg.hashsalt": _SVG_HASH_SALT}):
        figure.savefig(output, format="svg", metadata={"Date": None})
    return output.getvalue()


def writeReport(report: ExperimentReport, outputDirectory: str, plot: bool) -> List[str]:
    """Writes the run's artifacts and returns their paths"""
    utils.makeDir(outputDirectory)
    paths = []

    csvPath = os.path.join(outputDirectory, f"{report.experiment}.csv")
    with io.open(csvPath, "w", encoding="utf-8", newline="") as fd:
        fd.write(reportToCsv(report))
    paths.append(csvPath)

    jsonPath = os.path.join(outputDirectory, f"{report.experiment}.json")
    with io.open(jsonPath, "w", encoding="utf-8") as fd:
        fd.write(json.dumps(reportToDict(report), sort_keys=True, indent=2))
    paths.append(jsonPath)

    if plot:
        for name, series in sorted(report.plots.items()):
            svgPath = os.path.join(outputDirectory, f"{report.experiment}-{name}.svg")
            with io.open(svgPath, "w", encoding="utf-8") as fd:
                fd.write(_plotToSvg(series))
            paths.append(svgPath)
    return paths
