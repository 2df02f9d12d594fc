"""
Command line entry point

    heisenlab list
    heisenlab run <experiment> [--config FILE] [--seed N] [--out DIR] [--plot]
                               [--workers N] [--verbose | --quiet]

Exit status: 0 when every criterion passes, 1 when one fails, 2 when the
configuration cannot be read or does not validate.
"""

import argparse
import logging
import sys
from typing import List, Optional

from heisenlab import harness
from heisenlab.utilities import errors
from heisenlab.utilities import experiment_io

logger = logging.getLogger(__name__)

EXIT_PASSED = 0
EXIT_FAILED = 1
EXIT_CONFIGURATION = 2


def _buildParser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heisenlab",
        description="Numerical experiments on the Heisenberg group",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    subparsers.add_parser("list", help="List the registered experiments")

    runParser = subparsers.add_parser("run", help="Run one experiment")
    runParser.add_argument("experiment", help="Experiment name; see 'heisenlab list'")
    runParser.add_argument("--config", default=None, help="JSON configuration file")
    runParser.add_argument(
        "--seed", type=int, default=None, help="Overrides the configured seed"
    )
    runParser.add_argument("--out", default=".", help="Directory for the artifacts")
    runParser.add_argument(
        "--plot", action="store_true", help="Also write one SVG per plot"
    )
    runParser.add_argument(
        "--workers", type=int, default=None, help="Worker threads for the trials"
    )
    verbosity = runParser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    verbosity.add_argument("--quiet", action="store_true", help="Log warnings only")
    return parser


def _configureLogging(verbose: bool, quiet: bool) -> None:
    level = logging.INFO
    if verbose:
        level = logging.DEBUG
    elif quiet:
        level = logging.WARNING
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def main(argv: Optional[List[str]] = None) -> int:
    args = _buildParser().parse_args(argv)

    if args.command == "list":
        for name, summary in harness.describe():
            print(f"{name:20s} {summary}")
        return EXIT_PASSED

    _configureLogging(args.verbose, args.quiet)
    try:
        config = experiment_io.loadConfig(
            args.config, args.experiment, args.seed, args.out, args.plot
        )
        if args.workers is not None:
            config = config.withOverrides({"workers": args.workers})
        report = harness.run(config)
    except (errors.ConfigurationError, errors.FileNotFound) as e:
        logger.error("%s", e)
        return EXIT_CONFIGURATION

    for result in report.criteria:
        if not result.passed:
            logger.warning(
                "%s failed: %s (%s > %s)",
                result.criterion,
                result.description,
                result.value,
                result.threshold,
            )
    return EXIT_PASSED if report.passed else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
