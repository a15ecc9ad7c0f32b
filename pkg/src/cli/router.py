"""
CLI Router Module

Aggregates all command parsers into the ``smoothtest`` argument parser.

Commands:
    test-uni    univariate two-sample test on CSV files
    test-multi  multivariate two-sample test on CSV files
    simulate    size / power experiments from a config file
    nullcdf     limiting and empirical null CDF of the smooth statistic

Example:
    >>> parser = build_parser()
    >>> args = parser.parse_args(["nullcdf", "--d", "4"])
    >>> args.handler(args)
"""

import argparse

from cli.commands import nullcdf, simulate, test_multi, test_uni
from config.settings import settings

COMMANDS = (test_uni, test_multi, simulate, nullcdf)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.APP_NAME,
        description="Data-driven smooth tests for the two-sample problem.",
    )
    parser.add_argument(
        "--log-level",
        default=None,
        choices=("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"),
        type=str.upper,
        help="logging level (default: SMOOTHTEST_LOG_LEVEL)",
    )
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    for command in COMMANDS:
        command.add_parser(subparsers)
    return parser
