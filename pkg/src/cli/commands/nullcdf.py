"""
Null Distribution Curve Command

``smoothtest nullcdf`` writes the limiting null CDF of the smooth statistic,
P(|G|_∞ ≤ t) = (2Φ(t) − 1)^d, on a grid of t values, one column per d.
With ``--empirical R`` it adds the empirical CDF of R simulated null
statistics next to each limit column.

Columns:
    t, d<d> [, empirical_d<d>] for each requested d

Example:
    $ smoothtest nullcdf --d 4,8,12 --grid 0:5:0.01 > limit.csv
    $ smoothtest nullcdf --d 12 --empirical 2000 --null "null:t(df=7)" --n 180 --m 150
"""

import argparse

import numpy as np

from adapters.config_file import parse_grid, split_top_level
from adapters.csv_io import write_table
from cli.output import resolve_seed
from config.logging import logger
from core.exceptions import InputError
from core.generators import validate_spec
from core.models.experiment import ExperimentConfig, GeneratorSpec
from core.services.experiment_service import ExperimentService
from core.unitest import max_abs_gaussian_cdf
from core.validators import require_count

COMMAND = "nullcdf"


def add_parser(subparsers: argparse._SubParsersAction) -> argparse.ArgumentParser:
    parser = subparsers.add_parser(
        COMMAND,
        help="limiting (and empirical) null CDF of the smooth statistic",
        description="Write (t, (2Φ(t) − 1)^d) rows as CSV.",
    )
    parser.add_argument("--d", default="4", help="truncation or comma-separated list (e.g. 4,8,12)")
    parser.add_argument("--grid", default="0:5:0.01", help="t values: list or start:stop:step")
    parser.add_argument(
        "--empirical", type=int, default=None, metavar="R", help="add R simulated null statistics"
    )
    parser.add_argument("--null", default="null:t(df=7)", help="null generator for --empirical")
    parser.add_argument("--n", type=int, default=180)
    parser.add_argument("--m", type=int, default=150)
    parser.add_argument("--basis", choices=("trig", "legendre"), default="trig")
    parser.add_argument("--seed", type=int, default=None, help="default: SMOOTHTEST_SEED")
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out", default=None, help="CSV path (default: stdout)")
    parser.set_defaults(handler=handle)
    return parser


def _truncations(text: str) -> list[int]:
    try:
        return [int(item) for item in split_top_level(text)]
    except ValueError:
        raise InputError(f"--d must be an integer list, got {text!r}") from None


def empirical_cdf(statistics: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """Fraction of ``statistics`` ≤ t for every t in ``grid``."""
    return np.searchsorted(np.sort(statistics), grid, side="right") / statistics.size


def handle(args: argparse.Namespace) -> int:
    """
    Evaluate the curves and write the CSV.

    Raises:
        InputError: On a malformed grid, d list or generator
        DomainError: On d < 1 or negative grid values
    """
    truncations = _truncations(args.d)
    grid = np.asarray(parse_grid(args.grid), dtype=float)
    header = ["t"]
    columns = []
    for d in truncations:
        header.append(f"d{d}")
        columns.append(np.atleast_1d(max_abs_gaussian_cdf(grid, d)))

    if args.empirical is not None:
        replicates = require_count(args.empirical, "replicates")
        g = validate_spec(GeneratorSpec.parse(args.null))
        service = ExperimentService(jobs=require_count(args.jobs, "jobs"))
        for d in truncations:
            cfg = ExperimentConfig(
                name=COMMAND,
                g=g,
                n=args.n,
                m=args.m,
                method="smooth",
                basis=args.basis,
                d=d,
                replicates=replicates,
                seed=resolve_seed(args.seed),
            )
            logger.info("nullcdf: %d null replicates, d=%d", replicates, d)
            header.append(f"empirical_d{d}")
            columns.append(empirical_cdf(service.null_statistics(cfg), grid))

    rows = ([float(t)] + [float(column[i]) for column in columns] for i, t in enumerate(grid))
    write_table(args.out, header, rows)
    return 0
