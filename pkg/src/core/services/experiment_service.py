"""
Experiment Service Module

Monte Carlo size and power experiments.

Responsibilities:
    - Run R independent replicates of (sample X, sample Y, test) and count
      rejections
    - Sweep an example parameter over a grid for power curves
    - Spread replicates over worker processes without changing results

Reproducibility:
    Replicate r draws everything from ``RngStream(seed).derive(r)``: X from
    ``derive(0)``, Y from ``derive(1)`` and the test's calibration from
    ``derive(2)`` of that stream. Replicates are split into contiguous blocks,
    and block results are gathered in block order, so rejection counts are
    identical for every ``jobs`` value.

Example:
    >>> service = ExperimentService(jobs=4)
    >>> result = service.size_experiment(cfg)
    >>> print(result.rate, result.se)
"""

import math
from concurrent.futures import ProcessPoolExecutor
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from config.dependencies import procedure_for
from config.logging import logger
from core.exceptions import DomainError
from core.generators import sample, validate_spec
from core.interfaces.procedures import TwoSampleProcedure
from core.models.experiment import ExperimentConfig, ExperimentResult, GeneratorSpec
from utils.random import RngStream

ProcedureFactory = Callable[[ExperimentConfig], TwoSampleProcedure]

# Blocks per worker; more blocks even out uneven replicate costs.
_BLOCKS_PER_JOB = 4


def run_block(
    cfg: ExperimentConfig,
    g: GeneratorSpec,
    replicates: range,
    factory: ProcedureFactory = procedure_for,
) -> list[tuple[bool, float]]:
    """
    (decision, statistic) for each replicate index in ``replicates``.

    Top-level so worker processes can import it.
    """
    procedure = factory(cfg)
    root = RngStream(cfg.seed)
    outcomes = []
    for r in replicates:
        stream = root.derive(r)
        x = sample(cfg.f, cfg.n, stream.derive(0))
        y = sample(g, cfg.m, stream.derive(1))
        report = procedure.run(x, y, stream.derive(2))
        outcomes.append((report.reject, report.statistic))
    return outcomes


def _blocks(total: int, jobs: int) -> list[range]:
    count = min(total, max(1, jobs * _BLOCKS_PER_JOB))
    edges = np.linspace(0, total, count + 1).round().astype(int)
    return [range(a, b) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def monte_carlo_se(rate: float, replicates: int) -> float:
    """√(r(1 − r)/R)."""
    return math.sqrt(rate * (1.0 - rate) / replicates)


class ExperimentService:
    """
    Runs experiments described by ``ExperimentConfig``.

    Args:
        factory: Builds the test procedure of a configuration
        jobs: Worker processes; ``None`` uses each configuration's ``jobs``
    """

    def __init__(self, factory: ProcedureFactory = procedure_for, jobs: int | None = None):
        self.factory = factory
        self.jobs = jobs

    def _outcomes(self, cfg: ExperimentConfig, g: GeneratorSpec) -> list[tuple[bool, float]]:
        validate_spec(cfg.f)
        validate_spec(g)
        jobs = self.jobs or cfg.jobs
        blocks = _blocks(cfg.replicates, jobs)
        if jobs == 1:
            parts = [run_block(cfg, g, block, self.factory) for block in blocks]
        else:
            with ProcessPoolExecutor(max_workers=jobs) as executor:
                parts = list(
                    executor.map(
                        run_block,
                        [cfg] * len(blocks),
                        [g] * len(blocks),
                        blocks,
                        [self.factory] * len(blocks),
                    )
                )
        return [outcome for part in parts for outcome in part]

    def _aggregate(self, cfg: ExperimentConfig, g: GeneratorSpec) -> ExperimentResult:
        outcomes = self._outcomes(cfg, g)
        rejections = sum(1 for reject, _ in outcomes if reject)
        rate = rejections / cfg.replicates
        return ExperimentResult(
            param=g.param,
            rate=rate,
            se=monte_carlo_se(rate, cfg.replicates),
            R=cfg.replicates,
            seed=cfg.seed,
            rejections=rejections,
        )

    def size_experiment(self, cfg: ExperimentConfig) -> ExperimentResult:
        """
        Empirical size under F = G.

        Raises:
            DomainError: If the F and G generators differ
        """
        if cfg.f != cfg.g:
            raise DomainError(
                f"size experiments need identical generators, got {cfg.f.to_text()} "
                f"and {cfg.g.to_text()}"
            )
        logger.info(
            "size %s: %s, n=%d, m=%d, R=%d", cfg.name, cfg.g.to_text(), cfg.n, cfg.m, cfg.replicates
        )
        return self._aggregate(cfg, cfg.g)

    def power_curve(
        self, cfg: ExperimentConfig, grid: tuple[float, ...] | None = None
    ) -> list[ExperimentResult]:
        """One rejection rate per value of the example parameter of G."""
        grid = cfg.grid if grid is None else tuple(grid)
        if not grid:
            raise DomainError("power curve needs a non-empty parameter grid")
        rows = []
        for value in grid:
            g = cfg.g.with_param(value)
            logger.info("power %s: %s, R=%d", cfg.name, g.to_text(), cfg.replicates)
            rows.append(self._aggregate(cfg, g))
        return rows

    def run(self, cfg: ExperimentConfig) -> list[ExperimentResult]:
        """Power curve when the configuration has a grid, otherwise one rejection rate."""
        if cfg.is_power_curve:
            return self.power_curve(cfg)
        if cfg.f == cfg.g:
            return [self.size_experiment(cfg)]
        logger.info("rejection rate %s: F=%s, G=%s", cfg.name, cfg.f.to_text(), cfg.g.to_text())
        return [self._aggregate(cfg, cfg.g)]

    def null_statistics(self, cfg: ExperimentConfig) -> NDArray[np.float64]:
        """Observed statistics of every replicate, in replicate order."""
        return np.array([statistic for _, statistic in self._outcomes(cfg, cfg.g)])


def size_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    return ExperimentService().size_experiment(cfg)


def power_curve(cfg: ExperimentConfig, grid: tuple[float, ...] | None = None) -> list[ExperimentResult]:
    return ExperimentService().power_curve(cfg, grid)
