"""
Integration tests for the experiment runner.

These drive generators, procedures and the worker pool together on small
replicate counts.
"""

import numpy as np
import pytest

from core.exceptions import DomainError
from core.interfaces.procedures import TwoSampleProcedure
from core.models.experiment import ExperimentConfig, GeneratorSpec
from core.models.reports import TestReport
from core.services.experiment_service import (
    ExperimentService,
    _blocks,
    monte_carlo_se,
    run_block,
)


@pytest.fixture
def small_size_cfg() -> ExperimentConfig:
    return ExperimentConfig(
        name="it",
        g=GeneratorSpec.parse("null:gamma"),
        n=30,
        m=25,
        method="smooth",
        d=4,
        replicates=24,
        seed=77,
    )


def test_blocks_cover_every_replicate_once():
    # Act
    blocks = _blocks(103, 3)

    # Assert
    assert [r for block in blocks for r in block] == list(range(103))
    assert len(blocks) == 12


def test_blocks_never_exceed_replicates():
    assert _blocks(2, 8) == [range(0, 1), range(1, 2)]


def test_monte_carlo_se():
    assert monte_carlo_se(0.05, 2000) == pytest.approx(0.004873, abs=1e-6)
    assert monte_carlo_se(0.0, 10) == 0.0


@pytest.mark.parametrize("jobs", [2, 8])
def test_results_do_not_depend_on_jobs(small_size_cfg, jobs):
    """Serial and pooled runs give identical counts and statistics"""
    # Act
    serial = ExperimentService(jobs=1)
    parallel = ExperimentService(jobs=jobs)

    # Assert
    assert serial.size_experiment(small_size_cfg) == parallel.size_experiment(small_size_cfg)
    np.testing.assert_array_equal(
        serial.null_statistics(small_size_cfg), parallel.null_statistics(small_size_cfg)
    )


def test_replicates_are_independent_of_block_layout(small_size_cfg):
    """Replicate r gives the same outcome whichever block holds it"""
    # Act
    whole = run_block(small_size_cfg, small_size_cfg.g, range(0, 6))
    split = run_block(small_size_cfg, small_size_cfg.g, range(0, 3)) + run_block(
        small_size_cfg, small_size_cfg.g, range(3, 6)
    )

    # Assert
    assert whole == split


def test_single_replicate_rate_is_zero_or_one(small_size_cfg):
    # Arrange
    cfg = small_size_cfg.model_copy(update={"replicates": 1})

    # Act
    (result,) = ExperimentService(jobs=1).run(cfg)

    # Assert
    assert result.rate in (0.0, 1.0)
    assert result.R == 1 and result.param is None
    assert result.se == 0.0


def test_power_curve_rows():
    """One row per grid value, with common replicate seeds"""
    # Arrange
    cfg = ExperimentConfig(
        name="pc",
        g=GeneratorSpec.parse("example:1(0)"),
        n=40,
        m=40,
        method="ks",
        B=49,
        replicates=8,
        seed=3,
        grid=(0.0, 0.5, 1.0),
    )

    # Act
    rows = ExperimentService(jobs=1).run(cfg)

    # Assert
    assert [row.param for row in rows] == [0.0, 0.5, 1.0]
    assert all(row.R == 8 and row.seed == 3 for row in rows)
    assert all(0.0 <= row.rate <= 1.0 for row in rows)


def test_size_experiment_requires_equal_generators():
    # Arrange
    cfg = ExperimentConfig(
        f=GeneratorSpec.parse("null:normal"), g=GeneratorSpec.parse("null:t"), n=10, m=10
    )

    # Act & Assert
    with pytest.raises(DomainError):
        ExperimentService(jobs=1).size_experiment(cfg)


def test_alternative_without_grid_runs_once():
    """F ≠ G without a grid is a single rejection rate"""
    # Arrange
    cfg = ExperimentConfig(
        f=GeneratorSpec.parse("null:normal"),
        g=GeneratorSpec.parse("null:normal(loc=3)"),
        n=30,
        m=30,
        d=4,
        replicates=5,
    )

    # Act
    (result,) = ExperimentService(jobs=1).run(cfg)

    # Assert
    assert result.rate == 1.0


def test_multivariate_experiment_runs():
    """ms on a p = 2 null with tiny budgets"""
    # Arrange
    cfg = ExperimentConfig(
        g=GeneratorSpec.parse("null:mvnormal(p=2)"),
        n=20,
        m=18,
        method="ms",
        d=3,
        B=20,
        restarts=1,
        bootstrap_restarts=1,
        replicates=3,
        seed=11,
    )

    # Act
    (result,) = ExperimentService(jobs=1).run(cfg)

    # Assert
    assert result.R == 3
    assert result.rejections in range(4)


def test_custom_factory_is_used(small_size_cfg):
    """The runner only depends on the procedure interface"""
    # Arrange
    class AlwaysReject(TwoSampleProcedure):
        method = "always"

        def run(self, x, y, stream):
            return TestReport("always", 1.0, True, 0.05, x.n, y.n, critical_value=0.0)

    # Act
    result = ExperimentService(lambda cfg: AlwaysReject(), jobs=1).size_experiment(small_size_cfg)

    # Assert
    assert result.rate == 1.0
    assert result.rejections == small_size_cfg.replicates
