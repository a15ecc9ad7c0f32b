"""
CLI Schemas Module

Pydantic models for everything the command line writes: single-test JSON
reports and the simulation manifest.

Responsibilities:
    - Convert domain records (``TestReport``, ``ExperimentConfig``) into
      serialisable schemas
    - Echo the fully resolved configuration, so a report can be reproduced
      by re-running what it records
    - Serialise deterministically (sorted keys, fixed indentation)

Note:
    These schemas are the output contract and may differ from the domain
    models. Field meanings are documented in ``docs/cli.md``.

Example:
    >>> schema = TestReportSchema.from_domain(report, config)
    >>> print(to_json(schema))
"""

import json
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from core.generators import generator_notes
from core.models.experiment import ExperimentConfig
from core.models.reports import TestReport


class TestConfigEcho(BaseModel):
    """
    Resolved configuration of a single test run.

    Attributes:
        command: ``test-uni`` or ``test-multi``
        x, y: Input paths as given
        seed: Seed of the calibration stream (defaults included)
        procedure: Parameters reported by the procedure itself
    """

    __test__ = False

    model_config = ConfigDict(frozen=True)

    command: str
    x: str
    y: str
    seed: int
    procedure: dict[str, Any]


class TestReportSchema(BaseModel):
    """
    JSON report of one two-sample test.

    ``critical_value`` is set for critical-value calibrated methods
    (smooth, bgx, schwarz, ms) and ``p_value`` for permutation methods
    (ks, cvm, bf, mks).
    """

    __test__ = False

    method: str
    statistic: float
    reject: bool
    alpha: float
    n: int
    m: int
    critical_value: float | None = None
    p_value: float | None = None
    d: int | None = None
    basis: str | None = None
    swapped: bool = False
    stream_id: int | None = None
    warnings: list[str] = Field(default_factory=list)
    details: dict[str, Any] = Field(default_factory=dict)
    config: TestConfigEcho

    @classmethod
    def from_domain(cls, report: TestReport, config: TestConfigEcho) -> "TestReportSchema":
        """
        Convert a domain ``TestReport`` into the output schema.

        Args:
            report: Result of the procedure
            config: Resolved configuration echo
        """
        return cls(
            method=report.method,
            statistic=report.statistic,
            reject=report.reject,
            alpha=report.alpha,
            n=report.n,
            m=report.m,
            critical_value=report.critical_value,
            p_value=report.p_value,
            d=report.d,
            basis=report.basis,
            swapped=report.swapped,
            stream_id=report.stream_id,
            warnings=list(report.warnings),
            details=dict(report.details),
            config=config,
        )


class ExperimentEntry(BaseModel):
    """One experiment of a simulation run, as listed in the manifest."""

    file: str
    config: dict[str, Any]
    procedure: dict[str, Any]
    notes: list[str] = Field(default_factory=list)

    @classmethod
    def from_domain(
        cls, file: str, cfg: ExperimentConfig, procedure: dict[str, Any]
    ) -> "ExperimentEntry":
        config = cfg.model_dump(mode="json", exclude={"f", "g", "jobs"})
        config["f"] = cfg.f.to_text()
        config["g"] = cfg.g.to_text()
        notes = generator_notes(cfg.g)
        notes += [note for note in generator_notes(cfg.f) if note not in notes]
        return cls(file=file, config=config, procedure=procedure, notes=notes)


class SimulationManifest(BaseModel):
    """
    Manifest written next to the result CSV files.

    Attributes:
        source: Config file the run was read from
        settings: Settings values that supplied defaults
        experiments: One entry per result file, in config order
    """

    source: str
    settings: dict[str, Any]
    experiments: list[ExperimentEntry]


def to_json(model: BaseModel) -> str:
    """Stable JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(model.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"
