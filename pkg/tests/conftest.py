"""
Shared pytest fixtures.

Fixtures here are available to unit, integration and e2e tests.
"""

from pathlib import Path

import numpy as np
import pytest

from core.models.basis import BasisKind, BasisSystem
from utils.optimize import OptimConfig
from utils.random import RngStream

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    """Directory holding CSV and config fixtures"""
    return FIXTURES


@pytest.fixture
def stream() -> RngStream:
    """Seeded random stream"""
    return RngStream(12345)


@pytest.fixture
def rng() -> np.random.Generator:
    """Plain numpy generator for building test data"""
    return np.random.default_rng(2024)


@pytest.fixture
def trig4() -> BasisSystem:
    return BasisSystem(BasisKind.TRIGONOMETRIC, 4)


@pytest.fixture
def legendre4() -> BasisSystem:
    return BasisSystem(BasisKind.LEGENDRE, 4)


@pytest.fixture
def quick_search() -> OptimConfig:
    """Small sphere-search budget for fast tests"""
    return OptimConfig(restarts=2, max_iterations=60, simplex_tolerance=1e-6, initial_step=0.5)


@pytest.fixture
def write_csv(tmp_path):
    """Factory writing rows (or lines) to a CSV file under tmp_path"""

    def _write(name: str, lines: list[str]) -> Path:
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return _write
