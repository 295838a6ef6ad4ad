"""Shared fixtures for projcert unit tests.

Provides a small-sample config, seeded point clouds, combination builders
and a problem-file writer.
"""

import json
from pathlib import Path

import numpy as np
import pytest

from projcert.combination import Combination
from projcert.sampling import SampleConfig

# ── Sampling ─────────────────────────────────────────────────────────────


@pytest.fixture
def cfg() -> SampleConfig:
    """Seeded config with enough samples for the decision rules."""
    return SampleConfig(seed=7, n_samples=256)


@pytest.fixture
def make_points():
    """Factory: seeded Gaussian points of shape (count, dim)."""

    def _make(dim: int, count: int = 32, *, seed: int = 0, scale: float = 1.0) -> np.ndarray:
        return np.random.default_rng(seed).standard_normal((count, dim)) * scale

    return _make


# ── Combinations ─────────────────────────────────────────────────────────


@pytest.fixture
def make_sum():
    """Factory: Σ P_{Cᵢ} with unit coefficients."""

    def _make(*sets) -> Combination:
        return Combination.sum_of(sets)

    return _make


@pytest.fixture
def make_combination():
    """Factory: Σ αᵢ P_{Cᵢ} from (coefficient, set) pairs."""

    def _make(*pairs) -> Combination:
        return Combination.of(pairs)

    return _make


# ── Problem files ────────────────────────────────────────────────────────


@pytest.fixture
def write_problem(tmp_path: Path):
    """Factory: write a problem dict to a JSON file and return its path."""

    def _write(data: dict, name: str = "problem.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return path

    return _write


@pytest.fixture
def ray_pair_problem() -> dict:
    """Opposite rays in the plane: sums to the projector onto a line."""
    return {
        "task": "decide",
        "dimension": 2,
        "combination": [
            {"coefficient": 1, "set": {"variant": "ray", "direction": [1, 1]}},
            {"coefficient": 1, "set": {"variant": "ray", "direction": [-1, -1]}},
        ],
    }
