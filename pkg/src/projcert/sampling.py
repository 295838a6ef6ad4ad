"""Sampling configuration and the numerical constancy test.

All randomness in projcert flows from SampleConfig.seed. Each consumer asks
for a numbered stream (cfg.rng(stream)), so adding a check never shifts the
samples another check sees, and equal configs give bit-identical results.

Key class: SampleConfig.
Key functions: sample_points(), sample_pairs(), probe_points(),
constancy_test().
"""

import logging
import math
from dataclasses import asdict, dataclass, fields, replace
from typing import Any

import numpy as np

from .errors import InvalidProblem

logger = logging.getLogger(__name__)

# Stream ids handed to SampleConfig.rng()
STREAM_POINTS = 0
STREAM_PAIRS = 1
STREAM_DIRECTIONS = 2
STREAM_SET_POINTS = 3
STREAM_RESAMPLE = 4
STREAM_ITERATIVE = 5

# NotProjector needs the tested spread to exceed this many tolerances
WITNESS_FACTOR = 10.0

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class SampleConfig:
    """Seed, sample count, sampling radius and tolerances for one run."""

    seed: int = 0
    n_samples: int = 512
    scale: float = 1.0  # Gaussian standard deviation
    atol: float = 1e-8
    rtol: float = 1e-8
    fd_step: float = 1e-4
    grid_resolution: float = 1e-3

    def __post_init__(self) -> None:
        if isinstance(self.seed, bool) or not isinstance(self.seed, int):
            raise InvalidProblem(f"seed must be an integer, got {self.seed!r}")
        if isinstance(self.n_samples, bool) or not isinstance(self.n_samples, int):
            raise InvalidProblem(f"n_samples must be an integer, got {self.n_samples!r}")
        if self.n_samples < 1:
            raise InvalidProblem(f"n_samples must be >= 1, got {self.n_samples}")
        for name in ("scale", "atol", "rtol", "fd_step", "grid_resolution"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise InvalidProblem(f"{name} must be a number, got {value!r}")
            if not math.isfinite(value):
                raise InvalidProblem(f"{name} must be finite, got {value!r}")
        if self.scale <= 0:
            raise InvalidProblem(f"scale must be positive, got {self.scale}")
        if self.atol < 0 or self.rtol < 0:
            raise InvalidProblem("atol and rtol must be nonnegative")
        if not 0 < self.fd_step <= 1e-2:
            raise InvalidProblem(f"fd_step must lie in (0, 1e-2], got {self.fd_step}")
        if self.grid_resolution <= 0:
            raise InvalidProblem(
                f"grid_resolution must be positive, got {self.grid_resolution}"
            )

    def rng(self, stream: int = STREAM_POINTS) -> np.random.Generator:
        """Independent generator for one consumer of randomness."""
        return np.random.default_rng([self.seed & _SEED_MASK, stream])

    def tolerance(self, reference: float = 0.0) -> float:
        """Absolute-plus-relative tolerance around a reference magnitude."""
        return self.atol + self.rtol * abs(reference)

    def fresh(self) -> "SampleConfig":
        """Same settings, next seed: used to re-validate on unseen samples."""
        return replace(self, seed=self.seed + 1)

    def with_overrides(self, **overrides: Any) -> "SampleConfig":
        """Copy with the non-None overrides applied."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **changes) if changes else self

    def to_dict(self) -> dict[str, Any]:
        """Convert to dict for JSON serialization."""
        return asdict(self)

    @classmethod
    def from_dict(
        cls, data: dict[str, Any], base: "SampleConfig | None" = None
    ) -> "SampleConfig":
        """Create from dict, strictly: unknown keys are rejected.

        Missing keys fall back to `base` (or the defaults).
        """
        if not isinstance(data, dict):
            raise InvalidProblem("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InvalidProblem(f"unknown config field(s): {', '.join(unknown)}")
        return replace(base or cls(), **data)


# ── Sample generation ────────────────────────────────────────────────────


def probe_points(dim: int, scale: float) -> np.ndarray:
    """Deterministic probes: the origin and ±scale·eᵢ."""
    eye = np.eye(dim) * scale
    return np.vstack([np.zeros((1, dim)), eye, -eye])


def sample_points(
    dim: int,
    cfg: SampleConfig,
    *,
    stream: int = STREAM_POINTS,
    probes: bool = True,
    count: int | None = None,
) -> np.ndarray:
    """Gaussian sample points of std-dev cfg.scale, probes first."""
    n = cfg.n_samples if count is None else count
    gaussian = cfg.rng(stream).standard_normal((n, dim)) * cfg.scale
    if not probes:
        return gaussian
    return np.vstack([probe_points(dim, cfg.scale), gaussian])


def sample_pairs(
    dim: int, cfg: SampleConfig, *, stream: int = STREAM_PAIRS
) -> tuple[np.ndarray, np.ndarray]:
    """Sampled pairs (x, y) plus the deterministic pairs (0, ±scale·eᵢ)."""
    rng = cfg.rng(stream)
    xs = rng.standard_normal((cfg.n_samples, dim)) * cfg.scale
    ys = rng.standard_normal((cfg.n_samples, dim)) * cfg.scale
    eye = np.eye(dim) * cfg.scale
    zeros = np.zeros((2 * dim, dim))
    return np.vstack([zeros, xs]), np.vstack([eye, -eye, ys])


def unit_directions(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Random unit vectors, drawn as normalized Gaussians."""
    raw = rng.standard_normal((count, dim))
    norms = np.linalg.norm(raw, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    return raw / norms


# ── Constancy test ───────────────────────────────────────────────────────


@dataclass(frozen=True)
class ConstancyResult:
    """Outcome of testing a sampled quantity for constancy."""

    minimum: float
    maximum: float
    median: float
    tolerance: float
    argmin: int
    argmax: int
    n_samples: int

    @property
    def spread(self) -> float:
        return self.maximum - self.minimum

    @property
    def constant(self) -> bool:
        return self.spread <= self.tolerance

    @property
    def clearly_varying(self) -> bool:
        """Spread large enough for a reproducible NotProjector witness."""
        return self.spread > WITNESS_FACTOR * self.tolerance


def constancy_test(values: np.ndarray, cfg: SampleConfig) -> ConstancyResult:
    """Declare values constant if max − min ≤ atol + rtol·|median|."""
    values = np.asarray(values, dtype=float).ravel()
    median = float(np.median(values))
    result = ConstancyResult(
        minimum=float(values.min()),
        maximum=float(values.max()),
        median=median,
        tolerance=cfg.tolerance(median),
        argmin=int(values.argmin()),
        argmax=int(values.argmax()),
        n_samples=int(values.size),
    )
    logger.debug(
        "Constancy: spread=%.3e tol=%.3e over %d samples",
        result.spread,
        result.tolerance,
        result.n_samples,
    )
    return result
