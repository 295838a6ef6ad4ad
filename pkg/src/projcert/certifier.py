"""Numerical checks run on an arbitrary operator T: ℝⁿ → ℝⁿ.

Every check draws its samples from the SampleConfig streams, so two runs
with equal configs produce bit-identical reports.

Checks:
  - gradient_criterion_check(): f = q∘(Id − T) has gradient Id − T
    (central differences, kink-aware resampling).
  - monotonicity_check(): ⟨Tx − Ty, x − y⟩ ≥ 0.
  - homogeneity_check(): T(λx) = λTx and T(0) = 0.
  - firm_nonexpansiveness_check(): ‖Tx − Ty‖² ≤ ⟨Tx − Ty, x − y⟩.
  - idempotence_check(): T(Tx) = Tx.

Key classes: OperatorHandle, CheckReport.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import DimensionMismatch
from .sampling import (
    STREAM_DIRECTIONS,
    STREAM_POINTS,
    STREAM_RESAMPLE,
    SampleConfig,
    sample_pairs,
    sample_points,
    unit_directions,
)
from .utils import vector_to_json

logger = logging.getLogger(__name__)

GRADIENT_TOL = 1e-5
FIRM_TOL = 1e-10
IDEMPOTENCE_TOL = 1e-10
HOMOGENEITY_FACTORS = (0.25, 1.0, 4.0)
RANDOM_DIRECTIONS = 8
MAX_REDRAWS = 8
KINK_FACTOR = 1e-2

# Batched evaluator: (m, n) rows in, (m, n) rows out
BatchMap = Callable[[np.ndarray], np.ndarray]


class OperatorHandle:
    """Callable wrapper around a batched map ℝⁿ → ℝⁿ."""

    def __init__(self, evaluator: BatchMap, dim: int, label: str = "T") -> None:
        self._evaluator = evaluator
        self.dim = dim
        self.label = label

    @classmethod
    def pointwise(cls, fn: Callable[[np.ndarray], np.ndarray], dim: int, label: str = "T") -> "OperatorHandle":
        """Wrap a single-vector function."""

        def batched(xs: np.ndarray) -> np.ndarray:
            return np.array([fn(x) for x in xs], dtype=float).reshape(xs.shape)

        return cls(batched, dim, label)

    def __call__(self, x: Any) -> np.ndarray:
        vec = np.asarray(x, dtype=float)
        if vec.shape != (self.dim,):
            raise DimensionMismatch(f"{self.label} expects dimension {self.dim}")
        return self._evaluator(vec[None, :])[0]

    def many(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if xs.ndim != 2 or xs.shape[1] != self.dim:
            raise DimensionMismatch(f"{self.label} expects rows of dimension {self.dim}")
        return self._evaluator(xs)

    def __repr__(self) -> str:
        return f"OperatorHandle({self.label!r}, dim={self.dim})"


@dataclass
class CheckReport:
    """Outcome of one numerical check."""

    check: str
    passed: bool
    n_samples: int
    seed: int
    fd_step: float
    max_error: float | None = None
    min_pairing: float | None = None
    skipped: int = 0
    witnesses: list[dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"check": self.check, "pass": self.passed}
        if self.max_error is not None:
            data["max_error"] = self.max_error
        if self.min_pairing is not None:
            data["min_pairing"] = self.min_pairing
        data.update(
            n_samples=self.n_samples,
            seed=self.seed,
            fd_step=self.fd_step,
            witnesses=self.witnesses,
        )
        if self.skipped:
            data["skipped"] = self.skipped
        return data


def _point_witness(**points: np.ndarray | float) -> dict[str, Any]:
    return {
        name: vector_to_json(value) if isinstance(value, np.ndarray) else float(value)
        for name, value in points.items()
    }


# ── Gradient criterion ───────────────────────────────────────────────────

# Scalar function of each row: (m, n) → (m,)
BatchScalar = Callable[[np.ndarray], np.ndarray]


def _gradient_errors(
    value: BatchScalar,
    gradient: BatchMap,
    kink_map: BatchMap,
    points: np.ndarray,
    directions: np.ndarray,
    h: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-point max error of central differences against ⟨gradient, d⟩.

    A point is flagged as kinked when the second difference of kink_map
    along some direction exceeds KINK_FACTOR·h.
    """
    m, n = points.shape
    k = directions.shape[0]
    plus = (points[:, None, :] + h * directions[None, :, :]).reshape(-1, n)
    minus = (points[:, None, :] - h * directions[None, :, :]).reshape(-1, n)
    finite_diff = (value(plus) - value(minus)).reshape(m, k) / (2.0 * h)
    analytic = gradient(points) @ directions.T
    errors = np.abs(finite_diff - analytic).max(axis=1)

    center = kink_map(points)
    second = kink_map(plus).reshape(m, k, n) + kink_map(minus).reshape(m, k, n)
    second = np.linalg.norm(second - 2.0 * center[:, None, :], axis=2)
    kinked = np.any(second > KINK_FACTOR * h, axis=1)
    return errors, kinked


def finite_difference_check(
    check: str,
    value: BatchScalar,
    gradient: BatchMap,
    kink_map: BatchMap,
    dim: int,
    cfg: SampleConfig,
) -> CheckReport:
    """Compare a claimed gradient with central differences of value.

    Directions are the coordinate axes plus RANDOM_DIRECTIONS random unit
    vectors. Kinked points are redrawn up to MAX_REDRAWS times, then
    skipped and counted.
    """
    points = sample_points(dim, cfg, stream=STREAM_POINTS)
    directions = np.vstack(
        [np.eye(dim), unit_directions(dim, RANDOM_DIRECTIONS, cfg.rng(STREAM_DIRECTIONS))]
    )
    resample = cfg.rng(STREAM_RESAMPLE)

    max_error = 0.0
    worst: np.ndarray | None = None
    pending = points
    for attempt in range(MAX_REDRAWS + 1):
        errors, kinked = _gradient_errors(value, gradient, kink_map, pending, directions, cfg.fd_step)
        smooth = ~kinked
        if np.any(smooth):
            idx = int(np.argmax(np.where(smooth, errors, -np.inf)))
            if errors[idx] > max_error:
                max_error, worst = float(errors[idx]), pending[idx]
        pending = pending[kinked]
        if pending.shape[0] == 0 or attempt == MAX_REDRAWS:
            break
        pending = resample.standard_normal(pending.shape) * cfg.scale

    skipped = int(pending.shape[0])
    if skipped:
        logger.debug("%s check skipped %d kinked points", check, skipped)
    evaluated = points.shape[0] - skipped
    passed = evaluated > 0 and max_error <= GRADIENT_TOL
    witnesses = [] if passed or worst is None else [_point_witness(point=worst, error=max_error)]
    return CheckReport(
        check=check,
        passed=passed,
        n_samples=int(points.shape[0]),
        seed=cfg.seed,
        fd_step=cfg.fd_step,
        max_error=max_error,
        skipped=skipped,
        witnesses=witnesses,
    )


def gradient_criterion_check(T: OperatorHandle, cfg: SampleConfig) -> CheckReport:
    """Check ∇(q∘(Id − T)) = Id − T by central finite differences."""

    def value(xs: np.ndarray) -> np.ndarray:
        return 0.5 * np.sum((xs - T.many(xs)) ** 2, axis=1)

    def gradient(xs: np.ndarray) -> np.ndarray:
        return xs - T.many(xs)

    return finite_difference_check("gradient", value, gradient, T.many, T.dim, cfg)


# ── Pairwise checks ──────────────────────────────────────────────────────


def monotonicity_check(T: OperatorHandle, cfg: SampleConfig) -> CheckReport:
    """min ⟨Tx − Ty, x − y⟩ over sampled pairs plus (0, ±scale·eᵢ)."""
    xs, ys = sample_pairs(T.dim, cfg)
    pairing = np.sum((T.many(xs) - T.many(ys)) * (xs - ys), axis=1)
    idx = int(np.argmin(pairing))
    minimum = float(pairing[idx])
    passed = minimum >= -cfg.atol
    witnesses = [] if passed else [_point_witness(x=xs[idx], y=ys[idx], pairing=minimum)]
    return CheckReport(
        check="monotonicity",
        passed=passed,
        n_samples=int(xs.shape[0]),
        seed=cfg.seed,
        fd_step=cfg.fd_step,
        min_pairing=minimum,
        witnesses=witnesses,
    )


def firm_nonexpansiveness_check(T: OperatorHandle, cfg: SampleConfig) -> CheckReport:
    """min of ⟨Tx − Ty, x − y⟩ − ‖Tx − Ty‖², allowed down to −1e-10 (relative)."""
    xs, ys = sample_pairs(T.dim, cfg)
    diff_t = T.many(xs) - T.many(ys)
    diff_x = xs - ys
    slack = np.sum(diff_t * diff_x, axis=1) - np.sum(diff_t**2, axis=1)
    allowed = FIRM_TOL * np.maximum(1.0, np.sum(diff_x**2, axis=1))
    idx = int(np.argmin(slack + allowed))
    passed = bool(np.all(slack >= -allowed))
    witnesses = [] if passed else [_point_witness(x=xs[idx], y=ys[idx], slack=slack[idx])]
    return CheckReport(
        check="firm-nonexpansiveness",
        passed=passed,
        n_samples=int(xs.shape[0]),
        seed=cfg.seed,
        fd_step=cfg.fd_step,
        min_pairing=float(slack.min()),
        witnesses=witnesses,
    )


# ── Pointwise checks ─────────────────────────────────────────────────────


def homogeneity_check(T: OperatorHandle, cfg: SampleConfig) -> CheckReport:
    """T(λx) = λTx for λ ∈ {¼, 1, 4}, plus T(0) = 0."""
    points = sample_points(T.dim, cfg)
    images = T.many(points)
    max_error = 0.0
    witnesses: list[dict[str, Any]] = []
    for lam in HOMOGENEITY_FACTORS:
        gaps = np.linalg.norm(T.many(lam * points) - lam * images, axis=1)
        allowed = cfg.atol + cfg.rtol * lam * np.linalg.norm(images, axis=1)
        idx = int(np.argmax(gaps - allowed))
        max_error = max(max_error, float(gaps.max()))
        if gaps[idx] > allowed[idx] and not witnesses:
            witnesses.append(_point_witness(point=points[idx], **{"lambda": lam}))

    origin = float(np.linalg.norm(T(np.zeros(T.dim))))
    if origin > cfg.atol and not witnesses:
        witnesses.append(_point_witness(point=np.zeros(T.dim), **{"lambda": 0.0}))
    max_error = max(max_error, origin)
    return CheckReport(
        check="homogeneity",
        passed=not witnesses,
        n_samples=int(points.shape[0]),
        seed=cfg.seed,
        fd_step=cfg.fd_step,
        max_error=max_error,
        witnesses=witnesses,
    )


def idempotence_check(T: OperatorHandle, cfg: SampleConfig) -> CheckReport:
    """T(Tx) = Tx on sampled points."""
    points = sample_points(T.dim, cfg)
    images = T.many(points)
    gaps = np.linalg.norm(T.many(images) - images, axis=1)
    allowed = IDEMPOTENCE_TOL * np.maximum(1.0, np.linalg.norm(images, axis=1))
    idx = int(np.argmax(gaps - allowed))
    passed = bool(np.all(gaps <= allowed))
    witnesses = [] if passed else [_point_witness(point=points[idx], error=gaps[idx])]
    return CheckReport(
        check="idempotence",
        passed=passed,
        n_samples=int(points.shape[0]),
        seed=cfg.seed,
        fd_step=cfg.fd_step,
        max_error=float(gaps.max()),
        witnesses=witnesses,
    )


PROJECTOR_CHECKS: dict[str, Callable[[OperatorHandle, SampleConfig], CheckReport]] = {
    "gradient": gradient_criterion_check,
    "monotonicity": monotonicity_check,
    "homogeneity": homogeneity_check,
    "firm-nonexpansiveness": firm_nonexpansiveness_check,
    "idempotence": idempotence_check,
}


def run_checks(
    T: OperatorHandle, cfg: SampleConfig, names: tuple[str, ...] | None = None
) -> list[CheckReport]:
    """Run the named checks (all of them by default) in a fixed order."""
    selected = names or tuple(PROJECTOR_CHECKS)
    reports = [PROJECTOR_CHECKS[name](T, cfg) for name in selected]
    for report in reports:
        logger.debug("%s on %s: pass=%s", report.check, T.label, report.passed)
    return reports


def soundness_checks(T: OperatorHandle, cfg: SampleConfig) -> list[CheckReport]:
    """The checks every projector must pass (homogeneity is cone-only)."""
    return run_checks(T, cfg, ("idempotence", "firm-nonexpansiveness", "gradient"))
