"""Shared criteria for the decision rules.

  - g_values(): the constancy quantity of the linear-combination theorem,
    g(x) = (α−1)Σαᵢq(Pᵢx) − ½ΣΣαᵢαⱼq(Pᵢx − Pⱼx).
  - run_constancy(): sample a quantity and turn the outcome into either
    γ, a constancy witness, or an inconclusive note.
  - range_witness() / pointwise_witness(): other witness shapes.
  - reproduces(): re-evaluate a witness against its condition.
  - simplify_sum(): name the Minkowski sum with a catalog set when the
    structure is known.
  - distance_identity_gap(): d²_{C}(x) against Σαᵢd²ᵢ − 2(α−1)q + 2γ.
"""

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..certificate import Evidence, Witness, WitnessKind
from ..combination import Combination
from ..sampling import (
    STREAM_SET_POINTS,
    WITNESS_FACTOR,
    ConstancyResult,
    SampleConfig,
    constancy_test,
    sample_points,
)
from ..sets import (
    Box,
    ConvexSet,
    FinitelyGeneratedCone,
    MinkowskiSum,
    PolarCone,
    Ray,
    Singleton,
    Subspace,
    Translate,
    generators_pairwise_exact,
    interval,
    is_whole_space,
    orth_rows,
    same_set,
    sample_members,
    whole_space,
)

logger = logging.getLogger(__name__)

# Rows in, one value per row out
Quantity = Callable[[np.ndarray], np.ndarray]

DISTANCE_IDENTITY_TOL = 1e-8
STRUCTURE_TOL = 1e-10


# ── The constancy quantity ───────────────────────────────────────────────


def g_values(comb: Combination, xs: np.ndarray) -> np.ndarray:
    """(α−1)Σαᵢq(Pᵢx) − ½ΣΣαᵢαⱼq(Pᵢx − Pⱼx) for each row."""
    alphas = np.array(comb.coefficients)
    proj = comb.projections(xs)
    q_each = 0.5 * np.sum(proj**2, axis=2)
    diffs = proj[:, None, :, :] - proj[None, :, :, :]
    q_pairs = 0.5 * np.sum(diffs**2, axis=3)
    return (comb.alpha - 1.0) * (alphas @ q_each) - 0.5 * np.einsum(
        "i,j,ijk->k", alphas, alphas, q_pairs
    )


def g_quantity(comb: Combination) -> Quantity:
    return lambda xs: g_values(comb, xs)


def pair_product(c: ConvexSet, d: ConvexSet) -> Quantity:
    """x ↦ ⟨P_C x, P_D x⟩."""
    return lambda xs: np.sum(c.project_many(xs) * d.project_many(xs), axis=1)


# ── Constancy runner ─────────────────────────────────────────────────────


@dataclass(frozen=True)
class ConstancyOutcome:
    """Result of sampling a quantity that must be constant."""

    result: ConstancyResult
    evidence: Evidence
    witness: Witness | None

    @property
    def constant(self) -> bool:
        return self.result.constant

    @property
    def refuted(self) -> bool:
        return self.witness is not None

    @property
    def gamma(self) -> float:
        return self.result.median

    def note(self) -> str:
        r = self.result
        return (
            f"spread {r.spread:.3e} is above tolerance {r.tolerance:.3e} "
            f"but below {WITNESS_FACTOR:g}x tolerance"
        )


def run_constancy(
    quantity: Quantity,
    points: np.ndarray,
    cfg: SampleConfig,
    condition: str,
) -> ConstancyOutcome:
    """Evaluate quantity at points and classify the spread."""
    return classify_values(quantity(points), points, cfg, condition)


def classify_values(
    values: np.ndarray,
    points: np.ndarray,
    cfg: SampleConfig,
    condition: str,
) -> ConstancyOutcome:
    """Classify values already evaluated at points."""
    result = constancy_test(values, cfg)
    witness = None
    if result.clearly_varying:
        witness = Witness(
            kind=WitnessKind.CONSTANCY,
            points=(points[result.argmin].copy(), points[result.argmax].copy()),
            values=(result.minimum, result.maximum),
            condition=condition,
        )
    return ConstancyOutcome(result, Evidence.from_constancy(result, cfg), witness)


def default_points(dim: int, cfg: SampleConfig) -> np.ndarray:
    """Probes 0, ±scale·eᵢ followed by N Gaussian samples."""
    return sample_points(dim, cfg)


def member_points(s: ConvexSet, cfg: SampleConfig, count: int | None = None) -> np.ndarray:
    """Elements of s: projections of samples at scale and 10·scale."""
    raw = sample_points(s.dim, cfg, stream=STREAM_SET_POINTS, count=count)
    return sample_members(s, raw)


# ── Other witness shapes ─────────────────────────────────────────────────


def range_witness(x: np.ndarray, image: np.ndarray, condition: str) -> Witness:
    """x lies in the candidate range but Tx ≠ x."""
    return Witness(
        kind=WitnessKind.RANGE,
        points=(x.copy(),),
        values=tuple(float(v) for v in image),
        condition=condition,
    )


def pointwise_witness(kind: WitnessKind, x: np.ndarray, value: float, condition: str) -> Witness:
    return Witness(kind=kind, points=(x.copy(),), values=(float(value),), condition=condition)


def first_violation(
    residuals: np.ndarray, limit: np.ndarray | float
) -> int | None:
    """Index of the first point whose residual exceeds limit, if any."""
    over = np.flatnonzero(residuals > limit)
    return int(over[0]) if over.size else None


def reproduces(
    witness: Witness,
    cfg: SampleConfig,
    *,
    operator: Callable[[np.ndarray], np.ndarray] | None = None,
    quantity: Quantity | None = None,
) -> bool:
    """Re-evaluate a witness; True iff the violation exceeds 10× tolerance.

    Constancy and identity witnesses need the tested quantity; range,
    monotonicity and homogeneity witnesses need the operator (batched).
    """
    pts = np.array(witness.points)
    if witness.kind is WitnessKind.CONSTANCY:
        assert quantity is not None
        values = quantity(pts)
        reference = float(np.median(values))
        return abs(float(values[1] - values[0])) > WITNESS_FACTOR * cfg.tolerance(reference)
    if witness.kind is WitnessKind.IDENTITY:
        assert quantity is not None
        value = float(quantity(pts)[0])
        return abs(value) > WITNESS_FACTOR * cfg.tolerance(float(pts[0] @ pts[0]))
    assert operator is not None
    if witness.kind is WitnessKind.RANGE:
        gap = float(np.linalg.norm(operator(pts)[0] - pts[0]))
        return gap > WITNESS_FACTOR * cfg.tolerance(float(np.linalg.norm(pts[0])))
    if witness.kind is WitnessKind.MONOTONICITY:
        images = operator(pts)
        pairing = float((images[0] - images[1]) @ (pts[0] - pts[1]))
        return pairing < -WITNESS_FACTOR * cfg.atol
    lam = witness.factor if witness.factor is not None else 1.0
    scaled = operator(np.vstack([lam * pts[0], pts[0]]))
    return float(np.linalg.norm(scaled[0] - lam * scaled[1])) > WITNESS_FACTOR * cfg.atol


# ── Result sets ──────────────────────────────────────────────────────────


def _ray_sum(rays: Sequence[Ray]) -> ConvexSet | None:
    dirs = np.array([r.direction for r in rays])
    if not generators_pairwise_exact(dirs):
        return None
    cosines = dirs @ dirs.T
    antipodal = np.isclose(cosines, -1.0, atol=STRUCTURE_TOL)
    if len(rays) == 2 and antipodal[0, 1]:
        return Subspace(dirs[:1], dirs.shape[1])
    if np.all(antipodal | np.eye(len(rays), dtype=bool) | np.isclose(cosines, 0.0, atol=STRUCTURE_TOL)):
        paired = antipodal.any(axis=1)
        if paired.all():
            return Subspace(orth_rows(dirs, dirs.shape[1]), dirs.shape[1])
    return FinitelyGeneratedCone(dirs)


def are_polar_pair(k: ConvexSet, s: ConvexSet) -> bool:
    """True when one cone is structurally the polar of the other."""
    if not (k.is_cone and s.is_cone):
        return False
    if isinstance(s, PolarCone) and same_set(s.of, k):
        return True
    if isinstance(k, PolarCone) and same_set(k.of, s):
        return True
    dual = k.polar()
    if dual is not None and same_set(dual, s):
        return True
    dual = s.polar()
    return dual is not None and same_set(dual, k)


def simplify_sum(parts: Sequence[ConvexSet]) -> ConvexSet:
    """A catalog descriptor for Σ parts, given Σ P_parts is a projector."""
    parts = list(parts)
    n = parts[0].dim
    shift = np.zeros(n)
    rest: list[ConvexSet] = []
    for part in parts:
        if isinstance(part, Singleton):
            shift = shift + part.u
        else:
            rest.append(part)

    if not rest:
        return Singleton(shift)
    if len(rest) == 1:
        core = rest[0]
    elif n == 1:
        lower = sum(float(p.bounds()[0][0]) for p in rest)
        upper = sum(float(p.bounds()[1][0]) for p in rest)
        core = interval(lower, upper)
    elif all(isinstance(p, Ray) for p in rest):
        core = _ray_sum(rest) or MinkowskiSum(tuple(rest))  # type: ignore[arg-type]
    elif all(isinstance(p, Subspace) for p in rest):
        basis = orth_rows(np.vstack([p.basis for p in rest]), n)  # type: ignore[attr-defined]
        core = Subspace(basis, n)
    elif len(rest) == 2 and are_polar_pair(rest[0], rest[1]):
        core = whole_space(n)
    elif any(is_whole_space(p) for p in rest):
        core = whole_space(n)
    else:
        core = MinkowskiSum(tuple(rest))

    if not np.any(shift):
        return core
    if isinstance(core, Box):
        return Box(core.lower + shift, core.upper + shift)
    if isinstance(core, Singleton):
        return Singleton(core.u + shift)
    return Translate(core, shift)


# ── Post-checks ──────────────────────────────────────────────────────────


def distance_identity_gap(
    comb: Combination, result: ConvexSet, gamma: float, points: np.ndarray
) -> float:
    """max |d²_result − (Σαᵢd²ᵢ − 2(α−1)q + 2γ)| relative to the magnitude."""
    alphas = np.array(comb.coefficients)
    observed = np.array([result.distance_sq(x) for x in points])
    dists = np.array([[s.distance_sq(x) for x in points] for s in comb.sets])
    q = 0.5 * np.sum(points**2, axis=1)
    expected = alphas @ dists - 2.0 * (comb.alpha - 1.0) * q + 2.0 * gamma
    magnitude = 1.0 + np.abs(alphas) @ dists + np.abs(comb.alpha - 1.0) * q + abs(gamma)
    return float(np.max(np.abs(observed - expected) / magnitude))


def pairwise_products(sets: Sequence[ConvexSet], points: np.ndarray) -> dict[tuple[int, int], np.ndarray]:
    """⟨Pᵢx, Pⱼx⟩ for every pair i < j."""
    proj = [s.project_many(points) for s in sets]
    return {
        (i, j): np.sum(proj[i] * proj[j], axis=1)
        for i, j in combinations(range(len(sets)), 2)
    }
