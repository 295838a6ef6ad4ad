"""Rules for closed convex cones.

  - decide_ray_pair(): P_U + P_V for rays U, V is a projector iff the
    directions are orthogonal or antipodal.
  - decide_generated_cone(): Σ P_{ℝ₊gᵢ} over generators.
  - decide_cone_family_sum(): Σ P_{Kᵢ} for a family of cones.
  - cone_intersection_projector(): P_{K₁} + P_{K₂} − Id through the
    polar cones.
  - cone_difference_projector(): P_{K₁} − P_{K₂}.
"""

import logging
from itertools import combinations
from typing import Any

import numpy as np

from ..certificate import Certificate, Confidence, WitnessKind
from ..certifier import OperatorHandle
from ..combination import Combination
from ..errors import DidNotConverge, DimensionMismatch, InvalidDescriptor, NotACone, ZeroVector
from ..oracles import dykstra_project
from ..sampling import STREAM_RESAMPLE, WITNESS_FACTOR, SampleConfig, sample_points
from ..sets import (
    PAIRWISE_TOL,
    ConeIntersection,
    ConvexSet,
    FinitelyGeneratedCone,
    PolarCone,
    Ray,
    Singleton,
    as_matrix,
    as_vector,
    is_whole_space,
    linear_basis,
    same_set,
)
from .criteria import (
    STRUCTURE_TOL,
    Quantity,
    are_polar_pair,
    classify_values,
    default_points,
    first_violation,
    pair_product,
    pairwise_products,
    pointwise_witness,
    range_witness,
    run_constancy,
    simplify_sum,
)

logger = logging.getLogger(__name__)

# Largest family whose sub-families are all re-asserted
SUBFAMILY_LIMIT = 12
DIFFERENCE_TOL = 1e-9
DYKSTRA_SAMPLES = 16
DYKSTRA_AGREEMENT = 1e-6


def _require_cones(*cones: ConvexSet) -> None:
    for k in cones:
        if not k.is_cone:
            raise NotACone(f"expected a cone, got {k.variant}")
    if len({k.dim for k in cones}) > 1:
        raise DimensionMismatch("cones differ in dimension")


def _unit(v: Any) -> np.ndarray:
    vec = as_vector(v, name="ray direction")
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        raise ZeroVector("ray direction must be nonzero")
    return vec / norm


# ── Rays ─────────────────────────────────────────────────────────────────


def decide_ray_pair(u: Any, v: Any) -> bool:
    """True iff P_{ℝ₊u} + P_{ℝ₊v} is a projector."""
    cosine = float(_unit(u) @ _unit(v))
    return abs(cosine) <= PAIRWISE_TOL or cosine <= -1.0 + PAIRWISE_TOL


def ray_pair_range_point(u: Any, v: Any) -> np.ndarray:
    """A point of ℝ₊u + ℝ₊v that P_U + P_V moves (directions not exact).

    Obtuse pairs use the point of the cone with ⟨x, v̂⟩ = 0 and
    ⟨x, û⟩ = 1, which P_U + P_V sends to û. Acute or parallel pairs use
    û + v̂, which is scaled by 1 + ⟨û, v̂⟩.
    """
    uh, vh = _unit(u), _unit(v)
    cosine = float(uh @ vh)
    if cosine < 0.0:
        return (uh - cosine * vh) / (1.0 - cosine * cosine)
    return uh + vh


def _first_failing_pair(units: np.ndarray) -> tuple[int, int] | None:
    for i, j in combinations(range(units.shape[0]), 2):
        if not decide_ray_pair(units[i], units[j]):
            return i, j
    return None


def refute_ray_pair(
    units: np.ndarray,
    i: int,
    j: int,
    operator: OperatorHandle,
    cfg: SampleConfig,
    method: str,
) -> Certificate:
    """Range witness when visible under the whole family, else the pair's constancy witness."""
    x = ray_pair_range_point(units[i], units[j])
    image = operator.many(x[None, :])[0]
    if np.linalg.norm(image - x) > WITNESS_FACTOR * cfg.tolerance(float(np.linalg.norm(x))):
        witness = range_witness(x, image, "points of the generated cone are fixed")
        return Certificate.refuted(method, witness, operator=operator)

    ri, rj = Ray(units[i]), Ray(units[j])
    probe = np.vstack([np.zeros(units.shape[1]), units[i] + units[j]])
    outcome = run_constancy(pair_product(ri, rj), probe, cfg, "⟨P_Ui x, P_Uj x⟩ is constant")
    if outcome.witness is None:
        return Certificate.inconclusive(
            method, f"rays {i} and {j} fail the ray rule but no witness clears the tolerance",
            operator=operator,
        )
    return Certificate.refuted(method, outcome.witness, operator=operator)


def decide_generated_cone(generators: Any, cfg: SampleConfig | None = None) -> Certificate:
    """Decide Σ P_{ℝ₊gᵢ}; a projector iff generators are pairwise orthogonal or antipodal."""
    cfg = cfg or SampleConfig()
    gens = as_matrix(generators, name="cone generators")
    if gens.shape[0] == 0:
        raise InvalidDescriptor("a generated cone needs generators")
    norms = np.linalg.norm(gens, axis=1)
    if np.any(norms == 0):
        raise ZeroVector("cone generators must be nonzero")
    units = gens / norms[:, None]
    operator = Combination.sum_of(Ray(g) for g in units).operator()

    failing = _first_failing_pair(units)
    if failing is not None:
        logger.debug("Generators %d and %d are neither orthogonal nor antipodal", *failing)
        return refute_ray_pair(units, *failing, operator, cfg, "generated-cone")

    # Two antipodal partners of one generator would be parallel to each other
    cosines = units @ units.T
    partners = np.sum(cosines <= -1.0 + PAIRWISE_TOL, axis=1)
    assert np.all(partners <= 1), "generator with more than one antipodal partner"
    return Certificate.projector(
        "generated-cone", FinitelyGeneratedCone(gens), gamma=0.0, operator=operator
    )


# ── Families ─────────────────────────────────────────────────────────────


def _pair_exact(a: ConvexSet, b: ConvexSet) -> bool | None:
    """Structural verdict on ⟨P_a x, P_b x⟩ ≡ 0, or None when sampling is needed."""
    if isinstance(a, Ray) and isinstance(b, Ray):
        return decide_ray_pair(a.direction, b.direction)
    if are_polar_pair(a, b):
        return True
    la, lb = linear_basis(a), linear_basis(b)
    if la is not None and lb is not None and np.max(np.abs(la @ lb.T), initial=0.0) <= STRUCTURE_TOL:
        return True
    return None


def _subfamilies_consistent(
    products: dict[tuple[int, int], np.ndarray], m: int, cfg: SampleConfig
) -> bool:
    """Every sub-family's cross-term sum stays constant (zero for cones)."""
    if m > SUBFAMILY_LIMIT:
        return True
    for size in range(2, m + 1):
        for subset in combinations(range(m), size):
            pairs = list(combinations(subset, 2))
            cross = sum(products[p] for p in pairs)
            spread = float(np.max(cross) - np.min(cross))
            if spread > len(pairs) * cfg.tolerance(float(np.median(cross))):
                logger.warning("Sub-family %s of a certified cone family is not constant", subset)
                return False
    return True


def decide_cone_family_sum(cones: list[ConvexSet] | tuple[ConvexSet, ...], cfg: SampleConfig | None = None) -> Certificate:
    """Decide Σ P_{Kᵢ}: a projector iff ⟨P_{Kᵢ}x, P_{Kⱼ}x⟩ ≡ 0 for every pair."""
    cfg = cfg or SampleConfig()
    cones = list(cones)
    if not cones:
        raise InvalidDescriptor("a cone family needs at least one cone")
    _require_cones(*cones)
    method = "cone-family"
    operator = Combination.sum_of(cones).operator()
    if len(cones) == 1:
        return Certificate.projector(method, cones[0], gamma=0.0, operator=operator)

    points = default_points(cones[0].dim, cfg)
    products = pairwise_products(cones, points)
    confidence = Confidence.EXACT
    evidence = None
    for (i, j), values in products.items():
        verdict = _pair_exact(cones[i], cones[j])
        if verdict is True:
            continue
        if verdict is False:
            # Only ray pairs reach an exact refusal
            units = np.array([cones[i].direction, cones[j].direction])  # type: ignore[attr-defined]
            return refute_ray_pair(units, 0, 1, operator, cfg, method)
        confidence = Confidence.SAMPLED
        outcome = classify_values(values, points, cfg, f"⟨P_K{i} x, P_K{j} x⟩ is constant")
        evidence = outcome.evidence
        if outcome.refuted:
            assert outcome.witness is not None
            return Certificate.refuted(
                method, outcome.witness, confidence=Confidence.SAMPLED,
                evidence=outcome.evidence, operator=operator,
            )
        if not outcome.constant:
            return Certificate.inconclusive(method, outcome.note(), evidence=outcome.evidence, operator=operator)

    if not _subfamilies_consistent(products, len(cones), cfg):
        return Certificate.inconclusive(method, "a sub-family sum is not constant", operator=operator)
    return Certificate.projector(
        method,
        simplify_sum(cones),
        gamma=0.0,
        confidence=confidence,
        evidence=evidence,
        operator=operator,
    )


# ── Intersections and differences ────────────────────────────────────────


def intersection_residual(k1: ConvexSet, k2: ConvexSet) -> Quantity:
    """‖P₁x‖² + ‖P₂x‖² − ‖x‖² − ⟨P₁x, P₂x⟩; zero iff the polars sum to a projector."""

    def residual(xs: np.ndarray) -> np.ndarray:
        p1, p2 = k1.project_many(xs), k2.project_many(xs)
        return (
            np.sum(p1**2, axis=1)
            + np.sum(p2**2, axis=1)
            - np.sum(xs**2, axis=1)
            - np.sum(p1 * p2, axis=1)
        )

    return residual


def difference_residual(k1: ConvexSet, k2: ConvexSet) -> Quantity:
    """‖P₂P₁x − P₂x‖."""

    def residual(xs: np.ndarray) -> np.ndarray:
        return np.linalg.norm(k2.project_many(k1.project_many(xs)) - k2.project_many(xs), axis=1)

    return residual


def intersection_operator(k1: ConvexSet, k2: ConvexSet) -> OperatorHandle:
    def evaluate(xs: np.ndarray) -> np.ndarray:
        return k1.project_many(xs) + k2.project_many(xs) - xs

    return OperatorHandle(evaluate, k1.dim, "P[K1] + P[K2] - Id")


def _agrees_with_dykstra(k1: ConvexSet, k2: ConvexSet, operator: OperatorHandle, cfg: SampleConfig) -> str | None:
    """None when the closed form matches Dykstra's iterates, else a diagnostic."""
    points = sample_points(k1.dim, cfg, stream=STREAM_RESAMPLE, probes=False, count=DYKSTRA_SAMPLES)
    for x in points:
        try:
            reference = dykstra_project(k1.project, k2.project, x)
        except DidNotConverge as e:
            return f"Dykstra validation failed: {e}"
        gap = float(np.linalg.norm(operator(x) - reference))
        if gap > DYKSTRA_AGREEMENT * (1.0 + float(np.linalg.norm(x))):
            return f"closed form disagrees with Dykstra by {gap:.3e}"
    return None


def cone_intersection_projector(k1: ConvexSet, k2: ConvexSet, cfg: SampleConfig | None = None) -> Certificate:
    """Decide whether P_{K₁} + P_{K₂} − Id = P_{K₁∩K₂}.

    Equivalent to P_{K₁⊖} + P_{K₂⊖} being a projector.
    """
    cfg = cfg or SampleConfig()
    _require_cones(k1, k2)
    method = "dualized-intersection"
    operator = intersection_operator(k1, k2)

    for whole, other in ((k1, k2), (k2, k1)):
        if is_whole_space(whole):
            return Certificate.projector(method, other, gamma=0.0, operator=operator)

    points = default_points(k1.dim, cfg)
    signed = intersection_residual(k1, k2)(points)
    residuals = np.abs(signed)
    limits = cfg.atol + cfg.rtol * np.sum(points**2, axis=1)
    outcome = classify_values(signed, points, cfg, "polar cross term vanishes")

    if np.all(residuals <= limits):
        diagnostic = _agrees_with_dykstra(k1, k2, operator, cfg)
        if diagnostic is not None:
            return Certificate.inconclusive(method, diagnostic, evidence=outcome.evidence, operator=operator)
        return Certificate.projector(
            method,
            ConeIntersection(k1, k2),
            gamma=0.0,
            confidence=Confidence.SAMPLED,
            evidence=outcome.evidence,
            operator=operator,
        )

    idx = first_violation(residuals, WITNESS_FACTOR * limits)
    if idx is None:
        return Certificate.inconclusive(
            method, "polar cross term is above tolerance but not clearly nonzero",
            evidence=outcome.evidence, operator=operator,
        )
    witness = pointwise_witness(
        WitnessKind.IDENTITY,
        points[idx],
        signed[idx],
        "‖P₁x‖² + ‖P₂x‖² = ‖x‖² + ⟨P₁x, P₂x⟩",
    )
    return Certificate.refuted(
        method, witness, confidence=Confidence.SAMPLED, evidence=outcome.evidence, operator=operator
    )


def cone_difference_projector(
    k1: ConvexSet, k2: ConvexSet, cfg: SampleConfig | None = None, *, cone_rule: bool = False
) -> Certificate:
    """Decide P_{K₁} − P_{K₂}: for cones a projector iff P_{K₂}P_{K₁} = P_{K₂}.

    The range is then K₁ ∩ K₂⊖. Other closed convex pairs go through the
    difference criterion (monotonicity plus constancy of
    ⟨P₂x, P₁x − P₂x⟩) unless cone_rule insists on cones.
    """
    cfg = cfg or SampleConfig()
    if not (k1.is_cone and k2.is_cone) and not cone_rule:
        from .linear import decide_generic

        comb = Combination.of([(1.0, k1), (-1.0, k2)])
        return decide_generic(comb, cfg, method="difference-criterion")
    _require_cones(k1, k2)
    method = "cone-difference"
    operator = Combination.of([(1.0, k1), (-1.0, k2)]).operator()

    if same_set(k1, k2):
        return Certificate.projector(method, Singleton(np.zeros(k1.dim)), gamma=0.0, operator=operator)
    if is_whole_space(k1):
        result = k2.polar() or PolarCone(k2)
        return Certificate.projector(method, result, gamma=0.0, operator=operator)

    points = default_points(k1.dim, cfg)
    residuals = difference_residual(k1, k2)(points)
    limits = DIFFERENCE_TOL * (1.0 + np.linalg.norm(points, axis=1))
    outcome = classify_values(residuals, points, cfg, "P_K2 P_K1 x = P_K2 x")

    if np.all(residuals <= limits):
        return Certificate.projector(
            method,
            ConeIntersection(k1, PolarCone(k2)),
            gamma=0.0,
            confidence=Confidence.SAMPLED,
            evidence=outcome.evidence,
            operator=operator,
        )
    margin = WITNESS_FACTOR * (cfg.atol + cfg.rtol * np.sum(points**2, axis=1))
    idx = first_violation(residuals, margin)
    if idx is None:
        return Certificate.inconclusive(
            method, "P_K2 P_K1 deviates from P_K2 by less than the witness margin",
            evidence=outcome.evidence, operator=operator,
        )
    witness = pointwise_witness(WitnessKind.IDENTITY, points[idx], residuals[idx], "P_K2 P_K1 x = P_K2 x")
    return Certificate.refuted(
        method, witness, confidence=Confidence.SAMPLED, evidence=outcome.evidence, operator=operator
    )
