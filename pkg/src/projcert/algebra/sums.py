"""Sums of projectors: P_C + P_D, families of sets, families of subspaces.

Rules for a pair are tried in a fixed order and the first that applies
decides:

  1. singletons: {u} + {v}, and {u} + C (a projector iff u ⊥ C − C);
  2. structure: orthogonal linear spans, and a subspace V with P_C + P_V
     a projector iff C ⊥ V;
  3. cones: polar pairs, truncations of polar pairs, rays, then sampled
     ⟨P_K x, P_S x⟩ ≡ 0;
  4. the interval dichotomy on the real line;
  5. sampled constancy of ⟨P_C x, P_D x⟩.

Every IsProjector is then held against the distance identity and, when an
operand is a cone K, against the inclusion of the other set in K⊖.
"""

import logging
from collections.abc import Sequence
from itertools import combinations

import numpy as np

from ..certificate import Certificate, Confidence, Witness, WitnessKind
from ..certifier import OperatorHandle
from ..combination import Combination
from ..errors import DimensionMismatch, InvalidDescriptor
from ..sampling import STREAM_RESAMPLE, WITNESS_FACTOR, SampleConfig, sample_points
from ..sets import ConvexSet, Ray, Singleton, Subspace, TruncatedCone, linear_basis
from .cones import decide_cone_family_sum, decide_ray_pair, refute_ray_pair
from .criteria import (
    DISTANCE_IDENTITY_TOL,
    STRUCTURE_TOL,
    ConstancyOutcome,
    are_polar_pair,
    default_points,
    distance_identity_gap,
    g_quantity,
    member_points,
    pair_product,
    run_constancy,
    simplify_sum,
)
from .interval import decide_1d_pair

logger = logging.getLogger(__name__)

IDENTITY_SAMPLES = 64
INCLUSION_TOL = 1e-7


# ── Post-checks ──────────────────────────────────────────────────────────


def cone_inclusion_holds(c: ConvexSet, k: ConvexSet, cfg: SampleConfig) -> bool:
    """Sampled check of C ⊆ K⊖, necessary when P_C + P_K is a projector."""
    members = member_points(c, cfg, count=IDENTITY_SAMPLES)
    tol = INCLUSION_TOL * (1.0 + float(np.max(np.linalg.norm(members, axis=1))))
    return bool(np.all(k.polar_contains(members, tol)))


def confirm_sum(cert: Certificate, sets: Sequence[ConvexSet], cfg: SampleConfig) -> Certificate:
    """Downgrade an IsProjector whose result fails the post-checks."""
    if not cert.is_projector or cert.result is None or cert.gamma is None:
        return cert
    comb = Combination.sum_of(sets)
    points = sample_points(comb.dim, cfg, stream=STREAM_RESAMPLE, count=IDENTITY_SAMPLES)
    gap = distance_identity_gap(comb, cert.result, cert.gamma, points)
    if gap > DISTANCE_IDENTITY_TOL:
        logger.warning("Distance identity off by %.3e for %s", gap, cert.method)
        return cert.downgrade(f"distance identity fails by {gap:.3e}")

    if len(sets) == 2:
        for k, other in ((sets[0], sets[1]), (sets[1], sets[0])):
            if k.is_cone and not cone_inclusion_holds(other, k, cfg):
                return cert.downgrade("the other operand is not contained in the polar of the cone")
    return cert


# ── Pair rules ───────────────────────────────────────────────────────────


def _from_constancy(
    outcome: ConstancyOutcome,
    method: str,
    result: ConvexSet,
    operator: OperatorHandle,
    *,
    confidence: Confidence = Confidence.SAMPLED,
    gamma: float | None = None,
) -> Certificate:
    if outcome.witness is not None:
        return Certificate.refuted(
            method, outcome.witness, confidence=confidence, evidence=outcome.evidence, operator=operator
        )
    if outcome.constant:
        return Certificate.projector(
            method,
            result,
            gamma=outcome.gamma if gamma is None else gamma,
            confidence=Confidence.SAMPLED,
            evidence=outcome.evidence,
            operator=operator,
        )
    return Certificate.inconclusive(method, outcome.note(), evidence=outcome.evidence, operator=operator)


def _search_points(dim: int, cfg: SampleConfig) -> np.ndarray:
    """Samples at scale, 10·scale and 100·scale for structural refutations."""
    base = default_points(dim, cfg)
    return np.vstack([base, 10.0 * base[1:], 100.0 * base[1:]])


def _singleton_shift(u_set: Singleton, other: ConvexSet, cfg: SampleConfig, operator: OperatorHandle) -> Certificate:
    """{u} + C: a projector iff u ⊥ (C − C); γ = ⟨u, c⟩ for any c ∈ C."""
    method = "singleton-shift"
    u = u_set.u
    result = simplify_sum([u_set, other])
    quantity = lambda xs: other.project_many(xs) @ u  # noqa: E731
    condition = "⟨u, P_C x⟩ is constant"
    basis = other.direction_basis()
    if basis is None:
        outcome = run_constancy(quantity, default_points(u.size, cfg), cfg, condition)
        return _from_constancy(outcome, method, result, operator)

    leak = float(np.linalg.norm(basis @ u))
    if leak <= STRUCTURE_TOL * max(1.0, float(np.linalg.norm(u))):
        gamma = float(u @ other.point())
        return Certificate.projector(method, result, gamma=gamma, operator=operator)

    outcome = run_constancy(quantity, _search_points(u.size, cfg), cfg, condition)
    if outcome.witness is None:
        return Certificate.inconclusive(
            method, f"u leaves the direction space by {leak:.3e} but no sample shows it", operator=operator
        )
    return Certificate.refuted(method, outcome.witness, evidence=outcome.evidence, operator=operator)


def _subspace_rule(
    v: Subspace, other: ConvexSet, cfg: SampleConfig, operator: OperatorHandle, result: ConvexSet
) -> Certificate:
    """P_C + P_V with V a subspace: a projector iff C ⊥ V."""
    method = "subspace-orthogonality"
    members = member_points(other, cfg)
    leaks = np.sum(v.project_many(members) ** 2, axis=1)
    idx = int(np.argmax(leaks))
    leak = float(leaks[idx])
    tol = cfg.tolerance(float(np.max(np.sum(members**2, axis=1))))
    exact = linear_basis(other) is not None
    if leak > WITNESS_FACTOR * tol:
        # x = c ∈ C gives ⟨c, P_V c⟩ = ‖P_V c‖², x = 0 gives 0
        witness = Witness(
            kind=WitnessKind.CONSTANCY,
            points=(np.zeros(v.dim), members[idx].copy()),
            values=(0.0, leak),
            condition="⟨P_C x, P_V x⟩ is constant",
        )
        return Certificate.refuted(
            method, witness, confidence=Confidence.EXACT if exact else Confidence.SAMPLED, operator=operator
        )
    if exact:
        return Certificate.inconclusive(method, "span of C meets V but no member shows it", operator=operator)
    if leak <= tol:
        return Certificate.projector(method, result, gamma=0.0, confidence=Confidence.SAMPLED, operator=operator)
    return Certificate.inconclusive(method, f"leak {leak:.3e} into V is below the witness margin", operator=operator)


def _cone_pair(c: ConvexSet, d: ConvexSet, cfg: SampleConfig, operator: OperatorHandle, result: ConvexSet) -> Certificate:
    if are_polar_pair(c, d):
        return Certificate.projector("moreau", result, gamma=0.0, operator=operator)
    if isinstance(c, Ray) and isinstance(d, Ray):
        if decide_ray_pair(c.direction, d.direction):
            return Certificate.projector("ray-pair", result, gamma=0.0, operator=operator)
        units = np.array([c.direction, d.direction])
        return refute_ray_pair(units, 0, 1, operator, cfg, "ray-pair")
    outcome = run_constancy(pair_product(c, d), default_points(c.dim, cfg), cfg, "⟨P_K x, P_S x⟩ is constant")
    return _from_constancy(outcome, "cone-pair", result, operator, gamma=0.0)


def _decide_pair(c: ConvexSet, d: ConvexSet, cfg: SampleConfig, operator: OperatorHandle) -> Certificate:
    # 1. singletons
    if isinstance(c, Singleton) and isinstance(d, Singleton):
        return Certificate.projector(
            "singleton-pair", Singleton(c.u + d.u), gamma=float(c.u @ d.u), operator=operator
        )
    if isinstance(c, Singleton):
        return _singleton_shift(c, d, cfg, operator)
    if isinstance(d, Singleton):
        return _singleton_shift(d, c, cfg, operator)

    result = simplify_sum([c, d])

    # 2. structure
    lc, ld = linear_basis(c), linear_basis(d)
    if lc is not None and ld is not None and np.max(np.abs(lc @ ld.T), initial=0.0) <= STRUCTURE_TOL:
        return Certificate.projector("orthogonal-spans", result, gamma=0.0, operator=operator)
    for v, other in ((d, c), (c, d)):
        if isinstance(v, Subspace):
            return _subspace_rule(v, other, cfg, operator, result)

    # 3. cones
    if isinstance(c, TruncatedCone) and isinstance(d, TruncatedCone) and are_polar_pair(c.cone, d.cone):
        return Certificate.projector("truncated-cones", result, gamma=0.0, operator=operator)
    if c.is_cone and d.is_cone:
        return _cone_pair(c, d, cfg, operator, result)

    # 4. the real line
    if c.dim == 1:
        return decide_1d_pair(c, d, cfg)

    # 5. generic
    outcome = run_constancy(pair_product(c, d), default_points(c.dim, cfg), cfg, "⟨P_C x, P_D x⟩ is constant")
    return _from_constancy(outcome, "pair-constancy", result, operator)


def decide_pair_sum(c: ConvexSet, d: ConvexSet, cfg: SampleConfig | None = None) -> Certificate:
    """Decide whether P_C + P_D is a projector, and onto what."""
    cfg = cfg or SampleConfig()
    if c.dim != d.dim:
        raise DimensionMismatch(f"sets have dimensions {c.dim} and {d.dim}")
    operator = Combination.sum_of((c, d)).operator()
    cert = _decide_pair(c, d, cfg, operator)
    logger.debug("Pair sum %s + %s: %s via %s", c.variant, d.variant, cert.verdict, cert.method)
    return confirm_sum(cert, (c, d), cfg)


# ── Families ─────────────────────────────────────────────────────────────


def decide_subspace_sum(subspaces: Sequence[ConvexSet], cfg: SampleConfig | None = None) -> Certificate:
    """Σ P_{Vᵢ} over subspaces is a projector iff the Vᵢ are pairwise orthogonal."""
    if not subspaces:
        raise InvalidDescriptor("a subspace family needs at least one subspace")
    for s in subspaces:
        if not isinstance(s, Subspace):
            raise InvalidDescriptor(f"expected subspace descriptors, got {s.variant}")
    if len({s.dim for s in subspaces}) > 1:
        raise DimensionMismatch("subspaces differ in dimension")
    spaces: list[Subspace] = list(subspaces)  # type: ignore[arg-type]
    operator = Combination.sum_of(spaces).operator()
    method = "orthogonal-subspaces"

    for i, j in combinations(range(len(spaces)), 2):
        cross = spaces[i].basis @ spaces[j].basis.T
        if cross.size == 0:
            continue
        left, sigma, _ = np.linalg.svd(cross)
        if sigma[0] > STRUCTURE_TOL:
            a = left[:, 0] @ spaces[i].basis
            witness = Witness(
                kind=WitnessKind.CONSTANCY,
                points=(np.zeros(a.size), a),
                values=(0.0, float(sigma[0] ** 2)),
                condition=f"⟨P_V{i} x, P_V{j} x⟩ is constant",
            )
            return Certificate.refuted(method, witness, operator=operator)
    return Certificate.projector(method, simplify_sum(spaces), gamma=0.0, operator=operator)


def decide_sum(sets: Sequence[ConvexSet], cfg: SampleConfig | None = None) -> Certificate:
    """Decide Σ P_{Cᵢ} with unit coefficients."""
    cfg = cfg or SampleConfig()
    sets = list(sets)
    if not sets:
        raise InvalidDescriptor("a sum needs at least one set")
    if len({s.dim for s in sets}) > 1:
        raise DimensionMismatch("sets differ in dimension")
    comb = Combination.sum_of(sets)
    operator = comb.operator()

    if len(sets) == 1:
        return Certificate.projector("single-projector", sets[0], operator=operator)
    if all(isinstance(s, Subspace) for s in sets):
        return decide_subspace_sum(sets, cfg)
    if all(s.is_cone for s in sets):
        return decide_cone_family_sum(sets, cfg)
    if len(sets) == 2:
        return decide_pair_sum(sets[0], sets[1], cfg)

    # Pairwise projectors make every partial sum a projector
    gamma = 0.0
    confidence = Confidence.EXACT
    for i, j in combinations(range(len(sets)), 2):
        pair = decide_pair_sum(sets[i], sets[j], cfg)
        if not pair.is_projector or pair.gamma is None:
            break
        gamma += pair.gamma
        if pair.confidence is Confidence.SAMPLED:
            confidence = Confidence.SAMPLED
    else:
        cert = Certificate.projector(
            "pairwise-sums", simplify_sum(sets), gamma=gamma, confidence=confidence, operator=operator
        )
        return confirm_sum(cert, sets, cfg)

    outcome = run_constancy(g_quantity(comb), default_points(comb.dim, cfg), cfg, "Σ_{i<j} ⟨P_i x, P_j x⟩ is constant")
    cert = _from_constancy(outcome, "cross-term-constancy", simplify_sum(sets), operator)
    return confirm_sum(cert, sets, cfg)
