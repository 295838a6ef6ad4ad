"""General linear combinations Σ αᵢ P_{Cᵢ}.

decide_linear_combination() first simplifies the combination: identical
sets are merged, zero coefficients dropped, singleton terms folded into a
constant shift. It then routes the remainder:

  - nothing left           → the shift itself, {s};
  - one unit term          → the shifted-projector rule through the pair sum;
  - one term α ∉ {0, 1}    → the scalar rule;
  - all coefficients 1     → the sum rules;
  - convex weights         → the convex rule;
  - weights summing to 1   → the affine formula, verified pointwise;
  - (1, K₁), (−1, K₂)      → the cone difference rule;
  - anything else          → monotonicity plus constancy of g.
"""

import logging
import math
from collections.abc import Sequence

import numpy as np

from ..certificate import Certificate, Confidence, Witness, WitnessKind
from ..certifier import monotonicity_check
from ..combination import Combination, Term
from ..difference import solve_set_difference
from ..errors import InvalidWeights, NotSupported
from ..sampling import STREAM_RESAMPLE, WITNESS_FACTOR, SampleConfig, sample_pairs, sample_points
from ..sets import ConvexSet, Singleton, Translate
from .cones import cone_difference_projector
from .criteria import (
    default_points,
    g_quantity,
    g_values,
    member_points,
    run_constancy,
)
from .sums import decide_pair_sum, decide_sum

logger = logging.getLogger(__name__)

WEIGHT_TOL = 1e-12
ORTHOGONALITY_TOL = 1e-9
HAUSDORFF_TOL = 1e-7
POINTWISE_TOL = 1e-9
CHECK_SAMPLES = 64


# ── Simplification ───────────────────────────────────────────────────────


def merge_terms(comb: Combination) -> list[Term]:
    """Merge structurally equal sets and drop zero coefficients."""
    merged: dict[str, list[float]] = {}
    first: dict[str, ConvexSet] = {}
    for term in comb.terms:
        key = term.set.key()
        merged.setdefault(key, []).append(term.coefficient)
        first.setdefault(key, term.set)
    scale = max(abs(a) for a in comb.coefficients)
    terms = []
    for key, coefficients in merged.items():
        total = math.fsum(coefficients)
        if abs(total) > WEIGHT_TOL * scale:
            terms.append(Term(total, first[key]))
    return terms


def fold_singletons(terms: Sequence[Term], dim: int) -> tuple[list[Term], np.ndarray]:
    """Split off singleton terms as the constant shift Σ αᵢuᵢ."""
    shift = np.zeros(dim)
    rest = []
    for term in terms:
        if isinstance(term.set, Singleton):
            shift = shift + term.coefficient * term.set.u
        else:
            rest.append(term)
    return rest, shift


def _is_convex(coefficients: Sequence[float]) -> bool:
    return all(0.0 < a <= 1.0 for a in coefficients) and abs(math.fsum(coefficients) - 1.0) <= WEIGHT_TOL


def _check_pointwise(comb: Combination, result: ConvexSet, cfg: SampleConfig) -> float:
    """max ‖Σαᵢ P_i x − P_result x‖ relative to ‖x‖ on fresh samples."""
    points = sample_points(comb.dim, cfg, stream=STREAM_RESAMPLE, count=CHECK_SAMPLES)
    gaps = np.linalg.norm(comb.evaluate_many(points) - result.project_many(points), axis=1)
    return float(np.max(gaps / (1.0 + np.linalg.norm(points, axis=1))))


# ── Scalar multiples ─────────────────────────────────────────────────────


def decide_scalar_multiple(alpha: float, c: ConvexSet, cfg: SampleConfig | None = None) -> Certificate:
    """α·P_C is a projector iff α ∈ {0, 1} or C is a singleton."""
    cfg = cfg or SampleConfig()
    alpha = float(alpha)
    comb = Combination.of([(alpha, c)])
    operator = comb.operator()
    method = "scalar-multiple"
    if alpha == 0.0:
        return Certificate.projector(method, Singleton(np.zeros(c.dim)), operator=operator)
    if alpha == 1.0:
        return Certificate.projector(method, c, operator=operator)
    if isinstance(c, Singleton):
        return Certificate.projector(method, Singleton(alpha * c.u), operator=operator)

    # g = (α − 1)α·q(P_C x) varies because ‖·‖ is not constant on a segment of C
    members = member_points(c, cfg)
    outcome = run_constancy(g_quantity(comb), members, cfg, "(α−1)α·q(P_C x) is constant")
    if outcome.witness is None:
        return Certificate.inconclusive(
            method, "C is not a singleton but its sampled points have equal norms", operator=operator
        )
    return Certificate.refuted(method, outcome.witness, evidence=outcome.evidence, operator=operator)


# ── Convex and affine weights ────────────────────────────────────────────


def _anchor(coefficients: Sequence[float]) -> int:
    """First index of the largest weight."""
    return int(np.argmax(np.array(coefficients)))


def _orthogonal_to_directions(v: np.ndarray, base: ConvexSet, cfg: SampleConfig) -> bool:
    """v ∈ (C − C)^⊥, exactly through the direction basis when known."""
    basis = base.direction_basis()
    if basis is not None:
        return float(np.linalg.norm(basis @ v)) <= ORTHOGONALITY_TOL * (1.0 + float(np.linalg.norm(v)))
    members = member_points(base, cfg, count=CHECK_SAMPLES)
    spread = members @ v
    return float(spread.max() - spread.min()) <= ORTHOGONALITY_TOL * (1.0 + float(np.abs(spread).max()))


def _hausdorff_close(a: ConvexSet, b: ConvexSet, cfg: SampleConfig) -> bool:
    """Sampled two-sided check that a and b are the same set."""
    for inner, outer in ((a, b), (b, a)):
        members = member_points(inner, cfg, count=CHECK_SAMPLES)
        gaps = np.linalg.norm(members - outer.project_many(members), axis=1)
        if np.any(gaps > HAUSDORFF_TOL * (1.0 + np.linalg.norm(members, axis=1))):
            return False
    return True


def _translate_structure(comb: Combination, cfg: SampleConfig) -> tuple[ConvexSet, np.ndarray] | str:
    """Anchor set C_k and Σαᵢvᵢ when every Cᵢ = C_k + vᵢ with vᵢ ⊥ (C_k − C_k).

    Returns a diagnostic string when the structure fails or cannot be computed.
    """
    k = _anchor(comb.coefficients)
    base = comb.sets[k]
    shift = np.zeros(comb.dim)
    for i, (alpha, s) in enumerate(zip(comb.coefficients, comb.sets)):
        if i == k:
            continue
        try:
            v = solve_set_difference(base, s).vector
        except NotSupported as e:
            return f"difference witness for term {i}: {e}"
        if not _orthogonal_to_directions(v, base, cfg):
            return f"term {i} is not a translate of term {k} orthogonal to its directions"
        if not _hausdorff_close(s, Translate(base, v), cfg):
            return f"term {i} differs from term {k} shifted by its difference witness"
        shift = shift + alpha * v
    return base, shift


def _translated(base: ConvexSet, shift: np.ndarray) -> ConvexSet:
    if float(np.linalg.norm(shift)) <= WEIGHT_TOL * (1.0 + float(np.linalg.norm(base.point()))):
        return base
    return Translate(base, shift)


def decide_convex_combination(comb: Combination, cfg: SampleConfig | None = None) -> Certificate:
    """Σ αᵢP_{Cᵢ} with αᵢ ∈ (0, 1], Σαᵢ = 1: a projector iff all Cᵢ are translates
    C_k + vᵢ with vᵢ ⊥ (C_k − C_k); the range is then C_k + Σαᵢvᵢ.
    """
    cfg = cfg or SampleConfig()
    if not _is_convex(comb.coefficients):
        raise InvalidWeights(f"weights {comb.coefficients} are not convex (each in (0, 1], summing to 1)")
    operator = comb.operator()
    method = "convex-combination"
    structure = _translate_structure(comb, cfg)
    gamma = float(g_values(comb, np.zeros((1, comb.dim)))[0])

    if isinstance(structure, tuple):
        result = _translated(*structure)
        gap = _check_pointwise(comb, result, cfg)
        if gap > POINTWISE_TOL:
            return Certificate.inconclusive(
                method, f"translate structure holds but the operator differs by {gap:.3e}", operator=operator
            )
        return Certificate.projector(method, result, gamma=gamma, confidence=Confidence.SAMPLED, operator=operator)

    logger.debug("Convex rule: %s", structure)
    outcome = run_constancy(g_quantity(comb), default_points(comb.dim, cfg), cfg, "g(x) is constant")
    if outcome.witness is None:
        return Certificate.inconclusive(method, structure, evidence=outcome.evidence, operator=operator)
    return Certificate.refuted(
        method, outcome.witness, confidence=Confidence.SAMPLED, evidence=outcome.evidence, operator=operator
    )


def _affine(comb: Combination, cfg: SampleConfig) -> Certificate | None:
    """Weights summing to 1 but not convex: C_k + Σαᵢvᵢ when it matches pointwise."""
    structure = _translate_structure(comb, cfg)
    if not isinstance(structure, tuple):
        logger.debug("Affine formula does not apply: %s", structure)
        return None
    result = _translated(*structure)
    if _check_pointwise(comb, result, cfg) > POINTWISE_TOL:
        return None
    gamma = float(g_values(comb, np.zeros((1, comb.dim)))[0])
    return Certificate.projector(
        "affine-combination", result, gamma=gamma, confidence=Confidence.SAMPLED, operator=comb.operator()
    )


# ── The general test ─────────────────────────────────────────────────────


def decide_generic(
    comb: Combination, cfg: SampleConfig | None = None, *, method: str = "monotone-constancy"
) -> Certificate:
    """Monotonicity of T and constancy of g; the range is left unknown."""
    cfg = cfg or SampleConfig()
    operator = comb.operator()

    mono = monotonicity_check(operator, cfg)
    if not mono.passed and mono.min_pairing is not None and mono.min_pairing < -WITNESS_FACTOR * cfg.atol:
        xs, ys = sample_pairs(comb.dim, cfg)
        pairing = np.sum((operator.many(xs) - operator.many(ys)) * (xs - ys), axis=1)
        idx = int(np.argmin(pairing))
        witness = Witness(
            kind=WitnessKind.MONOTONICITY,
            points=(xs[idx].copy(), ys[idx].copy()),
            values=(float(pairing[idx]),),
            condition="⟨Tx − Ty, x − y⟩ ≥ 0",
        )
        return Certificate.refuted(method, witness, confidence=Confidence.SAMPLED, operator=operator)

    outcome = run_constancy(g_quantity(comb), default_points(comb.dim, cfg), cfg, "g(x) is constant")
    if outcome.witness is not None:
        return Certificate.refuted(
            method, outcome.witness, confidence=Confidence.SAMPLED, evidence=outcome.evidence, operator=operator
        )
    if not mono.passed:
        return Certificate.inconclusive(
            method, f"monotonicity pairing {mono.min_pairing:.3e} is slightly negative",
            evidence=outcome.evidence, operator=operator,
        )
    if not outcome.constant:
        return Certificate.inconclusive(method, outcome.note(), evidence=outcome.evidence, operator=operator)
    return Certificate.projector(
        method,
        None,
        gamma=outcome.gamma,
        confidence=Confidence.SAMPLED,
        evidence=outcome.evidence,
        diagnostics="range not constructed",
        operator=operator,
    )


# ── Entry point ──────────────────────────────────────────────────────────


def _route(comb: Combination, cfg: SampleConfig) -> Certificate:
    dim = comb.dim
    terms = merge_terms(comb)
    rest, shift = fold_singletons(terms, dim)
    has_shift = bool(np.any(shift))
    logger.debug("Simplified to %d set term(s), shift %s", len(rest), shift)

    if not rest:
        return Certificate.projector("simplified-constant", Singleton(shift))

    if len(rest) == 1:
        (term,) = rest
        if term.coefficient == 1.0:
            if not has_shift:
                return Certificate.projector("single-projector", term.set)
            return decide_pair_sum(Singleton(shift), term.set, cfg)
        if not has_shift:
            return decide_scalar_multiple(term.coefficient, term.set, cfg)
        return decide_generic(Combination(tuple(terms)), cfg)

    coefficients = [t.coefficient for t in rest]
    if all(a == 1.0 for a in coefficients):
        sets = [t.set for t in rest]
        if has_shift:
            sets.insert(0, Singleton(shift))
        return decide_sum(sets, cfg)

    merged = Combination(tuple(terms))
    if _is_convex(merged.coefficients):
        return decide_convex_combination(merged, cfg)
    if abs(merged.alpha - 1.0) <= WEIGHT_TOL:
        affine = _affine(merged, cfg)
        if affine is not None:
            return affine

    if (
        not has_shift
        and len(rest) == 2
        and sorted(coefficients) == [-1.0, 1.0]
        and all(t.set.is_cone for t in rest)
    ):
        plus = rest[0] if rest[0].coefficient == 1.0 else rest[1]
        minus = rest[1] if plus is rest[0] else rest[0]
        return cone_difference_projector(plus.set, minus.set, cfg)
    if len(rest) == 2 and sorted(coefficients) == [-1.0, 1.0]:
        return decide_generic(merged, cfg, method="difference-criterion")

    return decide_generic(merged, cfg)


def decide_linear_combination(comb: Combination, cfg: SampleConfig | None = None) -> Certificate:
    """Decide whether Σ αᵢ P_{Cᵢ} is a projector, and onto what."""
    cfg = cfg or SampleConfig()
    cert = _route(comb, cfg)
    # Certificates describe the caller's combination, not the simplified one
    cert = cert.with_operator(comb.operator())
    logger.info("%s: %s (%s, %s)", comb.label(), cert.verdict, cert.method, cert.confidence)
    return cert
