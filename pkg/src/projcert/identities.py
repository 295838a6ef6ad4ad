"""Pointwise identities behind the characterization theorems.

identity_suite() evaluates both sides of each identity at the given points
for the projections xᵢ = P_{Cᵢ}x of a combination and reports residuals
scaled by the magnitude of the terms involved:

  - expansion:  ‖x − Σαᵢxᵢ‖² = (1−α)‖x‖² + Σαᵢ‖x−xᵢ‖²
                + (α−1)Σαᵢ‖xᵢ‖² − ½ΣΣαᵢαⱼ‖xᵢ−xⱼ‖²
  - cross-terms (all αᵢ = 1):  ‖x − Σxᵢ‖² = (1−m)‖x‖² + Σ‖x−xᵢ‖²
                + Σ_{i≠j}⟨xᵢ, xⱼ⟩
  - envelope:   q(x − ΣαᵢPᵢx) = ½Σαᵢdᵢ² − (α−1)q(x)
                + (α−1)Σαᵢq(Pᵢx) − ½ΣΣαᵢαⱼq(Pᵢx − Pⱼx)
  - cone (per cone term K): ‖P_K x‖² = ⟨x, P_K x⟩, and the Moreau
    decomposition P_K x + P_{K⊖}x = x with ⟨P_K x, P_{K⊖}x⟩ = 0
  - cone pair (K, S):  ⟨P_{K⊖}x, P_{S⊖}x⟩ + ‖P_K x‖² + ‖P_S x‖²
                = ‖x‖² + ⟨P_K x, P_S x⟩
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any

import numpy as np

from .combination import Combination
from .sets import ConvexSet, PolarCone

logger = logging.getLogger(__name__)

IDENTITY_TOL = 1e-9
MOREAU_TOL = 1e-10


@dataclass
class IdentityReport:
    passed: bool
    max_residual: float
    n_points: int
    residuals: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "check": "identities",
            "pass": self.passed,
            "max_residual": self.max_residual,
            "n_points": self.n_points,
            "residuals": self.residuals,
        }


def _sq(v: np.ndarray) -> np.ndarray:
    return np.sum(v * v, axis=-1)


def _dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.sum(a * b, axis=-1)


def _scaled(lhs: np.ndarray, rhs: np.ndarray, magnitude: np.ndarray) -> float:
    return float(np.max(np.abs(lhs - rhs) / (1.0 + magnitude)))


def polar_projection(cone: ConvexSet, xs: np.ndarray) -> np.ndarray:
    """P_{K⊖} via the simpler polar descriptor when one exists."""
    dual = cone.polar()
    if dual is None:
        dual = PolarCone(cone)
    return dual.project_many(xs)


def expansion_residuals(xs: np.ndarray, comb: Combination) -> dict[str, float]:
    """Residuals of the expansion, cross-term and envelope identities."""
    alphas = np.array(comb.coefficients)
    alpha = comb.alpha
    proj = comb.projections(xs)  # (m_terms, points, n)
    weighted = np.tensordot(alphas, proj, axes=1)

    norms_x = _sq(xs)
    norms_p = _sq(proj)
    dist_sq = _sq(xs[None, :, :] - proj)
    pair_sq = _sq(proj[:, None, :, :] - proj[None, :, :, :])
    pair_term = np.einsum("i,j,ijk->k", alphas, alphas, pair_sq)
    magnitude = (1.0 + np.abs(alpha)) * norms_x + np.abs(alphas) @ (norms_p + dist_sq)
    magnitude = magnitude + np.einsum("i,j,ijk->k", np.abs(alphas), np.abs(alphas), pair_sq)

    lhs = _sq(xs - weighted)
    rhs = (1 - alpha) * norms_x + alphas @ dist_sq + (alpha - 1) * (alphas @ norms_p) - 0.5 * pair_term
    residuals = {"expansion": _scaled(lhs, rhs, magnitude)}

    if np.all(alphas == 1.0):
        gram = np.einsum("ipk,jpk->ijp", proj, proj)
        cross = gram.sum(axis=(0, 1)) - np.einsum("iip->p", gram)
        rhs_cross = (1 - len(comb)) * norms_x + dist_sq.sum(axis=0) + cross
        residuals["cross-terms"] = _scaled(lhs, rhs_cross, magnitude)

    distances = np.stack([[s.distance_sq(x) for x in xs] for s in comb.sets])
    lhs_q = 0.5 * lhs
    rhs_q = (
        0.5 * (alphas @ distances)
        - (alpha - 1) * 0.5 * norms_x
        + (alpha - 1) * 0.5 * (alphas @ norms_p)
        - 0.25 * pair_term
    )
    residuals["envelope"] = _scaled(lhs_q, rhs_q, magnitude)
    return residuals


def cone_residuals(xs: np.ndarray, cones: list[ConvexSet]) -> dict[str, float]:
    """Residuals of the single-cone and cone-pair identities."""
    residuals: dict[str, float] = {}
    norms_x = _sq(xs)
    proj = [k.project_many(xs) for k in cones]
    polar = [polar_projection(k, xs) for k in cones]

    worst_norm = worst_moreau = worst_orth = 0.0
    for pk, pp in zip(proj, polar):
        worst_norm = max(worst_norm, _scaled(_sq(pk), _dot(xs, pk), norms_x))
        worst_moreau = max(worst_moreau, float(np.max(np.linalg.norm(pk + pp - xs, axis=1) / (1.0 + np.sqrt(norms_x)))))
        worst_orth = max(worst_orth, _scaled(_dot(pk, pp), np.zeros(len(xs)), norms_x))
    if cones:
        residuals["cone-norm"] = worst_norm
        residuals["moreau-sum"] = worst_moreau
        residuals["moreau-orthogonality"] = worst_orth

    worst_pair = 0.0
    for i, j in combinations(range(len(cones)), 2):
        lhs = _dot(polar[i], polar[j]) + _sq(proj[i]) + _sq(proj[j])
        rhs = norms_x + _dot(proj[i], proj[j])
        worst_pair = max(worst_pair, _scaled(lhs, rhs, norms_x))
    if len(cones) > 1:
        residuals["cone-pair"] = worst_pair
    return residuals


def identity_suite(points: np.ndarray, comb: Combination) -> IdentityReport:
    """Evaluate every applicable identity at the given points."""
    xs = np.atleast_2d(np.asarray(points, dtype=float))
    residuals = expansion_residuals(xs, comb)
    cones = [s for s in comb.sets if s.is_cone]
    residuals.update(cone_residuals(xs, cones))

    limits = {name: MOREAU_TOL if name.startswith("moreau") else IDENTITY_TOL for name in residuals}
    passed = all(residuals[name] <= limits[name] for name in residuals)
    max_residual = max(residuals.values())
    if not passed:
        failing = [name for name in residuals if residuals[name] > limits[name]]
        logger.warning("Identity residuals above tolerance: %s", ", ".join(failing))
    return IdentityReport(
        passed=passed,
        max_residual=max_residual,
        n_points=int(xs.shape[0]),
        residuals=residuals,
    )
