"""Least-norm element of cl(D − C): the gap vector between two sets.

v = P_{cl(D−C)}(0) is what the convex-combination rule needs to line the
sets up against an anchor. Catalog pairs whose difference is again a
catalog set are solved in closed form; everything else goes through
alternating projections, which converge to a best-approximation pair
(c, d) with v = d − c whenever such a pair exists.

Key function: set_difference_witness().
"""

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotSupported, UnsupportedExactProjection
from .sets import (
    Ball,
    Box,
    ConvexSet,
    Hyperplane,
    Polytope,
    Ray,
    Singleton,
    Subspace,
    Translate,
    orth_rows,
    same_set,
)

logger = logging.getLogger(__name__)

MAX_ITERATIONS = 10_000
GAP_TOL = 1e-12


@dataclass(frozen=True)
class DifferenceResult:
    """Gap vector plus how it was obtained."""

    vector: np.ndarray
    method: str
    exact: bool
    iterations: int = 0


# ── Normalization ────────────────────────────────────────────────────────


def _flatten(s: ConvexSet) -> ConvexSet:
    """Fold translates of shift-closed variants into the variant itself."""
    if not isinstance(s, Translate):
        return s
    base = _flatten(s.base)
    shift = s.shift
    if isinstance(base, Singleton):
        return Singleton(base.u + shift)
    if isinstance(base, Box):
        return Box(base.lower + shift, base.upper + shift)
    if isinstance(base, Ball):
        return Ball(base.center + shift, base.radius)
    if isinstance(base, Polytope):
        return Polytope(base.vertices + shift)
    if isinstance(base, Translate):
        return Translate(base.base, base.shift + shift)
    return Translate(base, shift)


def _split_translate(s: ConvexSet) -> tuple[ConvexSet, np.ndarray]:
    if isinstance(s, Translate):
        return s.base, s.shift
    return s, np.zeros(s.dim)


def _affine_parts(s: ConvexSet) -> tuple[np.ndarray, np.ndarray] | None:
    """(direction rows, point) for affine subspaces, None otherwise."""
    if isinstance(s, (Subspace, Hyperplane)):
        return s.direction_basis(), s.point()
    if isinstance(s, Translate):
        inner = _affine_parts(s.base)
        if inner is not None:
            return inner[0], inner[1] + s.shift
    return None


# ── Closed forms ─────────────────────────────────────────────────────────


def _self_difference_gap(base: ConvexSet, t: np.ndarray) -> np.ndarray | None:
    """v for cl((B + t) − B) = cl(B − B) + t, where B − B is symmetric.

    P_{t + (B−B)}(0) = t + P_{B−B}(−t) = t − P_{B−B}(t).
    """
    if isinstance(base, Singleton):
        return t.copy()
    if isinstance(base, Box):
        width = base.upper - base.lower
        return t - np.clip(t, -width, width)
    if isinstance(base, Ball):
        return t - Ball(np.zeros(base.dim), 2.0 * base.radius).project(t)
    if isinstance(base, Polytope):
        diffs = (base.vertices[:, None, :] - base.vertices[None, :, :]).reshape(-1, base.dim)
        return t - Polytope(diffs).project(t)
    if isinstance(base, Ray):
        u = base.direction
        return t - (t @ u) * u
    if base.is_cone:
        # K − K = span K for a convex cone
        basis = base.direction_basis()
        if basis is not None:
            return t - (t @ basis.T) @ basis
    return None


def _closed_form(c: ConvexSet, d: ConvexSet) -> tuple[np.ndarray, str] | None:
    zero = np.zeros(c.dim)
    if isinstance(c, Singleton):
        return d.project(c.u) - c.u, "singleton-left"
    if isinstance(d, Singleton):
        return d.u - c.project(d.u), "singleton-right"
    if c.is_cone and d.is_cone:
        return zero, "cones"
    if isinstance(c, Box) and isinstance(d, Box):
        return np.clip(zero, d.lower - c.upper, d.upper - c.lower), "boxes"
    if isinstance(c, Ball) and isinstance(d, Ball):
        diff = Ball(d.center - c.center, c.radius + d.radius)
        return diff.project(zero), "balls"
    if isinstance(c, Polytope) and isinstance(d, Polytope):
        diffs = (d.vertices[None, :, :] - c.vertices[:, None, :]).reshape(-1, c.dim)
        return Polytope(diffs).project(zero), "polytopes"
    affine_c, affine_d = _affine_parts(c), _affine_parts(d)
    if affine_c is not None and affine_d is not None:
        t = affine_d[1] - affine_c[1]
        span = orth_rows(np.vstack([affine_c[0], affine_d[0]]), c.dim)
        return t - (t @ span.T) @ span, "affine"
    base_c, shift_c = _split_translate(c)
    base_d, shift_d = _split_translate(d)
    if same_set(base_c, base_d):
        gap = _self_difference_gap(base_c, shift_d - shift_c)
        if gap is not None:
            return gap, "translates"
    return None


# ── Iterative fallback ───────────────────────────────────────────────────


def _alternating_projections(
    c: ConvexSet, d: ConvexSet, max_iterations: int, tol: float
) -> tuple[np.ndarray, int]:
    point_c = c.point()
    point_d = d.project(point_c)
    gap = float(np.linalg.norm(point_d - point_c))
    for iteration in range(1, max_iterations + 1):
        next_c = c.project(point_d)
        next_d = d.project(next_c)
        next_gap = float(np.linalg.norm(next_d - next_c))
        moved = float(np.linalg.norm(next_c - point_c))
        point_c, point_d = next_c, next_d
        if abs(gap - next_gap) <= tol and moved <= np.sqrt(tol) * (1.0 + np.linalg.norm(point_c)):
            return point_d - point_c, iteration
        gap = next_gap
    raise NotSupported(
        f"alternating projections between {c.variant} and {d.variant} "
        f"did not converge in {max_iterations} iterations"
    )


# ── Public API ───────────────────────────────────────────────────────────


def solve_set_difference(
    c: ConvexSet,
    d: ConvexSet,
    *,
    max_iterations: int = MAX_ITERATIONS,
    tol: float = GAP_TOL,
) -> DifferenceResult:
    """Compute P_{cl(D−C)}(0) with provenance."""
    if c.dim != d.dim:
        raise DimensionMismatch(f"sets have dimensions {c.dim} and {d.dim}")
    flat_c, flat_d = _flatten(c), _flatten(d)
    try:
        closed = _closed_form(flat_c, flat_d)
    except UnsupportedExactProjection as e:
        raise NotSupported(str(e)) from e
    if closed is not None:
        vector, method = closed
        logger.debug("Difference witness via %s rule", method)
        return DifferenceResult(vector=vector, method=method, exact=True)

    try:
        vector, iterations = _alternating_projections(flat_c, flat_d, max_iterations, tol)
    except UnsupportedExactProjection as e:
        raise NotSupported(str(e)) from e
    logger.debug("Difference witness via alternating projections (%d iterations)", iterations)
    return DifferenceResult(
        vector=vector, method="alternating-projections", exact=False, iterations=iterations
    )


def set_difference_witness(c: ConvexSet, d: ConvexSet) -> np.ndarray:
    """v = P_{cl(D−C)}(0)."""
    return solve_set_difference(c, d).vector
