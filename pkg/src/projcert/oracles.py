"""Projection oracles that do not use the closed-form projectors.

Each oracle reaches P_C x by a route independent of ConvexSet.project(),
so comparing the two catches bugs in either:

  - Polytope: away-step Frank–Wolfe on ½‖y − x‖² over the vertex hull.
  - FinitelyGeneratedCone: non-negative least squares on the generators.
  - ConeIntersection: Dykstra's algorithm on the two cones.
  - MinkowskiSum: block-coordinate minimization over the parts.
  - Everything else, dimension ≤ 3: a direction-search grid oracle that
    only queries the definitional membership predicate contains().

Key function: oracle_project().
"""

import logging
import math
from collections.abc import Callable
from typing import Literal

import numpy as np
import scipy.optimize

from .errors import DidNotConverge, UnsupportedDimension
from .sets import (
    ConeIntersection,
    ConvexSet,
    FinitelyGeneratedCone,
    MinkowskiSum,
    Polytope,
)

logger = logging.getLogger(__name__)

MAX_ITERATIONS = 10_000
FW_GAP_TOL = 1e-13
# 2/(k+2) steps shrink the gap only like 1/k
OPEN_LOOP_GAP_TOL = 1e-4
DYKSTRA_TOL = 1e-12

# Grid oracle tuning
RHO_POINTS = 96
BISECTION_STEPS = 30
GOLDEN_STEPS = 40
TRUNCATION = 10.0  # oracle box is [−10·scale, 10·scale]ⁿ
ANGLES_2D = 720
SPHERE_3D = 2048
REFINE_2D = 65
REFINE_3D = 33
MAX_WIDENINGS = 4
MAX_LEVELS = 40

StepRule = Literal["away", "open-loop"]
Projector = Callable[[np.ndarray], np.ndarray]


# ── Frank–Wolfe ──────────────────────────────────────────────────────────


def frank_wolfe_project(
    vertices: np.ndarray,
    x: np.ndarray,
    *,
    step_rule: StepRule = "away",
    max_iterations: int = MAX_ITERATIONS,
    gap_tol: float | None = None,
) -> np.ndarray:
    """Minimize ½‖y − x‖² over conv(vertices).

    The default rule takes away steps with exact line search, which keeps
    the objective monotone and converges linearly on polytopes. The
    "open-loop" rule is the plain γₖ = 2/(k+2) conditional gradient.
    Stops when the Frank–Wolfe duality gap ⟨∇, y − s⟩ drops below
    gap_tol·(1 + ‖x‖²). The default gap_tol depends on the rule: FW_GAP_TOL
    for away steps, OPEN_LOOP_GAP_TOL for open-loop, whose result is then
    only within about √(2·gap) of the projection.
    """
    weights = np.zeros(vertices.shape[0])
    weights[int(np.argmin(np.linalg.norm(vertices - x, axis=1)))] = 1.0
    y = weights @ vertices
    if gap_tol is None:
        gap_tol = OPEN_LOOP_GAP_TOL if step_rule == "open-loop" else FW_GAP_TOL
    threshold = gap_tol * (1.0 + float(x @ x))

    for k in range(max_iterations):
        grad = y - x
        scores = vertices @ grad
        s = int(np.argmin(scores))
        gap = float(grad @ y - scores[s])
        if gap <= threshold:
            logger.debug("Frank-Wolfe converged in %d iterations (gap %.2e)", k, gap)
            return y

        if step_rule == "open-loop":
            gamma = 2.0 / (k + 2.0)
            weights *= 1.0 - gamma
            weights[s] += gamma
        else:
            active = np.flatnonzero(weights > 0)
            a = int(active[np.argmax(scores[active])])
            away_gap = float(scores[a] - grad @ y)
            if gap >= away_gap:
                direction = vertices[s] - y
                max_step = 1.0
            else:
                direction = y - vertices[a]
                max_step = weights[a] / (1.0 - weights[a])
            norm_sq = float(direction @ direction)
            gamma = min(max(-float(grad @ direction) / norm_sq, 0.0), max_step) if norm_sq else 0.0
            if gap >= away_gap:
                weights *= 1.0 - gamma
                weights[s] += gamma
            else:
                weights *= 1.0 + gamma
                weights[a] -= gamma
                if gamma >= max_step:
                    weights[a] = 0.0
        y = weights @ vertices

    raise DidNotConverge(
        f"Frank-Wolfe ({step_rule}) did not reach gap {threshold:.1e} "
        f"in {max_iterations} iterations"
    )


# ── Cones and splittings ─────────────────────────────────────────────────


def nnls_cone_project(generators: np.ndarray, x: np.ndarray) -> np.ndarray:
    """P_K x for K = Σ ℝ₊gᵢ: min ‖Gᵀμ − x‖ over μ ≥ 0."""
    coefficients, _ = scipy.optimize.nnls(generators.T, x)
    return generators.T @ coefficients


def dykstra_project(
    first: Projector,
    second: Projector,
    x: np.ndarray,
    *,
    max_iterations: int = MAX_ITERATIONS,
    tol: float = DYKSTRA_TOL,
) -> np.ndarray:
    """Projection onto the intersection of two closed convex sets."""
    y = x.copy()
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    for k in range(max_iterations):
        a = first(y + p)
        p = y + p - a
        y_next = second(a + q)
        q = a + q - y_next
        change = float(np.linalg.norm(y_next - y))
        y = y_next
        if change <= tol * (1.0 + float(np.linalg.norm(y))) and np.linalg.norm(a - y) <= math.sqrt(tol):
            logger.debug("Dykstra converged in %d iterations", k + 1)
            return y
    raise DidNotConverge(f"Dykstra did not converge in {max_iterations} iterations")


def block_coordinate_sum_project(
    parts: tuple[ConvexSet, ...],
    x: np.ndarray,
    *,
    max_iterations: int = MAX_ITERATIONS,
    tol: float = DYKSTRA_TOL,
) -> np.ndarray:
    """Projection onto C₁ + … + Cₘ: minimize ‖x − Σcᵢ‖ one block at a time."""
    pieces = [part.project(np.zeros_like(x)) for part in parts]
    for k in range(max_iterations):
        change = 0.0
        for i, part in enumerate(parts):
            others = sum((pieces[j] for j in range(len(parts)) if j != i), np.zeros_like(x))
            updated = part.project(x - others)
            change = max(change, float(np.linalg.norm(updated - pieces[i])))
            pieces[i] = updated
        if change <= tol * (1.0 + float(np.linalg.norm(x))):
            logger.debug("Block-coordinate sum projection converged in %d sweeps", k + 1)
            return sum(pieces, np.zeros_like(x))
    raise DidNotConverge(
        f"block-coordinate sum projection did not converge in {max_iterations} sweeps"
    )


# ── Direction-search grid oracle ─────────────────────────────────────────


class _RayCaster:
    """First entry distance of rays from x into the thickened, truncated set."""

    def __init__(self, s: ConvexSet, x: np.ndarray, half_width: float) -> None:
        self.s = s
        self.x = x
        self.half_width = half_width

    def inside(self, points: np.ndarray, t: float) -> np.ndarray:
        in_box = np.all(np.abs(points) <= self.half_width + t, axis=1)
        return self.s.contains(points, t) & in_box

    def first_hit(
        self, dirs: np.ndarray, lo: np.ndarray, hi: np.ndarray, t: float
    ) -> np.ndarray:
        """Entry distance along each direction, inf where the window misses."""
        k, n = dirs.shape
        steps = np.linspace(0.0, 1.0, RHO_POINTS)
        grid = lo[:, None] + (hi - lo)[:, None] * steps[None, :]
        points = self.x + grid[:, :, None] * dirs[:, None, :]
        hits = self.inside(points.reshape(-1, n), t).reshape(k, RHO_POINTS)

        hit_any = hits.any(axis=1)
        first = np.argmax(hits, axis=1)
        rho = np.full(k, np.inf)

        # Entry before the window: widen down to 0 once
        early = hit_any & (first == 0) & (lo > 0)
        if np.any(early):
            rho[early] = self.first_hit(dirs[early], np.zeros(int(early.sum())), lo[early], t)
        at_origin = hit_any & (first == 0) & (lo <= 0)
        rho[at_origin] = 0.0

        inner = hit_any & (first > 0)
        if np.any(inner):
            rows = np.flatnonzero(inner)
            outside = grid[rows, first[rows] - 1]
            entered = grid[rows, first[rows]]
            for _ in range(BISECTION_STEPS):
                mid = 0.5 * (outside + entered)
                mid_hit = self.inside(self.x + mid[:, None] * dirs[rows], t)
                entered = np.where(mid_hit, mid, entered)
                outside = np.where(mid_hit, outside, mid)
            rho[rows] = entered
        return rho


def _fibonacci_sphere(count: int) -> np.ndarray:
    i = np.arange(count) + 0.5
    polar = np.arccos(1.0 - 2.0 * i / count)
    azimuth = np.pi * (1.0 + math.sqrt(5.0)) * i
    return np.column_stack(
        [np.cos(azimuth) * np.sin(polar), np.sin(azimuth) * np.sin(polar), np.cos(polar)]
    )


def _tangent_frame(b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    helper = np.eye(3)[int(np.argmin(np.abs(b)))]
    e1 = np.cross(b, helper)
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(b, e1)


def _angles_to_dirs(angles: np.ndarray) -> np.ndarray:
    return np.column_stack([np.cos(angles), np.sin(angles)])


def grid_oracle_project(
    s: ConvexSet, x: np.ndarray, resolution: float, *, scale: float = 1.0
) -> np.ndarray:
    """Nearest point by casting rays from x over a refining direction grid.

    The set is thickened by t (via contains(·, t)) and truncated to the
    oracle box. The direction of the first hit is the direction of P_C x,
    so P_C x ≈ x + (ρ_t + t)·w. Each level shrinks t and the angular
    window by 4; the last level polishes the angle by golden-section
    search (2-D) since the entry distance is quasiconvex in the direction.
    """
    n = s.dim
    if n > 3:
        raise UnsupportedDimension(f"grid oracle supports dimension 1 to 3, got {n}")
    half_width = TRUNCATION * scale
    caster = _RayCaster(s, x, half_width)
    if caster.inside(x[None, :], resolution / 4.0)[0]:
        return x.copy()

    reach = float(np.linalg.norm(np.abs(x) + half_width))
    full_params, full_spacing = _full_direction_set(n)
    full_dirs = _directions(n, full_params, None)

    t = reach / 8.0
    for _ in range(MAX_WIDENINGS + 1):
        rho = caster.first_hit(
            full_dirs, np.zeros(len(full_dirs)), np.full(len(full_dirs), 2.0 * reach), t
        )
        if np.isfinite(rho).any():
            break
        t *= 2.0
    else:
        raise DidNotConverge("grid oracle found no point of the set along any direction")

    best = int(np.argmin(rho))
    best_dir, best_rho = full_dirs[best], float(rho[best])
    # Grid of the level that produced best_dir
    params, spacing = full_params, full_spacing

    for _ in range(MAX_LEVELS):
        prev_t, t = t, t / 4.0
        distance = best_rho + prev_t
        lo_rho = max(0.0, best_rho - 4.0 * prev_t)
        # ρ = 0 means x lies in the thickened set, so the direction is still unknown
        windowed = n > 1 and best_rho > 0.0
        if not windowed:
            dirs, params, spacing = full_dirs, full_params, full_spacing
            hi_rho = best_rho + 4.0 * prev_t
        else:
            window = min(2.0 * spacing + 2.0 * prev_t / max(distance, resolution), np.pi)
            hi_rho = best_rho + 4.0 * prev_t + distance * min(window, 1.0) ** 2
            if n == 2:
                base = math.atan2(best_dir[1], best_dir[0])
                params = base + np.linspace(-window, window, REFINE_2D)
                spacing = 2.0 * window / (REFINE_2D - 1)
            else:
                offsets = np.linspace(-window, window, REFINE_3D)
                alpha, beta = np.meshgrid(offsets, offsets, indexing="ij")
                params = np.column_stack([alpha.ravel(), beta.ravel()])
                spacing = 2.0 * window / (REFINE_3D - 1)
            dirs = _directions(n, params, best_dir)

        count = len(dirs)
        rho = caster.first_hit(dirs, np.full(count, lo_rho), np.full(count, hi_rho), t)
        if not np.isfinite(rho).any():
            raise DidNotConverge(f"grid oracle lost the set at thickness {t:.2e}")
        best = int(np.argmin(rho))
        best_dir, best_rho = dirs[best], float(rho[best])

        if t > resolution / 4.0:
            continue
        if best_rho == 0.0:
            return x.copy()
        if n == 1 or (windowed and distance * spacing <= resolution / 4.0):
            if n == 2 and windowed:
                best_dir, best_rho = _golden_polish(caster, params, rho, best, lo_rho, hi_rho, t)
            logger.debug("Grid oracle finished at t=%.2e, distance %.4g", t, best_rho + t)
            return x + (best_rho + t) * best_dir
    raise DidNotConverge("grid oracle did not reach the requested resolution")


def _full_direction_set(n: int) -> tuple[np.ndarray, float]:
    """Level-0 direction parameters and their angular spacing."""
    if n == 1:
        return np.array([-1.0, 1.0]), np.pi
    if n == 2:
        return np.linspace(0.0, 2.0 * np.pi, ANGLES_2D, endpoint=False), 2.0 * np.pi / ANGLES_2D
    return _fibonacci_sphere(SPHERE_3D), math.sqrt(4.0 * np.pi / SPHERE_3D)


def _directions(n: int, params: np.ndarray, center: np.ndarray | None) -> np.ndarray:
    if n == 1:
        return params.reshape(-1, 1)
    if n == 2:
        return _angles_to_dirs(params)
    if center is None:
        return params
    e1, e2 = _tangent_frame(center)
    raw = center + params[:, :1] * e1 + params[:, 1:] * e2
    return raw / np.linalg.norm(raw, axis=1, keepdims=True)


def _golden_polish(
    caster: _RayCaster,
    angles: np.ndarray,
    rho: np.ndarray,
    best: int,
    lo_rho: float,
    hi_rho: float,
    t: float,
) -> tuple[np.ndarray, float]:
    """Golden-section search on the angle between the best grid neighbours."""
    left = angles[max(best - 1, 0)]
    right = angles[min(best + 1, len(angles) - 1)]

    def entry(angle: float) -> float:
        direction = _angles_to_dirs(np.array([angle]))
        return float(caster.first_hit(direction, np.array([lo_rho]), np.array([hi_rho]), t)[0])

    ratio = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = left, right
    c, d = b - ratio * (b - a), a + ratio * (b - a)
    fc, fd = entry(c), entry(d)
    for _ in range(GOLDEN_STEPS):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - ratio * (b - a)
            fc = entry(c)
        else:
            a, c, fc = c, d, fd
            d = a + ratio * (b - a)
            fd = entry(d)
    angle, value = (c, fc) if fc <= fd else (d, fd)
    if value > rho[best]:
        angle, value = float(angles[best]), float(rho[best])
    return _angles_to_dirs(np.array([angle]))[0], value


# ── Dispatcher ───────────────────────────────────────────────────────────


def oracle_project(
    s: ConvexSet,
    x: np.ndarray,
    resolution: float = 1e-3,
    *,
    scale: float = 1.0,
    step_rule: StepRule = "away",
) -> np.ndarray:
    """Independent estimate of P_C x."""
    x = np.asarray(x, dtype=float)
    if isinstance(s, Polytope):
        return frank_wolfe_project(s.vertices, x, step_rule=step_rule)
    if isinstance(s, FinitelyGeneratedCone):
        return nnls_cone_project(s.generators, x)
    if isinstance(s, ConeIntersection):
        return dykstra_project(s.k1.project, s.k2.project, x)
    if isinstance(s, MinkowskiSum):
        return block_coordinate_sum_project(s.parts, x)
    return grid_oracle_project(s, x, resolution, scale=scale)


def oracle_tolerance(s: ConvexSet, resolution: float) -> float:
    """Agreement tolerance between project() and oracle_project()."""
    if isinstance(s, (Polytope, FinitelyGeneratedCone, ConeIntersection, MinkowskiSum)):
        return 1e-6
    return 2.0 * resolution * math.sqrt(s.dim)
