"""Convex-set catalog with exact projectors, distances and membership.

Every descriptor is an immutable dataclass holding read-only numpy arrays
and exposes the same interface:

  - project(x) / project_many(X): the exact projector P_C.
  - distance_sq(x), membership(x, tol): derived from project().
  - contains(X, tol): definitional membership predicate evaluated from the
    set's defining (in)equalities, never from project(). Oracles rely on it.
  - is_cone, bounds(), direction_basis(), point(): structural facts used by
    the decision engine.
  - to_dict(): JSON form with a "variant" tag; descriptor_from_dict() parses it.

MinkowskiSum and ConeIntersection carry projectors that are only valid
because a certificate proved them; descriptor_from_dict() refuses them.

Key classes: ConvexSet and its variants.
Key functions: descriptor_from_dict(), ball(), box(), subspace(),
whole_space(), sample_members(), same_set().
"""

import logging
import math
from abc import ABC, abstractmethod
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from typing import Any, ClassVar

import numpy as np
import scipy.linalg
import scipy.optimize

from .errors import (
    DimensionMismatch,
    InvalidDescriptor,
    UnsupportedExactProjection,
    ZeroVector,
)
from .utils import decode_number, dump_json, encode_number, vector_to_json

logger = logging.getLogger(__name__)

# Orthonormality tolerance for Subspace bases
BASIS_TOL = 1e-12
# Cosine tolerance for the orthogonal-or-antipodal generator condition
PAIRWISE_TOL = 1e-10
# Optimality gap accepted from the polytope NNLS solve, relative to scale²
KKT_TOL = 1e-10


# ── Vector helpers ───────────────────────────────────────────────────────


def as_vector(values: Any, dim: int | None = None, *, name: str = "vector") -> np.ndarray:
    """Coerce to a finite float64 1-D array (read-only copy)."""
    try:
        arr = np.array(values, dtype=float)
    except (TypeError, ValueError) as e:
        raise InvalidDescriptor(f"{name} is not a numeric vector: {e}") from e
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidDescriptor(f"{name} must be a nonempty 1-D vector")
    if not np.all(np.isfinite(arr)):
        raise InvalidDescriptor(f"{name} has non-finite entries")
    if dim is not None and arr.size != dim:
        raise DimensionMismatch(f"{name} has dimension {arr.size}, expected {dim}")
    arr.flags.writeable = False
    return arr


def as_matrix(rows: Any, dim: int | None = None, *, name: str = "rows") -> np.ndarray:
    """Coerce a list of vectors to a finite (m, n) float64 array (read-only)."""
    try:
        arr = np.array(rows, dtype=float)
    except (TypeError, ValueError) as e:
        raise InvalidDescriptor(f"{name} is not a numeric matrix: {e}") from e
    if arr.ndim != 2:
        raise InvalidDescriptor(f"{name} must be a list of equal-length vectors")
    if not np.all(np.isfinite(arr)):
        raise InvalidDescriptor(f"{name} has non-finite entries")
    if dim is not None and arr.shape[1] != dim:
        raise DimensionMismatch(f"{name} have dimension {arr.shape[1]}, expected {dim}")
    arr.flags.writeable = False
    return arr


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.flags.writeable = False
    return arr


def orth_rows(rows: np.ndarray, dim: int) -> np.ndarray:
    """Orthonormal basis (as rows) of the span of `rows`."""
    if rows.size == 0:
        return np.zeros((0, dim))
    return scipy.linalg.orth(rows.T).T


def complement_rows(basis: np.ndarray, dim: int) -> np.ndarray:
    """Orthonormal basis (as rows) of the orthogonal complement of span(basis)."""
    if basis.shape[0] == 0:
        return np.eye(dim)
    return scipy.linalg.null_space(basis).T


# ── Base class ───────────────────────────────────────────────────────────


class ConvexSet(ABC):
    """A nonempty closed convex subset of ℝⁿ with an exact projector."""

    variant: ClassVar[str]

    @property
    @abstractmethod
    def dim(self) -> int: ...

    @abstractmethod
    def _project_rows(self, xs: np.ndarray) -> np.ndarray:
        """Project each row of a (m, n) array."""

    @abstractmethod
    def contains(self, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        """Definitional membership of each row of a (m, n) array."""

    @abstractmethod
    def to_dict(self) -> dict[str, Any]: ...

    @abstractmethod
    def point(self) -> np.ndarray:
        """Some element of the set."""

    @property
    def is_cone(self) -> bool:
        return False

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Tightest known axis-aligned box containing the set."""
        if self.dim == 1:
            return self._probe_interval()
        return np.full(self.dim, -np.inf), np.full(self.dim, np.inf)

    def direction_basis(self) -> np.ndarray | None:
        """Orthonormal rows spanning span(C − C), or None when unknown."""
        return None

    def polar(self) -> "ConvexSet | None":
        """The polar cone as a simpler catalog set, when one exists."""
        return None

    def polar_contains(self, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        """Membership in the polar cone (cone variants only).

        Falls back to Moreau: dist(p, K⊖) = ‖P_K p‖.
        """
        dual = self.polar()
        if dual is not None:
            return dual.contains(points, tol)
        return np.linalg.norm(self._project_rows(points), axis=1) <= tol

    # ── Public operations ──

    def project(self, x: Any) -> np.ndarray:
        """Nearest point of the set to x."""
        vec = self._check(x)
        return self._project_rows(vec[None, :])[0]

    def project_many(self, xs: Any) -> np.ndarray:
        """Project each row of an (m, n) array."""
        arr = np.asarray(xs, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != self.dim:
            raise DimensionMismatch(
                f"expected points of dimension {self.dim}, got shape {arr.shape}"
            )
        return self._project_rows(arr)

    def distance_sq(self, x: Any) -> float:
        vec = self._check(x)
        diff = vec - self._project_rows(vec[None, :])[0]
        return float(diff @ diff)

    def membership(self, x: Any, tol: float) -> bool:
        return self.distance_sq(x) <= tol * tol

    def key(self) -> str:
        """Canonical identity used to detect structurally equal sets."""
        return dump_json(self.to_dict())

    def _check(self, x: Any) -> np.ndarray:
        vec = as_vector(x, name="point")
        if vec.size != self.dim:
            raise DimensionMismatch(
                f"point has dimension {vec.size}, set has dimension {self.dim}"
            )
        return vec

    def _probe_interval(self) -> tuple[np.ndarray, np.ndarray]:
        # 1-D sets are intervals; the far-away projections are the endpoints
        far = 1e15
        lo = float(self._project_rows(np.array([[-far]]))[0, 0])
        hi = float(self._project_rows(np.array([[far]]))[0, 0])
        lo = -np.inf if lo <= -far / 2 else lo
        hi = np.inf if hi >= far / 2 else hi
        return np.array([lo]), np.array([hi])

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.key()})"


# ── Variants ─────────────────────────────────────────────────────────────


@dataclass(frozen=True, eq=False, repr=False)
class Singleton(ConvexSet):
    u: np.ndarray

    variant: ClassVar[str] = "singleton"

    def __post_init__(self) -> None:
        object.__setattr__(self, "u", as_vector(self.u, name="singleton point"))

    @property
    def dim(self) -> int:
        return self.u.size

    @property
    def is_cone(self) -> bool:
        return not np.any(self.u)

    def _project_rows(self, xs: np.ndarray) -> np.ndarray:
        return np.tile(self.u, (xs.shape[0], 1))

    def contains(self, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        return np.linalg.norm(points - self.u, axis=1) <= tol

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return self.u.copy(), self.u.copy()

    def direction_basis(self) -> np.ndarray:
        return np.zeros((0, self.dim))

    def polar(self) -> ConvexSet | None:
        # {0}⊖ is the whole space
        return whole_space(self.dim) if self.is_cone else None

    def point(self) -> np.ndarray:
        return self.u.copy()

    def to_dict(self) -> dict[str, Any]:
        return {"variant": self.variant, "u": vector_to_json(self.u)}


@dataclass(frozen=True, eq=False, repr=False)
class Ball(ConvexSet):
    center: np.ndarray
    radius: float

    variant: ClassVar[str] = "ball"

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", as_vector(self.center, name="ball center"))
        radius = float(self.radius)
        if not math.isfinite(radius) or radius <= 0:
            raise InvalidDescriptor(f"ball radius must be positive, got {self.radius}")
        object.__setattr__(self, "radius", radius)

    @property
    def dim(self) -> int:
        return self.center.size

    def _project_rows(self, xs: np.ndarray) -> np.ndarray:
        offsets = xs - self.center
        norms = np.linalg.norm(offsets, axis=1, keepdims=True)
        factor = self.radius / np.maximum(norms, self.radius)
        return self.center + factor * offsets

    def contains(self, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        return np.linalg.norm(points - self.center, axis=1) <= self.radius + tol

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return self.center - self.radius, self.center + self.radius

    def direction_basis(self) -> np.ndarray:
        return np.eye(self.dim)

    def point(self) -> np.ndarray:
        return self.center.copy()

    def to_dict(self) -> dict[str, Any]:
        return {
            "variant": self.variant,
            "center": vector_to_json(self.center),
            "radius": self.radius,
        }


@dataclass(frozen=True, eq=False, repr=False)
class Box(ConvexSet):
    lower: np.ndarray
    upper: np.ndarray

    variant: ClassVar[str] = "box"

    def __post_init__(self) -> None:
        lower = np.array(self.lower, dtype=float)
        upper = np.array(self.upper, dtype=float)
        if lower.ndim != 1 or lower.shape != upper.shape or lower.size == 0:
            raise InvalidDescriptor("box bounds must be vectors of equal length")
        if np.any(np.isnan(lower)) or np.any(np.isnan(upper)):
            raise InvalidDescriptor("box bounds contain NaN")
        if np.any(lower == np.inf) or np.any(upper == -np.inf):
            raise InvalidDescriptor("box lower bound +inf or upper bound -inf")
        if np.any(lower > upper):
            raise InvalidDescriptor("box lower bound exceeds upper bound")
        object.__setattr__(self, "lower", _readonly(lower))
        object.__setattr__(self, "upper", _readonly(upper))

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def is_cone(self) -> bool:
        finite = np.concatenate([self.lower[np.isfinite(self.lower)], self.upper[np.isfinite(self.upper)]])
        return not np.any(finite)

    @property
    def is_whole_space(self) -> bool:
        return bool(np.all(np.isinf(self.lower)) and np.all(np.isinf(self.upper)))

    def _project_rows(self, xs: np.ndarray) -> np.ndarray:
        return np.clip(xs, self.lower, self.upper)

    def contains(self, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        return np.all((points >= self.lower - tol) & (points <= self.upper + tol), axis=1)

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return self.lower.copy(), self.upper.copy()

    def direction_basis(self) -> np.ndarray:
        return np.eye(self.dim)[self.upper > self.lower]

    def polar(self) -> ConvexSet | None:
        if not self.is_cone:
            return None
        lower = np.where(self.lower == -np.inf, 0.0, -np.inf)
        upper = np.where(self.upper == np.inf, 0.0, np.inf)
        return box(lower, upper)

    def point(self) -> np.ndarray:
        return np.clip(np.zeros(self.dim), self.lower, self.upper)

    def to_dict(self) -> dict[str, Any]:
        return {
            "variant": self.variant,
            "lower": vector_to_json(self.lower),
            "upper": vector_to_json(self.upper),
        }


def _axis_index(normal: np.ndarray) -> int | None:
    nonzero = np.flatnonzero(normal)
    return int(nonzero[0]) if nonzero.size == 1 else None


@dataclass(frozen=True, eq=False, repr=False)
class Hyperplane(ConvexSet):
    """{x : ⟨normal, x⟩ = offset}."""

    normal: np.ndarray
    offset: float

    variant: ClassVar[str] = "hyperplane"

    def __post_init__(self) -> None:
        normal = as_vector(self.normal, name="hyperplane normal")
        if not np.any(normal):
            raise ZeroVector("hyperplane normal must be nonzero")
        offset = float(self.offset)
        if not math.isfinite(offset):
            raise InvalidDescriptor("hyperplane offset must be finite")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", offset)

    @property
    def dim(self) -> int:
        return self.normal.size

    @property
    def is_cone(self) -> bool:
        return self.offset == 0

    def _project_rows(self, xs: np.ndarray) -> np.ndarray:
        excess = (xs @ self.normal - self.offset) / (self.normal @ self.normal)
        return xs - excess[:, None] * self.normal

    def contains(self, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        gap = np.abs(points @ self.normal - self.offset) / np.linalg.norm(self.normal)
        return gap <= tol

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        lower, upper = np.full(self.dim, -np.inf), np.full(self.dim, np.inf)
        axis = _axis_index(self.normal)
        if axis is not None:
            lower[axis] = upper[axis] = self.offset / self.normal[axis]
        return lower, upper

    def direction_basis(self) -> np.ndarray:
        return complement_rows(self.normal[None, :], self.dim)

    def polar(self) -> ConvexSet | None:
        if not self.is_cone:
            return None
        return subspace([self.normal], self.dim)

    def point(self) -> np.ndarray:
        return self.offset * self.normal / (self.normal @ self.normal)

    def to_dict(self) -> dict[str, Any]:
        return {
            "variant": self.variant,
            "normal": vector_to_json(self.normal),
            "offset": self.offset,
        }


@dataclass(frozen=True, eq=False, repr=False)
class Halfspace(ConvexSet):
    """{x : ⟨normal, x⟩ ≤ offset}; a cone when offset = 0."""

    normal: np.ndarray
    offset: float

    variant: ClassVar[str] = "halfspace"

    def __post_init__(self) -> None:
        normal = as_vector(self.normal, name="halfspace normal")
        if not np.any(normal):
            raise ZeroVector("halfspace normal must be nonzero")
        offset = float(self.offset)
        if not math.isfinite(offset):
            raise InvalidDescriptor("halfspace offset must be finite")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", offset)

    @property
    def dim(self) -> int:
        return self.normal.size

    @property
    def is_cone(self) -> bool:
        return self.offset == 0

    def _project_rows(self, xs: np.ndarray) -> np.ndarray:
        excess = np.maximum(xs @ self.normal - self.offset, 0.0) / (self.normal @ self.normal)
        return xs - excess[:, None] * self.normal

    def contains(self, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        gap = (points @ self.normal - self.offset) / np.linalg.norm(self.normal)
        return gap <= tol

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        lower, upper = np.full(self.dim, -np.inf), np.full(self.dim, np.inf)
        axis = _axis_index(self.normal)
        if axis is not None:
            limit = self.offset / self.normal[axis]
            if self.normal[axis] > 0:
                upper[axis] = limit
            else:
                lower[axis] = limit
        return lower, upper

    def direction_basis(self) -> np.ndarray:
        return np.eye(self.dim)

    def polar(self) -> ConvexSet | None:
        return Ray(self.normal) if self.is_cone else None

    def point(self) -> np.ndarray:
        return self.offset * self.normal / (self.normal @ self.normal)

    def to_dict(self) -> dict[str, Any]:
        return {
            "variant": self.variant,
            "normal": vector_to_json(self.normal),
            "offset": self.offset,
        }


@dataclass(frozen=True, eq=False, repr=False)
class Subspace(ConvexSet):
    """Linear subspace spanned by orthonormal rows of `basis`.

    The empty basis describes {0}; `dimension` keeps the ambient size.
    """

    basis: np.ndarray
    dimension: int | None = None

    variant: ClassVar[str] = "subspace"

    def __post_init__(self) -> None:
        raw = np.array(self.basis, dtype=float)
        if raw.size == 0:
            if self.dimension is None or self.dimension < 1:
                raise InvalidDescriptor("empty subspace basis needs a positive dimension")
            raw = np.zeros((0, int(self.dimension)))
        basis = as_matrix(raw, self.dimension, name="subspace basis")
        gram = basis @ basis.T
        if not np.allclose(gram, np.eye(basis.shape[0]), rtol=0.0, atol=BASIS_TOL):
            raise InvalidDescriptor("subspace basis is not orthonormal")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "dimension", basis.shape[1])

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def rank(self) -> int:
        return self.basis.shape[0]

    @property
    def is_cone(self) -> bool:
        return True

    def _project_rows(self, xs: np.ndarray) -> np.ndarray:
        return (xs @ self.basis.T) @ self.basis

    def contains(self, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        residual = points - (points @ self.basis.T) @ self.basis
        return np.linalg.norm(residual, axis=1) <= tol

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        free = np.any(np.abs(self.basis) > BASIS_TOL, axis=0)
        return np.where(free, -np.inf, 0.0), np.where(free, np.inf, 0.0)

    def direction_basis(self) -> np.ndarray:
        return self.basis.copy()

    def polar(self) -> ConvexSet:
        return Subspace(complement_rows(self.basis, self.dim), self.dim)

    def point(self) -> np.ndarray:
        return np.zeros(self.dim)

    def to_dict(self) -> dict[str, Any]:
        return {
            "variant": self.variant,
            "basis": [vector_to_json(row) for row in self.basis],
            "dimension": self.dim,
        }


@dataclass(frozen=True, eq=False, repr=False)
class Ray(ConvexSet):
    """ℝ₊·direction; the direction is normalized on construction."""

    direction: np.ndarray

    variant: ClassVar[str] = "ray"

    def __post_init__(self) -> None:
        direction = np.array(as_vector(self.direction, name="ray direction"))
        norm = np.linalg.norm(direction)
        if norm == 0:
            raise ZeroVector("ray direction must be nonzero")
        object.__setattr__(self, "direction", _readonly(direction / norm))

    @property
    def dim(self) -> int:
        return self.direction.size

    @property
    def is_cone(self) -> bool:
        return True

    def _project_rows(self, xs: np.ndarray) -> np.ndarray:
        coef = np.maximum(xs @ self.direction, 0.0)
        return coef[:, None] * self.direction

    def contains(self, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        along = points @ self.direction
        across = np.linalg.norm(points - along[:, None] * self.direction, axis=1)
        return (along >= -tol) & (across <= tol)

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        u = self.direction
        return np.where(u < 0, -np.inf, 0.0), np.where(u > 0, np.inf, 0.0)

    def direction_basis(self) -> np.ndarray:
        return self.direction[None, :].copy()

    def polar(self) -> ConvexSet:
        return Halfspace(self.direction, 0.0)

    def point(self) -> np.ndarray:
        return np.zeros(self.dim)

    def to_dict(self) -> dict[str, Any]:
        return {"variant": self.variant, "direction": vector_to_json(self.direction)}


def generators_pairwise_exact(generators: np.ndarray) -> bool:
    """True iff every pair of generators is orthogonal or antipodal."""
    units = generators / np.linalg.norm(generators, axis=1, keepdims=True)
    cosines = units @ units.T
    m = cosines.shape[0]
    off = ~np.eye(m, dtype=bool)
    ok = (np.abs(cosines) <= PAIRWISE_TOL) | (cosines <= -1.0 + PAIRWISE_TOL)
    return bool(np.all(ok[off]))


@dataclass(frozen=True, eq=False, repr=False)
class FinitelyGeneratedCone(ConvexSet):
    """Σ ℝ₊uᵢ over the rows of `generators`."""

    generators: np.ndarray

    variant: ClassVar[str] = "finitely-generated-cone"

    def __post_init__(self) -> None:
        gens = as_matrix(self.generators, name="cone generators")
        if gens.shape[0] == 0:
            raise InvalidDescriptor("a finitely generated cone needs generators")
        if np.any(np.linalg.norm(gens, axis=1) == 0):
            raise ZeroVector("cone generators must be nonzero")
        object.__setattr__(self, "generators", gens)

    @property
    def dim(self) -> int:
        return self.generators.shape[1]

    @property
    def is_cone(self) -> bool:
        return True

    @property
    def pairwise_exact(self) -> bool:
        return generators_pairwise_exact(self.generators)

    def _project_rows(self, xs: np.ndarray) -> np.ndarray:
        if not self.pairwise_exact:
            raise UnsupportedExactProjection(
                "generators are not pairwise orthogonal or antipodal; "
                "use the NNLS oracle for this cone"
            )
        units = self.generators / np.linalg.norm(self.generators, axis=1, keepdims=True)
        return np.maximum(xs @ units.T, 0.0) @ units

    def contains(self, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        gens_t = self.generators.T
        out = np.empty(points.shape[0], dtype=bool)
        for i, p in enumerate(points):
            _, residual = scipy.optimize.nnls(gens_t, p)
            out[i] = residual <= tol
        return out

    def polar_contains(self, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        units = self.generators / np.linalg.norm(self.generators, axis=1, keepdims=True)
        return np.all(points @ units.T <= tol, axis=1)

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        g = self.generators
        lower = np.where(np.any(g < 0, axis=0), -np.inf, 0.0)
        upper = np.where(np.any(g > 0, axis=0), np.inf, 0.0)
        return lower, upper

    def direction_basis(self) -> np.ndarray:
        return orth_rows(self.generators, self.dim)

    def point(self) -> np.ndarray:
        return np.zeros(self.dim)

    def to_dict(self) -> dict[str, Any]:
        return {
            "variant": self.variant,
            "generators": [vector_to_json(g) for g in self.generators],
        }


def _require_cone(s: ConvexSet, role: str) -> None:
    if not s.is_cone:
        raise InvalidDescriptor(f"{role} must be a cone variant, got {s.variant}")


@dataclass(frozen=True, eq=False, repr=False)
class PolarCone(ConvexSet):
    """K⊖ = {u : ⟨u, c⟩ ≤ 0 for all c ∈ K}, projected by Moreau: x − P_K x."""

    of: ConvexSet

    variant: ClassVar[str] = "polar-cone"

    def __post_init__(self) -> None:
        _require_cone(self.of, "polar-cone base")

    @property
    def dim(self) -> int:
        return self.of.dim

    @property
    def is_cone(self) -> bool:
        return True

    def _project_rows(self, xs: np.ndarray) -> np.ndarray:
        return xs - self.of._project_rows(xs)

    def contains(self, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        return self.of.polar_contains(points, tol)

    def polar_contains(self, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        return self.of.contains(points, tol)

    def polar(self) -> ConvexSet:
        return self.of

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        simpler = self.of.polar()
        return simpler.bounds() if simpler is not None else super().bounds()

    def direction_basis(self) -> np.ndarray | None:
        simpler = self.of.polar()
        return simpler.direction_basis() if simpler is not None else None

    def point(self) -> np.ndarray:
        return np.zeros(self.dim)

    def to_dict(self) -> dict[str, Any]:
        return {"variant": self.variant, "of": self.of.to_dict()}


@dataclass(frozen=True, eq=False, repr=False)
class TruncatedCone(ConvexSet):
    """K ∩ B(0, ρ), projected by (ρ / max{‖P_K x‖, ρ})·P_K x."""

    cone: ConvexSet
    radius: float

    variant: ClassVar[str] = "truncated-cone"

    def __post_init__(self) -> None:
        _require_cone(self.cone, "truncated-cone base")
        radius = float(self.radius)
        if not math.isfinite(radius) or radius <= 0:
            raise InvalidDescriptor(f"truncation radius must be positive, got {self.radius}")
        object.__setattr__(self, "radius", radius)

    @property
    def dim(self) -> int:
        return self.cone.dim

    def _project_rows(self, xs: np.ndarray) -> np.ndarray:
        inner = self.cone._project_rows(xs)
        norms = np.linalg.norm(inner, axis=1, keepdims=True)
        return inner * (self.radius / np.maximum(norms, self.radius))

    def contains(self, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        in_ball = np.linalg.norm(points, axis=1) <= self.radius + tol
        return in_ball & self.cone.contains(points, tol)

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        lower, upper = self.cone.bounds()
        return np.maximum(lower, -self.radius), np.minimum(upper, self.radius)

    def direction_basis(self) -> np.ndarray | None:
        return self.cone.direction_basis()

    def point(self) -> np.ndarray:
        return np.zeros(self.dim)

    def to_dict(self) -> dict[str, Any]:
        return {"variant": self.variant, "cone": self.cone.to_dict(), "radius": self.radius}


@dataclass(frozen=True, eq=False, repr=False)
class Translate(ConvexSet):
    """base + shift, projected by s + P_base(x − s)."""

    base: ConvexSet
    shift: np.ndarray

    variant: ClassVar[str] = "translate"

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "shift", as_vector(self.shift, self.base.dim, name="translate shift")
        )

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def is_cone(self) -> bool:
        return self.base.is_cone and not np.any(self.shift)

    def _project_rows(self, xs: np.ndarray) -> np.ndarray:
        return self.shift + self.base._project_rows(xs - self.shift)

    def contains(self, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        return self.base.contains(points - self.shift, tol)

    def polar_contains(self, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        return self.base.polar_contains(points, tol)

    def polar(self) -> ConvexSet | None:
        return self.base.polar() if self.is_cone else None

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        lower, upper = self.base.bounds()
        return lower + self.shift, upper + self.shift

    def direction_basis(self) -> np.ndarray | None:
        return self.base.direction_basis()

    def point(self) -> np.ndarray:
        return self.base.point() + self.shift

    def to_dict(self) -> dict[str, Any]:
        return {
            "variant": self.variant,
            "base": self.base.to_dict(),
            "shift": vector_to_json(self.shift),
        }


@dataclass(frozen=True, eq=False, repr=False)
class MinkowskiSum(ConvexSet):
    """Σ Cᵢ whose projector a certificate proved to be Σ P_{Cᵢ}.

    Only the decision engine builds these; descriptor_from_dict() refuses them.
    """

    parts: tuple[ConvexSet, ...]

    variant: ClassVar[str] = "minkowski-sum"

    def __post_init__(self) -> None:
        parts = tuple(self.parts)
        if len(parts) < 2:
            raise InvalidDescriptor("a Minkowski sum needs at least two parts")
        if len({p.dim for p in parts}) != 1:
            raise DimensionMismatch("Minkowski sum parts differ in dimension")
        object.__setattr__(self, "parts", parts)

    @property
    def dim(self) -> int:
        return self.parts[0].dim

    @property
    def is_cone(self) -> bool:
        return all(p.is_cone for p in self.parts)

    def _project_rows(self, xs: np.ndarray) -> np.ndarray:
        return sum((p._project_rows(xs) for p in self.parts), np.zeros_like(xs))

    def contains(self, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        # No definitional test for a sum; use the certified projector
        gaps = np.linalg.norm(points - self._project_rows(points), axis=1)
        return gaps <= tol

    def polar_contains(self, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        # (Σ Kᵢ)⊖ = ∩ Kᵢ⊖
        inside = np.ones(points.shape[0], dtype=bool)
        for part in self.parts:
            inside &= part.polar_contains(points, tol)
        return inside

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        lower, upper = np.zeros(self.dim), np.zeros(self.dim)
        for part in self.parts:
            lo, hi = part.bounds()
            lower, upper = lower + lo, upper + hi
        return lower, upper

    def direction_basis(self) -> np.ndarray | None:
        bases = [p.direction_basis() for p in self.parts]
        if any(b is None for b in bases):
            return None
        return orth_rows(np.vstack(bases), self.dim)

    def point(self) -> np.ndarray:
        return sum((p.point() for p in self.parts), np.zeros(self.dim))

    def to_dict(self) -> dict[str, Any]:
        return {"variant": self.variant, "parts": [p.to_dict() for p in self.parts]}


@dataclass(frozen=True, eq=False, repr=False)
class Polytope(ConvexSet):
    """Convex hull of the rows of `vertices`.

    Projection solves the min-norm-point problem over conv(vᵢ − x) through
    non-negative least squares on the homogenized system
    [vᵢ − x; 1]·μ ≈ [0; 1]; the minimizer is (Σ μᵢ(vᵢ − x)) / Σ μᵢ.
    A solution that fails the optimality conditions is recomputed with
    away-step Frank–Wolfe.
    """

    vertices: np.ndarray

    variant: ClassVar[str] = "polytope"

    def __post_init__(self) -> None:
        verts = as_matrix(self.vertices, name="polytope vertices")
        if verts.shape[0] == 0:
            raise InvalidDescriptor("a polytope needs at least one vertex")
        object.__setattr__(self, "vertices", verts)

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def is_cone(self) -> bool:
        return not np.any(self.vertices)

    def _project_rows(self, xs: np.ndarray) -> np.ndarray:
        return np.array([self._project_point(x) for x in xs]).reshape(xs.shape)

    def _project_point(self, x: np.ndarray) -> np.ndarray:
        offsets = (self.vertices - x).T
        scale = float(np.abs(offsets).max())
        if scale == 0.0:
            return x.copy()
        system = np.vstack([offsets / scale, np.ones(offsets.shape[1])])
        target = np.zeros(system.shape[0])
        target[-1] = 1.0
        weights, _ = scipy.optimize.nnls(system, target)
        total = float(weights.sum())
        if total > 0.0:
            step = offsets @ weights / total
            # y = x + step is optimal iff ⟨x − y, vᵢ − y⟩ ≤ 0 for every vertex
            gap = float(np.max(step @ step - step @ offsets))
            if gap <= KKT_TOL * (1.0 + scale**2):
                return x + step
        logger.debug("NNLS missed the polytope projection of %s; using Frank-Wolfe", x)
        from .oracles import frank_wolfe_project

        return frank_wolfe_project(self.vertices, x)

    def contains(self, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        return np.linalg.norm(points - self._project_rows(points), axis=1) <= tol

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def direction_basis(self) -> np.ndarray:
        return orth_rows(self.vertices - self.vertices[0], self.dim)

    def point(self) -> np.ndarray:
        return self.vertices[0].copy()

    def to_dict(self) -> dict[str, Any]:
        return {"variant": self.variant, "vertices": [vector_to_json(v) for v in self.vertices]}


@dataclass(frozen=True, eq=False, repr=False)
class ConeIntersection(ConvexSet):
    """K₁ ∩ K₂ whose projector a certificate proved to be P_{K₁} + P_{K₂} − Id.

    Only the decision engine builds these; descriptor_from_dict() refuses them.
    """

    k1: ConvexSet
    k2: ConvexSet

    variant: ClassVar[str] = "cone-intersection"

    def __post_init__(self) -> None:
        _require_cone(self.k1, "k1")
        _require_cone(self.k2, "k2")
        if self.k1.dim != self.k2.dim:
            raise DimensionMismatch("cone intersection operands differ in dimension")

    @property
    def dim(self) -> int:
        return self.k1.dim

    @property
    def is_cone(self) -> bool:
        return True

    def _project_rows(self, xs: np.ndarray) -> np.ndarray:
        return self.k1._project_rows(xs) + self.k2._project_rows(xs) - xs

    def contains(self, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        return self.k1.contains(points, tol) & self.k2.contains(points, tol)

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        lo1, hi1 = self.k1.bounds()
        lo2, hi2 = self.k2.bounds()
        return np.maximum(lo1, lo2), np.minimum(hi1, hi2)

    def point(self) -> np.ndarray:
        return np.zeros(self.dim)

    def to_dict(self) -> dict[str, Any]:
        return {"variant": self.variant, "k1": self.k1.to_dict(), "k2": self.k2.to_dict()}


# ── Factories ────────────────────────────────────────────────────────────


def ball(center: Any, radius: float) -> ConvexSet:
    """Ball, normalized to Singleton when the radius is 0."""
    radius = float(radius)
    if radius == 0:
        return Singleton(center)
    return Ball(center, radius)


def box(lower: Any, upper: Any) -> ConvexSet:
    """Box, normalized to Singleton when every interval is degenerate."""
    candidate = Box(lower, upper)
    if np.array_equal(candidate.lower, candidate.upper):
        return Singleton(candidate.lower)
    return candidate


def interval(lo: float, hi: float) -> ConvexSet:
    """Closed interval of ℝ¹ (infinite endpoints allowed)."""
    return box([lo], [hi])


def subspace(vectors: Iterable[Any], dim: int) -> Subspace:
    """Subspace spanned by arbitrary vectors (orthonormalized)."""
    rows = np.array(list(vectors), dtype=float).reshape(-1, dim)
    return Subspace(orth_rows(rows, dim), dim)


def whole_space(dim: int) -> Box:
    """ℝⁿ as an unbounded box (a cone)."""
    return Box(np.full(dim, -np.inf), np.full(dim, np.inf))


def halfspace_cone(normal: Any) -> Halfspace:
    """{x : ⟨normal, x⟩ ≤ 0}."""
    return Halfspace(normal, 0.0)


def is_whole_space(s: ConvexSet) -> bool:
    if isinstance(s, Box):
        return s.is_whole_space
    if isinstance(s, Subspace):
        return s.rank == s.dim
    if isinstance(s, PolarCone):
        return isinstance(s.of, Singleton) or (isinstance(s.of, Subspace) and s.of.rank == 0)
    return False


def same_set(a: ConvexSet, b: ConvexSet) -> bool:
    """Structural equality of descriptors."""
    return a.key() == b.key()


def linear_basis(s: ConvexSet) -> np.ndarray | None:
    """Orthonormal rows spanning the linear span of the set, if known."""
    directions = s.direction_basis()
    if directions is None:
        return None
    return orth_rows(np.vstack([directions, s.point()[None, :]]), s.dim)


def sample_members(s: ConvexSet, points: np.ndarray) -> np.ndarray:
    """Elements of s obtained by projecting sample points (at two radii)."""
    return s.project_many(np.vstack([points, 10.0 * points]))


# ── Parsing ──────────────────────────────────────────────────────────────


def _fields(data: dict[str, Any], required: Sequence[str], optional: Sequence[str] = ()) -> None:
    allowed = {"variant", *required, *optional}
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise InvalidDescriptor(
            f"unknown field(s) for {data.get('variant')!r}: {', '.join(unknown)}"
        )
    missing = [name for name in required if name not in data]
    if missing:
        raise InvalidDescriptor(
            f"missing field(s) for {data.get('variant')!r}: {', '.join(missing)}"
        )


def _number(raw: Any, name: str) -> float:
    try:
        return decode_number(raw)
    except ValueError as e:
        raise InvalidDescriptor(f"{name}: {e}") from e


def _numbers(raw: Any, name: str) -> list[float]:
    if not isinstance(raw, list):
        raise InvalidDescriptor(f"{name} must be an array")
    return [_number(v, name) for v in raw]


def _vectors(raw: Any, name: str) -> list[list[float]]:
    if not isinstance(raw, list):
        raise InvalidDescriptor(f"{name} must be an array of vectors")
    return [_numbers(v, name) for v in raw]


def _parse_subspace(data: dict[str, Any]) -> ConvexSet:
    _fields(data, ["basis"], ["dimension"])
    dimension = data.get("dimension")
    if dimension is not None and (isinstance(dimension, bool) or not isinstance(dimension, int)):
        raise InvalidDescriptor("subspace dimension must be an integer")
    return Subspace(np.array(_vectors(data["basis"], "basis"), dtype=float), dimension)


def _parse_box(data: dict[str, Any]) -> ConvexSet:
    _fields(data, ["lower", "upper"])
    return box(_numbers(data["lower"], "lower"), _numbers(data["upper"], "upper"))


def _parse_ball(data: dict[str, Any]) -> ConvexSet:
    _fields(data, ["center", "radius"])
    radius = _number(data["radius"], "radius")
    if radius < 0:
        raise InvalidDescriptor(f"ball radius must be nonnegative, got {radius}")
    return ball(_numbers(data["center"], "center"), radius)


def _parse_simple(
    cls: type[ConvexSet], names: Sequence[str], kinds: Sequence[str]
) -> Callable[[dict[str, Any]], ConvexSet]:
    def parse(data: dict[str, Any]) -> ConvexSet:
        _fields(data, names)
        values = []
        for name, kind in zip(names, kinds):
            if kind == "vector":
                values.append(_numbers(data[name], name))
            elif kind == "vectors":
                values.append(_vectors(data[name], name))
            elif kind == "number":
                values.append(_number(data[name], name))
            else:
                values.append(descriptor_from_dict(data[name]))
        return cls(*values)

    return parse


_PARSERS: dict[str, Callable[[dict[str, Any]], ConvexSet]] = {
    "singleton": _parse_simple(Singleton, ["u"], ["vector"]),
    "ball": _parse_ball,
    "box": _parse_box,
    "hyperplane": _parse_simple(Hyperplane, ["normal", "offset"], ["vector", "number"]),
    "halfspace": _parse_simple(Halfspace, ["normal", "offset"], ["vector", "number"]),
    "subspace": _parse_subspace,
    "ray": _parse_simple(Ray, ["direction"], ["vector"]),
    "finitely-generated-cone": _parse_simple(FinitelyGeneratedCone, ["generators"], ["vectors"]),
    "polar-cone": _parse_simple(PolarCone, ["of"], ["set"]),
    "truncated-cone": _parse_simple(TruncatedCone, ["cone", "radius"], ["set", "number"]),
    "translate": _parse_simple(Translate, ["base", "shift"], ["set", "vector"]),
    "polytope": _parse_simple(Polytope, ["vertices"], ["vectors"]),
}

# Certified-only variants
_CERTIFIED_ONLY = {MinkowskiSum.variant, ConeIntersection.variant}


def descriptor_from_dict(data: Any) -> ConvexSet:
    """Parse a descriptor from its JSON form, strictly."""
    if not isinstance(data, dict):
        raise InvalidDescriptor("set descriptor must be a JSON object")
    variant = data.get("variant")
    if variant in _CERTIFIED_ONLY:
        raise InvalidDescriptor(
            f"{variant!r} can only be produced by a certifying operation"
        )
    parser = _PARSERS.get(variant)  # type: ignore[arg-type]
    if parser is None:
        raise InvalidDescriptor(f"unknown set variant {variant!r}")
    return parser(data)


def describe(s: ConvexSet) -> str:
    """Short human label used in logs and fixture reports."""
    if isinstance(s, Subspace):
        return {0: "origin", 1: "line"}.get(s.rank, f"{s.rank}-dim subspace")
    return s.variant


__all__ = [
    "Ball",
    "Box",
    "ConeIntersection",
    "ConvexSet",
    "FinitelyGeneratedCone",
    "Halfspace",
    "Hyperplane",
    "MinkowskiSum",
    "PolarCone",
    "Polytope",
    "Ray",
    "Singleton",
    "Subspace",
    "TruncatedCone",
    "Translate",
    "as_matrix",
    "as_vector",
    "ball",
    "box",
    "describe",
    "descriptor_from_dict",
    "encode_number",
    "generators_pairwise_exact",
    "halfspace_cone",
    "interval",
    "is_whole_space",
    "complement_rows",
    "linear_basis",
    "orth_rows",
    "same_set",
    "sample_members",
    "subspace",
    "whole_space",
]
