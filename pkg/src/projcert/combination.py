"""Combinations Σ αᵢ P_{Cᵢ} of projectors.

A Combination is an ordered, nonempty list of (coefficient, set) terms of
one ambient dimension. Order matters only for determinism (anchors, rule
order); the operator itself is order-free.
"""

import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Any

import numpy as np

from .certifier import OperatorHandle
from .errors import DimensionMismatch, InvalidDescriptor, InvalidProblem
from .sets import ConvexSet, descriptor_from_dict
from .utils import decode_number

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Term:
    coefficient: float
    set: ConvexSet

    def to_dict(self) -> dict[str, Any]:
        return {"coefficient": self.coefficient, "set": self.set.to_dict()}


@dataclass(frozen=True)
class Combination:
    terms: tuple[Term, ...]

    def __post_init__(self) -> None:
        terms = tuple(self.terms)
        if not terms:
            raise InvalidDescriptor("a combination needs at least one term")
        for term in terms:
            if not math.isfinite(term.coefficient):
                raise InvalidDescriptor(f"coefficient {term.coefficient} is not finite")
        dims = {term.set.dim for term in terms}
        if len(dims) != 1:
            raise DimensionMismatch(f"terms have different dimensions: {sorted(dims)}")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def of(cls, pairs: Iterable[tuple[float, ConvexSet]]) -> "Combination":
        return cls(tuple(Term(float(a), s) for a, s in pairs))

    @classmethod
    def sum_of(cls, sets: Iterable[ConvexSet]) -> "Combination":
        """Σ P_{Cᵢ} with unit coefficients."""
        return cls.of((1.0, s) for s in sets)

    @property
    def dim(self) -> int:
        return self.terms[0].set.dim

    @property
    def alpha(self) -> float:
        """α = Σ αᵢ."""
        return math.fsum(self.coefficients)

    @property
    def coefficients(self) -> tuple[float, ...]:
        return tuple(term.coefficient for term in self.terms)

    @property
    def sets(self) -> tuple[ConvexSet, ...]:
        return tuple(term.set for term in self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def projections(self, xs: np.ndarray) -> np.ndarray:
        """P_{Cᵢ} of every row: shape (terms, m, n)."""
        return np.stack([term.set.project_many(xs) for term in self.terms])

    def evaluate_many(self, xs: np.ndarray) -> np.ndarray:
        weights = np.array(self.coefficients)
        return np.tensordot(weights, self.projections(xs), axes=1)

    def evaluate(self, x: Any) -> np.ndarray:
        """Σ αᵢ P_{Cᵢ} x."""
        vec = np.asarray(x, dtype=float)
        if vec.shape != (self.dim,):
            raise DimensionMismatch(f"point must have dimension {self.dim}")
        return self.evaluate_many(vec[None, :])[0]

    def operator(self, label: str | None = None) -> OperatorHandle:
        return OperatorHandle(self.evaluate_many, self.dim, label or self.label())

    def label(self) -> str:
        parts = [f"{term.coefficient:g}·P[{term.set.variant}]" for term in self.terms]
        return " + ".join(parts)

    def to_dict(self) -> list[dict[str, Any]]:
        return [term.to_dict() for term in self.terms]

    @classmethod
    def from_dict(cls, data: Any, dim: int | None = None) -> "Combination":
        """Parse the JSON form: a list of {"coefficient", "set"} objects."""
        if not isinstance(data, list) or not data:
            raise InvalidProblem("combination must be a nonempty array of terms")
        terms = []
        for i, raw in enumerate(data):
            if not isinstance(raw, dict):
                raise InvalidProblem(f"term {i} must be an object")
            unknown = sorted(set(raw) - {"coefficient", "set"})
            if unknown:
                raise InvalidProblem(f"term {i}: unknown field(s) {', '.join(unknown)}")
            if "coefficient" not in raw or "set" not in raw:
                raise InvalidProblem(f"term {i} needs 'coefficient' and 'set'")
            try:
                coefficient = decode_number(raw["coefficient"])
            except ValueError as e:
                raise InvalidProblem(f"term {i}: {e}") from e
            terms.append(Term(coefficient, descriptor_from_dict(raw["set"])))
        combination = cls(tuple(terms))
        if dim is not None and combination.dim != dim:
            raise DimensionMismatch(
                f"combination has dimension {combination.dim}, problem declares {dim}"
            )
        return combination
