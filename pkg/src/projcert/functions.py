"""Convex functions with closed-form proximity operators.

Used by the Moreau-envelope check: for φ with Prox_φ known, the envelope
env φ(x) = φ(Prox x) + ½‖x − Prox x‖² must have gradient x − Prox x.

Supported: the indicator of a catalog set (Prox = projector), λ‖·‖₁
(soft thresholding) and λ‖·‖₂ (block shrinkage).
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, ClassVar

import numpy as np

from .certifier import CheckReport, finite_difference_check
from .errors import InvalidDescriptor, UnsupportedFunction
from .sampling import SampleConfig
from .sets import ConvexSet, descriptor_from_dict

logger = logging.getLogger(__name__)


class ProxFunction(ABC):
    """Proper lsc convex function with an exact proximity operator."""

    kind: ClassVar[str]
    dim: int

    @abstractmethod
    def value(self, xs: np.ndarray) -> np.ndarray:
        """φ at each row."""

    @abstractmethod
    def prox(self, xs: np.ndarray) -> np.ndarray:
        """Prox_φ of each row."""

    @abstractmethod
    def to_dict(self) -> dict[str, Any]: ...

    def envelope(self, xs: np.ndarray) -> np.ndarray:
        """env φ(x) = φ(Prox x) + ½‖x − Prox x‖²."""
        p = self.prox(xs)
        return self.value(p) + 0.5 * np.sum((xs - p) ** 2, axis=1)


@dataclass(frozen=True)
class IndicatorFunction(ProxFunction):
    set: ConvexSet

    kind: ClassVar[str] = "indicator"

    @property
    def dim(self) -> int:  # type: ignore[override]
        return self.set.dim

    def value(self, xs: np.ndarray) -> np.ndarray:
        # Only evaluated at Prox points, which lie in the set
        return np.zeros(xs.shape[0])

    def prox(self, xs: np.ndarray) -> np.ndarray:
        return self.set.project_many(xs)

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "set": self.set.to_dict()}


def _check_weight(lam: float) -> float:
    lam = float(lam)
    if not math.isfinite(lam) or lam <= 0:
        raise InvalidDescriptor(f"regularization weight must be positive, got {lam}")
    return lam


@dataclass(frozen=True)
class ScaledL1(ProxFunction):
    """λ‖x‖₁; Prox is soft thresholding sign(x)·max(|x| − λ, 0)."""

    lam: float
    dim: int  # type: ignore[misc]

    kind: ClassVar[str] = "scaled-l1"

    def __post_init__(self) -> None:
        object.__setattr__(self, "lam", _check_weight(self.lam))

    def value(self, xs: np.ndarray) -> np.ndarray:
        return self.lam * np.sum(np.abs(xs), axis=1)

    def prox(self, xs: np.ndarray) -> np.ndarray:
        return np.sign(xs) * np.maximum(np.abs(xs) - self.lam, 0.0)

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "lam": self.lam, "dim": self.dim}


@dataclass(frozen=True)
class ScaledL2(ProxFunction):
    """λ‖x‖₂; Prox is block shrinkage (1 − λ/‖x‖)₊·x."""

    lam: float
    dim: int  # type: ignore[misc]

    kind: ClassVar[str] = "scaled-l2"

    def __post_init__(self) -> None:
        object.__setattr__(self, "lam", _check_weight(self.lam))

    def value(self, xs: np.ndarray) -> np.ndarray:
        return self.lam * np.linalg.norm(xs, axis=1)

    def prox(self, xs: np.ndarray) -> np.ndarray:
        norms = np.linalg.norm(xs, axis=1, keepdims=True)
        shrink = np.maximum(1.0 - self.lam / np.maximum(norms, self.lam), 0.0)
        return shrink * xs

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "lam": self.lam, "dim": self.dim}


def function_from_dict(data: Any) -> ProxFunction:
    """Parse {"kind": ..., ...}; UnsupportedFunction for unknown kinds."""
    if not isinstance(data, dict):
        raise UnsupportedFunction("function must be a JSON object")
    kind = data.get("kind")
    if kind == IndicatorFunction.kind:
        return IndicatorFunction(descriptor_from_dict(data.get("set")))
    if kind in (ScaledL1.kind, ScaledL2.kind):
        dim = data.get("dim")
        if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
            raise InvalidDescriptor(f"{kind} needs a positive integer 'dim'")
        cls = ScaledL1 if kind == ScaledL1.kind else ScaledL2
        return cls(data.get("lam", 1.0), dim)
    raise UnsupportedFunction(f"no closed-form prox for function kind {kind!r}")


def moreau_envelope_check(phi: Any, cfg: SampleConfig) -> CheckReport:
    """Finite differences of env φ against x − Prox_φ x (tolerance 1e-5)."""
    if not isinstance(phi, ProxFunction):
        raise UnsupportedFunction(f"no closed-form prox for {type(phi).__name__}")

    def gradient(xs: np.ndarray) -> np.ndarray:
        return xs - phi.prox(xs)

    report = finite_difference_check("moreau-envelope", phi.envelope, gradient, phi.prox, phi.dim, cfg)
    logger.debug("Moreau envelope check for %s: pass=%s", phi.kind, report.passed)
    return report
