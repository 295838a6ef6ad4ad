"""Certificates: the verdict on a combination plus the evidence behind it.

A Certificate is IsProjector (with the result set when one is known and
the constant γ), NotProjector (with a re-checkable Witness), or
Inconclusive (with diagnostics). It also keeps the operator it was issued
for so callers can re-run soundness checks; that handle is not serialized.

Key classes: Certificate, Witness, Evidence, Verdict, Confidence, WitnessKind.
"""

from dataclasses import dataclass, field, replace
from enum import StrEnum
from typing import Any

import numpy as np

from .certifier import OperatorHandle
from .sampling import ConstancyResult, SampleConfig
from .sets import ConvexSet, describe
from .utils import encode_number, vector_to_json


class Verdict(StrEnum):
    IS_PROJECTOR = "IsProjector"
    NOT_PROJECTOR = "NotProjector"
    INCONCLUSIVE = "Inconclusive"


class Confidence(StrEnum):
    EXACT = "exact"
    SAMPLED = "sampled"


class WitnessKind(StrEnum):
    CONSTANCY = "constancy"
    MONOTONICITY = "monotonicity"
    HOMOGENEITY = "homogeneity"
    IDENTITY = "identity"
    RANGE = "range"


# Process exit code per verdict
EXIT_CODES = {
    Verdict.IS_PROJECTOR: 0,
    Verdict.NOT_PROJECTOR: 1,
    Verdict.INCONCLUSIVE: 2,
}


@dataclass(frozen=True)
class Witness:
    """Points at which a necessary condition visibly fails.

    `values` holds the tested quantity at each point (for a range witness:
    the coordinates of Tx, to compare against the point itself).
    """

    kind: WitnessKind
    points: tuple[np.ndarray, ...]
    values: tuple[float, ...]
    condition: str
    factor: float | None = None  # λ for homogeneity witnesses

    @property
    def point(self) -> np.ndarray:
        return self.points[0]

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "kind": str(self.kind),
            "points": [vector_to_json(p) for p in self.points],
            "values": [encode_number(v) for v in self.values],
            "condition": self.condition,
        }
        if self.factor is not None:
            data["lambda"] = self.factor
        return data


@dataclass(frozen=True)
class Evidence:
    """Sampled statistics behind a decision."""

    seed: int
    samples: int
    minimum: float
    maximum: float

    @classmethod
    def from_constancy(cls, result: ConstancyResult, cfg: SampleConfig) -> "Evidence":
        return cls(
            seed=cfg.seed,
            samples=result.n_samples,
            minimum=result.minimum,
            maximum=result.maximum,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "samples": self.samples,
            "min": encode_number(self.minimum),
            "max": encode_number(self.maximum),
        }


@dataclass(frozen=True)
class Certificate:
    """Verdict on whether a combination of projectors is a projector."""

    verdict: Verdict
    method: str
    confidence: Confidence
    result: ConvexSet | None = None
    gamma: float | None = None
    witness: Witness | None = None
    evidence: Evidence | None = None
    diagnostics: str = ""
    operator: OperatorHandle | None = field(default=None, compare=False, repr=False)

    # ── Constructors ──

    @classmethod
    def projector(
        cls,
        method: str,
        result: ConvexSet | None,
        *,
        gamma: float | None = None,
        confidence: Confidence = Confidence.EXACT,
        evidence: Evidence | None = None,
        diagnostics: str = "",
        operator: OperatorHandle | None = None,
    ) -> "Certificate":
        return cls(
            verdict=Verdict.IS_PROJECTOR,
            method=method,
            confidence=confidence,
            result=result,
            gamma=None if gamma is None else float(gamma),
            evidence=evidence,
            diagnostics=diagnostics,
            operator=operator,
        )

    @classmethod
    def refuted(
        cls,
        method: str,
        witness: Witness,
        *,
        confidence: Confidence = Confidence.EXACT,
        evidence: Evidence | None = None,
        diagnostics: str = "",
        operator: OperatorHandle | None = None,
    ) -> "Certificate":
        return cls(
            verdict=Verdict.NOT_PROJECTOR,
            method=method,
            confidence=confidence,
            witness=witness,
            evidence=evidence,
            diagnostics=diagnostics,
            operator=operator,
        )

    @classmethod
    def inconclusive(
        cls,
        method: str,
        diagnostics: str,
        *,
        evidence: Evidence | None = None,
        operator: OperatorHandle | None = None,
    ) -> "Certificate":
        return cls(
            verdict=Verdict.INCONCLUSIVE,
            method=method,
            confidence=Confidence.SAMPLED,
            evidence=evidence,
            diagnostics=diagnostics,
            operator=operator,
        )

    # ── Accessors ──

    @property
    def is_projector(self) -> bool:
        return self.verdict is Verdict.IS_PROJECTOR

    @property
    def is_refuted(self) -> bool:
        return self.verdict is Verdict.NOT_PROJECTOR

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    def downgrade(self, diagnostics: str) -> "Certificate":
        """Same certificate, demoted to Inconclusive."""
        return replace(
            self,
            verdict=Verdict.INCONCLUSIVE,
            confidence=Confidence.SAMPLED,
            result=None,
            gamma=None,
            witness=None,
            diagnostics=diagnostics,
        )

    def with_operator(self, operator: OperatorHandle) -> "Certificate":
        return replace(self, operator=operator)

    def to_dict(self) -> dict[str, Any]:
        return {
            "verdict": str(self.verdict),
            "method": self.method,
            "confidence": str(self.confidence),
            "gamma": None if self.gamma is None else encode_number(self.gamma),
            "result": None if self.result is None else self.result.to_dict(),
            "result_label": None if self.result is None else describe(self.result),
            "witness": None if self.witness is None else self.witness.to_dict(),
            "evidence": None if self.evidence is None else self.evidence.to_dict(),
            "diagnostics": self.diagnostics,
        }
