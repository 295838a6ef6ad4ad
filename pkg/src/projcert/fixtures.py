"""Regression fixtures: known examples and counterexamples.

Each Fixture holds one or more cases; a case is a combination, the rule to
run and the expected verdict, optionally with the expected result set or
witness point. reproduce() runs the cases and compares.

Key functions: fixture_names(), get_fixture(), reproduce(), reproduce_all().
"""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .algebra import decide
from .certificate import Certificate, Verdict
from .combination import Combination
from .errors import UnknownFixture
from .sampling import STREAM_RESAMPLE, SampleConfig, sample_points
from .sets import (
    ConvexSet,
    Halfspace,
    Ray,
    Singleton,
    Translate,
    TruncatedCone,
    box,
    interval,
    subspace,
    whole_space,
)
from .utils import vector_to_json

logger = logging.getLogger(__name__)

RESULT_TOL = 1e-9
WITNESS_TOL = 1e-9


@dataclass(frozen=True)
class FixtureCase:
    label: str
    build: Callable[[], Combination]
    expected: Verdict
    rule: str = "auto"
    expected_result: Callable[[], ConvexSet] | None = None
    expected_witness: tuple[float, ...] | None = None


@dataclass(frozen=True)
class Fixture:
    name: str
    description: str
    cases: tuple[FixtureCase, ...]


@dataclass
class CaseReport:
    label: str
    expected: Verdict
    certificate: Certificate
    problems: list[str] = field(default_factory=list)

    @property
    def match(self) -> bool:
        return not self.problems

    def to_dict(self) -> dict[str, Any]:
        return {
            "case": self.label,
            "expected": str(self.expected),
            "observed": str(self.certificate.verdict),
            "match": self.match,
            "problems": self.problems,
            "certificate": self.certificate.to_dict(),
        }


@dataclass
class FixtureReport:
    name: str
    description: str
    cases: list[CaseReport]

    @property
    def match(self) -> bool:
        return all(case.match for case in self.cases)

    def to_dict(self) -> dict[str, Any]:
        return {
            "fixture": self.name,
            "description": self.description,
            "match": self.match,
            "cases": [case.to_dict() for case in self.cases],
        }


# ── The registry ─────────────────────────────────────────────────────────

_W = np.array([1.0, 1.0]) / math.sqrt(2.0)
_Z = np.array([1.0, 0.0])  # not orthogonal to _W
_UNIT_SQUARE = box([0.0, 0.0], [1.0, 1.0])
_X_AXIS = subspace([[1.0, 0.0]], 2)


def _line(offset: float) -> ConvexSet:
    """Horizontal line x₂ = offset."""
    if offset == 0.0:
        return _X_AXIS
    return Translate(_X_AXIS, np.array([0.0, offset]))


FIXTURES: dict[str, Fixture] = {
    f.name: f
    for f in (
        Fixture(
            "counter-sum",
            "P_C − P_C is the projector onto {0} although C − C = [−1, 1]² is not {0}",
            (
                FixtureCase(
                    "unit square",
                    lambda: Combination.of([(1.0, _UNIT_SQUARE), (-1.0, _UNIT_SQUARE)]),
                    Verdict.IS_PROJECTOR,
                    expected_result=lambda: Singleton(np.zeros(2)),
                ),
            ),
        ),
        Fixture(
            "two-rays",
            "opposite rays sum to the line through them",
            (
                FixtureCase(
                    "w and -w",
                    lambda: Combination.sum_of([Ray(_W), Ray(-_W)]),
                    Verdict.IS_PROJECTOR,
                    expected_result=lambda: subspace([_W], 2),
                ),
            ),
        ),
        Fixture(
            "counter-cone-set",
            "{u} + K is not a projector when u is not orthogonal to K − K",
            (
                FixtureCase(
                    "u inside the ray",
                    lambda: Combination.sum_of([Singleton([1.0, 0.0]), Ray([1.0, 0.0])]),
                    Verdict.NOT_PROJECTOR,
                ),
            ),
        ),
        Fixture(
            "counter-cone-set2",
            "two rays at an obtuse angle: (1, 1) lies in the cone but is moved",
            (
                FixtureCase(
                    "e1 and (-1, 1)",
                    lambda: Combination.sum_of([Ray([1.0, 0.0]), Ray([-1.0, 1.0])]),
                    Verdict.NOT_PROJECTOR,
                    rule="cone-family",
                    expected_witness=(1.0, 1.0),
                ),
            ),
        ),
        Fixture(
            "shifted-projector",
            "u + P_C is a projector iff u is orthogonal to C − C",
            (
                FixtureCase(
                    "orthogonal shift",
                    lambda: Combination.sum_of([Singleton([0.0, 1.0]), _X_AXIS]),
                    Verdict.IS_PROJECTOR,
                    expected_result=lambda: _line(1.0),
                ),
                FixtureCase(
                    "oblique shift",
                    lambda: Combination.sum_of([Singleton([1.0, 1.0]), _X_AXIS]),
                    Verdict.NOT_PROJECTOR,
                ),
            ),
        ),
        Fixture(
            "partial-sum-fails",
            "outside cones, a projector sum can have sub-sums that are not projectors",
            (
                FixtureCase(
                    "whole family",
                    lambda: Combination.sum_of([Ray(_W), Ray(-_W), Singleton(_Z), Singleton(-_Z)]),
                    Verdict.IS_PROJECTOR,
                    expected_result=lambda: subspace([_W], 2),
                ),
                FixtureCase(
                    "sub-family {z} + ray",
                    lambda: Combination.sum_of([Singleton(_Z), Ray(_W)]),
                    Verdict.NOT_PROJECTOR,
                ),
            ),
        ),
        Fixture(
            "1d-dichotomy",
            "intervals sum to a projector iff both are points or they meet only at 0",
            (
                FixtureCase(
                    "[-2, 0] + [0, 3]",
                    lambda: Combination.sum_of([interval(-2.0, 0.0), interval(0.0, 3.0)]),
                    Verdict.IS_PROJECTOR,
                    rule="1d",
                    expected_result=lambda: interval(-2.0, 3.0),
                ),
                FixtureCase(
                    "{5} + {-1}",
                    lambda: Combination.sum_of([Singleton([5.0]), Singleton([-1.0])]),
                    Verdict.IS_PROJECTOR,
                    rule="1d",
                    expected_result=lambda: Singleton([4.0]),
                ),
                FixtureCase(
                    "[0, 1] + [0, 1]",
                    lambda: Combination.sum_of([interval(0.0, 1.0), interval(0.0, 1.0)]),
                    Verdict.NOT_PROJECTOR,
                    rule="1d",
                ),
            ),
        ),
        Fixture(
            "affine-example",
            "weights (1/4, -1/4, 1) on parallel lines give the line shifted by Σαᵢvᵢ",
            (
                FixtureCase(
                    "lines x2 = 0, 2, -1",
                    lambda: Combination.of([(0.25, _line(0.0)), (-0.25, _line(2.0)), (1.0, _line(-1.0))]),
                    Verdict.IS_PROJECTOR,
                    expected_result=lambda: _line(-1.5),
                ),
            ),
        ),
        Fixture(
            "truncated-cones",
            "truncations of a cone and its polar sum to a projector with γ = 0",
            (
                FixtureCase(
                    "orthant radii 1 and 2",
                    lambda: Combination.sum_of(
                        [
                            TruncatedCone(box([0.0, 0.0], [math.inf, math.inf]), 1.0),
                            TruncatedCone(box([-math.inf, -math.inf], [0.0, 0.0]), 2.0),
                        ]
                    ),
                    Verdict.IS_PROJECTOR,
                ),
            ),
        ),
        Fixture(
            "zarantonello",
            "P_K1 − P_K2 for cones is a projector iff P_K2 P_K1 = P_K2",
            (
                FixtureCase(
                    "plane minus ray",
                    lambda: Combination.of([(1.0, whole_space(2)), (-1.0, Ray([1.0, 0.0]))]),
                    Verdict.IS_PROJECTOR,
                    rule="cone-difference",
                    expected_result=lambda: Halfspace([1.0, 0.0], 0.0),
                ),
                FixtureCase(
                    "e1 minus (1, 1)",
                    lambda: Combination.of([(1.0, Ray([1.0, 0.0])), (-1.0, Ray([1.0, 1.0]))]),
                    Verdict.NOT_PROJECTOR,
                    rule="cone-difference",
                    expected_witness=(0.0, 1.0),
                ),
            ),
        ),
        Fixture(
            "dualized-intersection",
            "P_K1 + P_K2 − Id projects onto K1 ∩ K2 iff the polars sum to a projector",
            (
                FixtureCase(
                    "two halfplanes",
                    lambda: Combination.sum_of([Halfspace([1.0, 0.0], 0.0), Halfspace([0.0, 1.0], 0.0)]),
                    Verdict.IS_PROJECTOR,
                    rule="cone-intersection",
                    expected_result=lambda: box([-math.inf, -math.inf], [0.0, 0.0]),
                ),
                FixtureCase(
                    "two rays",
                    lambda: Combination.sum_of([Ray([1.0, 0.0]), Ray([0.0, 1.0])]),
                    Verdict.NOT_PROJECTOR,
                    rule="cone-intersection",
                ),
            ),
        ),
    )
}


def fixture_names() -> list[str]:
    return list(FIXTURES)


def get_fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]
    except KeyError:
        raise UnknownFixture(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}") from None


# ── Running ──────────────────────────────────────────────────────────────


def _same_projection(a: ConvexSet, b: ConvexSet, cfg: SampleConfig) -> float:
    points = sample_points(a.dim, cfg, stream=STREAM_RESAMPLE, count=64)
    gaps = np.linalg.norm(a.project_many(points) - b.project_many(points), axis=1)
    return float(np.max(gaps))


def run_case(case: FixtureCase, cfg: SampleConfig) -> CaseReport:
    cert = decide(case.build(), cfg, case.rule)
    report = CaseReport(case.label, case.expected, cert)
    if cert.verdict is not case.expected:
        report.problems.append(f"expected {case.expected}, observed {cert.verdict}")
        return report
    if case.expected_result is not None:
        if cert.result is None:
            report.problems.append("no result set")
        else:
            gap = _same_projection(cert.result, case.expected_result(), cfg)
            if gap > RESULT_TOL:
                report.problems.append(f"result set differs from the expected one by {gap:.3e}")
    if case.expected_witness is not None:
        point = None if cert.witness is None else cert.witness.points[-1]
        expected = np.array(case.expected_witness)
        if point is None or np.linalg.norm(point - expected) > WITNESS_TOL:
            observed = None if point is None else vector_to_json(point)
            report.problems.append(f"expected witness {list(case.expected_witness)}, got {observed}")
    return report


def reproduce(name: str, cfg: SampleConfig | None = None) -> FixtureReport:
    """Run every case of the named fixture."""
    cfg = cfg or SampleConfig()
    fixture = get_fixture(name)
    report = FixtureReport(fixture.name, fixture.description, [run_case(c, cfg) for c in fixture.cases])
    if report.match:
        logger.info("Fixture %s reproduced", name)
    else:
        logger.warning("Fixture %s does not match its expected verdicts", name)
    return report


def reproduce_all(cfg: SampleConfig | None = None) -> list[FixtureReport]:
    return [reproduce(name, cfg) for name in FIXTURES]
