"""oracle-compare: each term's closed-form projection against its oracle.

Points come from the problem file, or else the probes plus a few Gaussian
samples (the grid oracle is slow). A set the oracle cannot handle is
reported as skipped with the reason, and so is one without a closed-form
projection.
"""

import logging
from typing import Any

import numpy as np

from ..oracles import oracle_project, oracle_tolerance
from ..problem import ProblemFile
from ..sampling import SampleConfig, sample_points
from ..sets import ConvexSet, describe
from ..utils import vector_to_json
from . import NUMERICAL_ERRORS, CommandResult

logger = logging.getLogger(__name__)

ORACLE_SAMPLES = 16


def compare_set(s: ConvexSet, points: np.ndarray, cfg: SampleConfig) -> dict[str, Any]:
    """Max gap between project() and oracle_project() over the points."""
    tolerance = oracle_tolerance(s, cfg.grid_resolution)
    entry: dict[str, Any] = {"set": s.to_dict(), "label": describe(s), "tolerance": tolerance}
    try:
        exact = s.project_many(points)
        oracle = np.array(
            [oracle_project(s, x, cfg.grid_resolution, scale=cfg.scale) for x in points]
        )
    except NUMERICAL_ERRORS as e:
        logger.warning("Oracle skipped %s: %s", describe(s), e)
        entry.update(status="skipped", reason=str(e))
        return entry

    gaps = np.linalg.norm(exact - oracle, axis=1)
    worst = int(np.argmax(gaps))
    entry.update(
        status="pass" if gaps[worst] <= tolerance else "fail",
        max_error=float(gaps[worst]),
        worst_point=vector_to_json(points[worst]),
        n_points=int(points.shape[0]),
    )
    if entry["status"] == "fail":
        logger.warning("Oracle disagrees on %s by %.3e", describe(s), gaps[worst])
    return entry


def run_oracle_compare(problem: ProblemFile, cfg: SampleConfig) -> CommandResult:
    comb = problem.require_combination()
    points = problem.points
    if points is None:
        points = sample_points(comb.dim, cfg, count=ORACLE_SAMPLES)

    entries = [compare_set(s, points, cfg) for s in comb.sets]
    statuses = {entry["status"] for entry in entries}
    if "fail" in statuses:
        exit_code = 1
    elif "skipped" in statuses:
        exit_code = 2
    else:
        exit_code = 0
    document = {
        "task": "oracle-compare",
        "config": cfg.to_dict(),
        "sets": entries,
        "pass": exit_code == 0,
    }
    return CommandResult(document, exit_code)
