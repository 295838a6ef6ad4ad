"""Problem files: the JSON documents the CLI reads.

A problem names a task, the combination Σ αᵢ P_{Cᵢ} in a declared
dimension, and optionally a sampling config, a rule, oracle points or a
fixture name. Parsing is strict: unknown fields, type errors and dimension
disagreements all raise InvalidProblem (or the descriptor error behind
them), which the CLI maps to exit code 64.
"""

import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .algebra import RULES
from .combination import Combination
from .errors import DimensionMismatch, InvalidProblem
from .sampling import SampleConfig
from .utils import decode_number

logger = logging.getLogger(__name__)

TASKS = ("decide", "certify", "oracle-compare", "reproduce")

_FIELDS = {"task", "dimension", "combination", "config", "rule", "points", "fixture"}


@dataclass(frozen=True)
class ProblemFile:
    task: str
    dimension: int | None = None
    combination: Combination | None = None
    config: dict[str, Any] | None = None
    rule: str = "auto"
    points: np.ndarray | None = None
    fixture: str | None = None

    def sample_config(self, base: SampleConfig) -> SampleConfig:
        """`base` with this problem's config block applied."""
        if self.config is None:
            return base
        return SampleConfig.from_dict(self.config, base)

    def require_combination(self) -> Combination:
        if self.combination is None:
            raise InvalidProblem(f"task {self.task!r} needs a combination")
        return self.combination

    @classmethod
    def from_dict(cls, data: Any, default_task: str = "decide") -> "ProblemFile":
        if not isinstance(data, dict):
            raise InvalidProblem("problem must be a JSON object")
        unknown = sorted(set(data) - _FIELDS)
        if unknown:
            raise InvalidProblem(f"unknown problem field(s): {', '.join(unknown)}")

        task = data.get("task", default_task)
        if task not in TASKS:
            raise InvalidProblem(f"task must be one of {', '.join(TASKS)}, got {task!r}")

        if task == "reproduce":
            fixture = data.get("fixture")
            if not isinstance(fixture, str) or not fixture:
                raise InvalidProblem("task 'reproduce' needs a 'fixture' name")
            extra = sorted(set(data) - {"task", "fixture", "config"})
            if extra:
                raise InvalidProblem(f"task 'reproduce' does not take {', '.join(extra)}")
            return cls(task=task, config=_config_block(data), fixture=fixture)
        if "fixture" in data:
            raise InvalidProblem("'fixture' is only valid for task 'reproduce'")

        dimension = _dimension(data.get("dimension"))
        if "combination" not in data:
            raise InvalidProblem(f"task {task!r} needs a combination")
        combination = Combination.from_dict(data["combination"], dimension)

        rule = data.get("rule", "auto")
        if rule not in RULES:
            raise InvalidProblem(f"unknown rule {rule!r}; choose from {', '.join(RULES)}")

        points = None
        if "points" in data:
            if task != "oracle-compare":
                raise InvalidProblem("'points' is only valid for task 'oracle-compare'")
            points = _points(data["points"], dimension)

        return cls(
            task=task,
            dimension=dimension,
            combination=combination,
            config=_config_block(data),
            rule=rule,
            points=points,
        )


def _dimension(raw: Any) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int) or raw < 1:
        raise InvalidProblem(f"dimension must be a positive integer, got {raw!r}")
    return raw


def _config_block(data: dict[str, Any]) -> dict[str, Any] | None:
    block = data.get("config")
    if block is None:
        return None
    # Validate now so a bad block fails before any work starts
    SampleConfig.from_dict(block)
    return block


def _points(raw: Any, dimension: int) -> np.ndarray:
    if not isinstance(raw, list) or not raw:
        raise InvalidProblem("points must be a nonempty array of vectors")
    rows = []
    for i, point in enumerate(raw):
        if not isinstance(point, list):
            raise InvalidProblem(f"point {i} must be an array")
        if len(point) != dimension:
            raise DimensionMismatch(f"point {i} has length {len(point)}, expected {dimension}")
        try:
            rows.append([decode_number(v) for v in point])
        except ValueError as e:
            raise InvalidProblem(f"point {i}: {e}") from e
    points = np.array(rows, dtype=float)
    if not np.all(np.isfinite(points)):
        raise InvalidProblem("points must be finite")
    return points


def read_problem_text(source: str) -> str:
    """Read a problem from a path, or from stdin when the path is '-'."""
    if source == "-":
        return sys.stdin.read()
    try:
        return Path(source).read_text()
    except OSError as e:
        raise InvalidProblem(f"cannot read {source}: {e}") from e


def parse_problem(text: str, default_task: str = "decide") -> ProblemFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidProblem(f"problem is not valid JSON: {e}") from e
    problem = ProblemFile.from_dict(data, default_task)
    logger.debug("Parsed %s problem (dimension %s, rule %s)", problem.task, problem.dimension, problem.rule)
    return problem


def load_problem(source: str, default_task: str = "decide") -> ProblemFile:
    return parse_problem(read_problem_text(source), default_task)
