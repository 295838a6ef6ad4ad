"""Tests for problem-file parsing and loading."""

import io

import numpy as np
import pytest

from projcert.errors import DimensionMismatch, InvalidDescriptor, InvalidProblem
from projcert.problem import ProblemFile, load_problem, parse_problem, read_problem_text
from projcert.sampling import SampleConfig


class TestFromDict:
    def test_minimal_decide(self, ray_pair_problem):
        problem = ProblemFile.from_dict(ray_pair_problem)
        assert problem.task == "decide"
        assert problem.dimension == 2
        assert problem.rule == "auto"
        assert len(problem.combination) == 2
        assert problem.points is None

    def test_default_task(self, ray_pair_problem):
        del ray_pair_problem["task"]
        assert ProblemFile.from_dict(ray_pair_problem, "certify").task == "certify"

    def test_config_block_applied_over_base(self, ray_pair_problem):
        ray_pair_problem["config"] = {"n_samples": 32}
        problem = ProblemFile.from_dict(ray_pair_problem)
        cfg = problem.sample_config(SampleConfig(seed=5))
        assert (cfg.seed, cfg.n_samples) == (5, 32)

    def test_no_config_block_returns_base(self, ray_pair_problem):
        base = SampleConfig(seed=9)
        assert ProblemFile.from_dict(ray_pair_problem).sample_config(base) is base

    def test_oracle_points(self, ray_pair_problem):
        ray_pair_problem["task"] = "oracle-compare"
        ray_pair_problem["points"] = [[1, 2], ["inf", 0]]
        with pytest.raises(InvalidProblem, match="finite"):
            ProblemFile.from_dict(ray_pair_problem)
        ray_pair_problem["points"] = [[1, 2], [0.5, -3]]
        problem = ProblemFile.from_dict(ray_pair_problem)
        np.testing.assert_array_equal(problem.points, [[1.0, 2.0], [0.5, -3.0]])

    def test_reproduce_needs_only_a_fixture(self):
        problem = ProblemFile.from_dict({"task": "reproduce", "fixture": "two-rays"})
        assert problem.fixture == "two-rays"
        assert problem.combination is None
        with pytest.raises(InvalidProblem, match="needs a combination"):
            problem.require_combination()

    @pytest.mark.parametrize(
        "patch, message",
        [
            ({"colour": "blue"}, "unknown problem field\\(s\\): colour"),
            ({"task": "simplify"}, "task must be one of"),
            ({"dimension": 0}, "dimension must be a positive integer"),
            ({"dimension": True}, "dimension must be a positive integer"),
            ({"rule": "guess"}, "unknown rule 'guess'"),
            ({"points": [[0, 0]]}, "'points' is only valid for task 'oracle-compare'"),
            ({"fixture": "two-rays"}, "'fixture' is only valid for task 'reproduce'"),
            ({"config": {"samples": 3}}, "unknown config field\\(s\\): samples"),
            ({"combination": []}, "nonempty array of terms"),
        ],
        ids=[
            "unknown-field",
            "unknown-task",
            "zero-dimension",
            "bool-dimension",
            "unknown-rule",
            "points-on-decide",
            "fixture-on-decide",
            "bad-config",
            "empty-combination",
        ],
    )
    def test_rejected(self, ray_pair_problem, patch, message):
        ray_pair_problem.update(patch)
        with pytest.raises(InvalidProblem, match=message):
            ProblemFile.from_dict(ray_pair_problem)

    def test_missing_combination(self):
        with pytest.raises(InvalidProblem, match="needs a combination"):
            ProblemFile.from_dict({"task": "decide", "dimension": 2})

    @pytest.mark.parametrize(
        "data, message",
        [
            ({"task": "reproduce"}, "needs a 'fixture' name"),
            ({"task": "reproduce", "fixture": "two-rays", "dimension": 2}, "does not take dimension"),
        ],
        ids=["no-name", "extra-field"],
    )
    def test_reproduce_rejected(self, data, message):
        with pytest.raises(InvalidProblem, match=message):
            ProblemFile.from_dict(data)

    def test_declared_dimension_must_match(self, ray_pair_problem):
        ray_pair_problem["dimension"] = 3
        with pytest.raises(DimensionMismatch, match="problem declares 3"):
            ProblemFile.from_dict(ray_pair_problem)

    def test_point_length_must_match(self, ray_pair_problem):
        ray_pair_problem["task"] = "oracle-compare"
        ray_pair_problem["points"] = [[1, 2, 3]]
        with pytest.raises(DimensionMismatch, match="point 0 has length 3"):
            ProblemFile.from_dict(ray_pair_problem)

    def test_descriptor_errors_pass_through(self, ray_pair_problem):
        ray_pair_problem["combination"][0]["set"] = {"variant": "ball", "center": [0, 0], "radius": -1}
        with pytest.raises(InvalidDescriptor):
            ProblemFile.from_dict(ray_pair_problem)

    def test_not_an_object(self):
        with pytest.raises(InvalidProblem, match="JSON object"):
            ProblemFile.from_dict([1, 2])


class TestLoading:
    def test_invalid_json(self):
        with pytest.raises(InvalidProblem, match="not valid JSON"):
            parse_problem("{task: decide")

    def test_input_errors_are_value_errors(self):
        with pytest.raises(ValueError):
            parse_problem("[]")

    def test_load_from_file(self, write_problem, ray_pair_problem):
        path = write_problem(ray_pair_problem)
        assert load_problem(str(path)).dimension == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(InvalidProblem, match="cannot read"):
            read_problem_text(str(tmp_path / "absent.json"))

    def test_dash_reads_stdin(self, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO('{"task": "reproduce", "fixture": "two-rays"}'))
        assert load_problem("-").fixture == "two-rays"
