"""Tests for the command-line entry point: parsing, dispatch and exit codes."""

import json

import pytest

from projcert.errors import DidNotConverge
from projcert.main import EXIT_INCONCLUSIVE, EXIT_INPUT_ERROR, build_parser, run


def _output(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


class TestBuildParser:
    def test_decide_with_overrides(self):
        args = build_parser().parse_args(["decide", "p.json", "--seed", "3", "--samples", "64", "--pretty"])
        assert (args.command, args.problem) == ("decide", "p.json")
        assert (args.seed, args.n_samples, args.pretty) == (3, 64, True)
        assert args.scale is None

    def test_reproduce_targets(self):
        parser = build_parser()
        assert parser.parse_args(["reproduce", "two-rays"]).name == "two-rays"
        assert parser.parse_args(["reproduce", "--all"]).all is True
        assert parser.parse_args(["reproduce", "--problem", "f.json"]).problem == "f.json"

    @pytest.mark.parametrize(
        "argv",
        [[], ["reproduce"], ["decide"], ["decide", "p.json", "--json", "--pretty"], ["simplify", "p.json"]],
        ids=["no-command", "reproduce-without-target", "decide-without-file", "json-and-pretty", "unknown-command"],
    )
    def test_usage_errors(self, argv):
        with pytest.raises(SystemExit):
            build_parser().parse_args(argv)


class TestRunDecide:
    def test_projector_exits_zero(self, capsys, write_problem, ray_pair_problem):
        code = run(["decide", str(write_problem(ray_pair_problem))])
        assert code == 0
        assert _output(capsys)["certificate"]["verdict"] == "IsProjector"

    def test_refutation_exits_one(self, capsys, write_problem, ray_pair_problem):
        ray_pair_problem["combination"][1]["set"]["direction"] = [1, 1]
        assert run(["decide", str(write_problem(ray_pair_problem))]) == 1
        assert _output(capsys)["certificate"]["verdict"] == "NotProjector"

    def test_flags_override_problem_config(self, capsys, write_problem, ray_pair_problem):
        ray_pair_problem["config"] = {"seed": 4, "n_samples": 32}
        run(["decide", str(write_problem(ray_pair_problem)), "--seed", "11"])
        config = _output(capsys)["config"]
        assert (config["seed"], config["n_samples"]) == (11, 32)

    def test_numerical_failure_exits_two(self, monkeypatch, capsys, write_problem, ray_pair_problem):
        def give_up(problem, cfg):
            raise DidNotConverge("no convergence")

        monkeypatch.setattr("projcert.commands.decide.run_decide", give_up)
        assert run(["decide", str(write_problem(ray_pair_problem))]) == EXIT_INCONCLUSIVE
        assert _output(capsys) == {"task": "decide", "verdict": "Inconclusive", "diagnostics": "no convergence"}


class TestInputErrors:
    def test_task_mismatch(self, capsys, write_problem, ray_pair_problem):
        assert run(["certify", str(write_problem(ray_pair_problem))]) == EXIT_INPUT_ERROR
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "but the command is 'certify'" in captured.err

    def test_invalid_json(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{")
        assert run(["decide", str(path)]) == EXIT_INPUT_ERROR
        assert "not valid JSON" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert run(["decide", str(tmp_path / "absent.json")]) == EXIT_INPUT_ERROR

    def test_bad_sample_count(self, write_problem, ray_pair_problem):
        assert run(["decide", str(write_problem(ray_pair_problem)), "--samples", "0"]) == EXIT_INPUT_ERROR

    def test_unknown_fixture(self, capsys):
        assert run(["reproduce", "no-such-fixture"]) == EXIT_INPUT_ERROR
        assert "unknown fixture" in capsys.readouterr().err

    def test_reproduce_problem_with_other_task(self, write_problem, ray_pair_problem):
        assert run(["reproduce", "--problem", str(write_problem(ray_pair_problem))]) == EXIT_INPUT_ERROR


class TestOutput:
    def test_pretty_is_indented(self, capsys):
        run(["fixtures", "--pretty"])
        out = capsys.readouterr().out
        assert out.startswith('{\n  "fixtures"')

    def test_compact_is_one_line(self, capsys):
        run(["fixtures"])
        assert capsys.readouterr().out.count("\n") == 1

    def test_output_file_matches_stdout(self, capsys, tmp_path, write_problem, ray_pair_problem):
        target = tmp_path / "out" / "cert.json"
        run(["decide", str(write_problem(ray_pair_problem)), "--output", str(target)])
        assert json.loads(target.read_text()) == _output(capsys)


class TestRunReproduce:
    def test_named_fixture(self, capsys):
        assert run(["reproduce", "two-rays"]) == 0
        assert _output(capsys)["match"] is True

    def test_problem_file(self, capsys, write_problem):
        path = write_problem({"task": "reproduce", "fixture": "1d-dichotomy", "config": {"seed": 2}})
        assert run(["reproduce", "--problem", str(path)]) == 0
        doc = _output(capsys)
        assert doc["config"]["seed"] == 2
        assert [f["fixture"] for f in doc["fixtures"]] == ["1d-dichotomy"]

    def test_fixture_listing(self, capsys):
        assert run(["fixtures"]) == 0
        assert len(_output(capsys)["fixtures"]) == 11
