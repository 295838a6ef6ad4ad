"""Tests for the decide task."""

from projcert.combination import Combination
from projcert.commands.decide import certificate_for, run_decide
from projcert.errors import DidNotConverge
from projcert.problem import ProblemFile
from projcert.sets import Ball


class TestRunDecide:
    def test_opposite_rays(self, ray_pair_problem, cfg):
        result = run_decide(ProblemFile.from_dict(ray_pair_problem), cfg)
        assert result.exit_code == 0
        doc = result.document
        assert doc["task"] == "decide"
        assert doc["certificate"]["verdict"] == "IsProjector"
        assert doc["certificate"]["result_label"] == "line"
        assert doc["config"]["seed"] == 7
        assert len(doc["combination"]) == 2

    def test_refutation_exits_one(self, ray_pair_problem, cfg):
        ray_pair_problem["combination"][1]["set"]["direction"] = [1, 0]
        result = run_decide(ProblemFile.from_dict(ray_pair_problem), cfg)
        assert result.exit_code == 1
        assert result.document["certificate"]["witness"] is not None

    def test_forced_rule(self, ray_pair_problem, cfg):
        ray_pair_problem["rule"] = "generated-cone"
        result = run_decide(ProblemFile.from_dict(ray_pair_problem), cfg)
        assert result.document["certificate"]["method"] == "generated-cone"


class TestCertificateFor:
    def test_numerical_failure_is_inconclusive(self, monkeypatch, cfg):
        def give_up(comb, cfg, rule):
            raise DidNotConverge("budget exhausted")

        monkeypatch.setattr("projcert.commands.decide.decide", give_up)
        comb = Combination.sum_of([Ball([0.0, 0.0], 1.0), Ball([3.0, 0.0], 1.0)])
        cert = certificate_for(comb, cfg, "pair-sum")
        assert cert.exit_code == 2
        assert cert.method == "pair-sum"
        assert cert.diagnostics == "budget exhausted"
        assert cert.operator is not None
