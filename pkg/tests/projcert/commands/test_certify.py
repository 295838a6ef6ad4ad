"""Tests for the certify task."""

from projcert.commands.certify import run_certify
from projcert.problem import ProblemFile


class TestRunCertify:
    def test_certified_projector_passes_every_check(self, ray_pair_problem, cfg):
        ray_pair_problem["task"] = "certify"
        result = run_certify(ProblemFile.from_dict(ray_pair_problem), cfg)
        doc = result.document
        assert result.exit_code == 0
        assert doc["task"] == "certify"
        assert [c["check"] for c in doc["checks"]] == [
            "gradient",
            "monotonicity",
            "homogeneity",
            "firm-nonexpansiveness",
            "idempotence",
        ]
        assert all(c["pass"] for c in doc["checks"])
        assert doc["identities"]["pass"] is True

    def test_scaled_ball_fails_idempotence(self, cfg):
        problem = ProblemFile.from_dict(
            {
                "task": "certify",
                "dimension": 2,
                "combination": [
                    {"coefficient": 2, "set": {"variant": "ball", "center": [0, 0], "radius": 1}}
                ],
            }
        )
        result = run_certify(problem, cfg)
        assert result.exit_code == 1
        by_name = {c["check"]: c for c in result.document["checks"]}
        assert by_name["idempotence"]["pass"] is False

    def test_checks_do_not_change_the_exit_code(self, ray_pair_problem, cfg):
        ray_pair_problem["combination"][1]["set"]["direction"] = [1, 0]
        result = run_certify(ProblemFile.from_dict(ray_pair_problem), cfg)
        assert result.exit_code == 1
        assert len(result.document["checks"]) == 5
