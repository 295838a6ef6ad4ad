"""Tests for OperatorHandle and the numerical projector checks."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from projcert.certifier import (
    PROJECTOR_CHECKS,
    OperatorHandle,
    firm_nonexpansiveness_check,
    gradient_criterion_check,
    homogeneity_check,
    idempotence_check,
    monotonicity_check,
    run_checks,
    soundness_checks,
)
from projcert.errors import DimensionMismatch
from projcert.sampling import SampleConfig
from projcert.sets import Ball, Ray


def _linear(matrix) -> OperatorHandle:
    mat = np.asarray(matrix, dtype=float)
    return OperatorHandle(lambda xs: xs @ mat.T, mat.shape[0], "linear")


LINE_PROJECTOR = _linear([[0.5, 0.5], [0.5, 0.5]])
DOUBLING = _linear(2.0 * np.eye(2))
NEGATION = _linear(-np.eye(2))
RAY = OperatorHandle(Ray([1.0, 2.0]).project_many, 2, "ray")
UNIT_BALL = OperatorHandle(Ball([0.0, 0.0], 1.0).project_many, 2, "ball")


@pytest.fixture
def small_cfg() -> SampleConfig:
    return SampleConfig(seed=5, n_samples=64)


class TestOperatorHandle:
    def test_single_point(self):
        assert_allclose(LINE_PROJECTOR([2.0, 0.0]), [1.0, 1.0])

    def test_pointwise_wrapper(self):
        T = OperatorHandle.pointwise(lambda x: 3.0 * x, 2)
        assert_allclose(T.many(np.ones((3, 2))), 3.0 * np.ones((3, 2)))

    def test_dimension_checks(self):
        with pytest.raises(DimensionMismatch):
            LINE_PROJECTOR([1.0])
        with pytest.raises(DimensionMismatch):
            LINE_PROJECTOR.many(np.ones((2, 3)))


class TestProjectorsPass:
    @pytest.mark.parametrize("T", [LINE_PROJECTOR, RAY], ids=["line", "ray"])
    def test_all_checks_pass(self, T, small_cfg):
        reports = run_checks(T, small_cfg)
        assert [r.check for r in reports] == list(PROJECTOR_CHECKS)
        assert all(r.passed for r in reports), [r.to_dict() for r in reports if not r.passed]

    def test_ball_passes_soundness_but_not_homogeneity(self, small_cfg):
        assert all(r.passed for r in run_checks(UNIT_BALL, small_cfg, ("idempotence", "firm-nonexpansiveness", "monotonicity")))
        report = homogeneity_check(UNIT_BALL, small_cfg)
        assert not report.passed
        assert report.witnesses and "lambda" in report.witnesses[0]


class TestNonProjectorsFail:
    def test_doubling_is_not_idempotent(self, small_cfg):
        report = idempotence_check(DOUBLING, small_cfg)
        assert not report.passed
        assert len(report.witnesses) == 1

    def test_doubling_is_not_firmly_nonexpansive(self, small_cfg):
        assert not firm_nonexpansiveness_check(DOUBLING, small_cfg).passed

    def test_doubling_fails_gradient_criterion(self, small_cfg):
        report = gradient_criterion_check(DOUBLING, small_cfg)
        assert not report.passed
        assert report.max_error > 1e-5

    def test_negation_is_not_monotone(self, small_cfg):
        report = monotonicity_check(NEGATION, small_cfg)
        assert not report.passed
        assert report.min_pairing < 0
        assert set(report.witnesses[0]) == {"x", "y", "pairing"}

    def test_soundness_checks_select_three(self, small_cfg):
        names = [r.check for r in soundness_checks(DOUBLING, small_cfg)]
        assert names == ["idempotence", "firm-nonexpansiveness", "gradient"]


class TestReports:
    def test_report_fields(self, small_cfg):
        doc = monotonicity_check(LINE_PROJECTOR, small_cfg).to_dict()
        assert doc["check"] == "monotonicity"
        assert doc["pass"] is True
        assert doc["seed"] == 5 and doc["fd_step"] == small_cfg.fd_step
        assert doc["n_samples"] == 64 + 4
        assert doc["witnesses"] == []

    def test_reports_are_deterministic(self, small_cfg):
        first = [r.to_dict() for r in run_checks(RAY, small_cfg)]
        second = [r.to_dict() for r in run_checks(RAY, small_cfg)]
        assert first == second
