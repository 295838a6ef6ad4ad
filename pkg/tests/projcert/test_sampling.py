"""Tests for SampleConfig, sample generation and the constancy test."""

import math

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from projcert.errors import InvalidProblem
from projcert.sampling import (
    STREAM_PAIRS,
    STREAM_POINTS,
    SampleConfig,
    constancy_test,
    probe_points,
    sample_pairs,
    sample_points,
)


class TestSampleConfig:
    def test_defaults(self):
        cfg = SampleConfig()
        assert (cfg.seed, cfg.n_samples, cfg.scale) == (0, 512, 1.0)
        assert cfg.atol == cfg.rtol == 1e-8

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"n_samples": 0},
            {"seed": 1.5},
            {"seed": True},
            {"scale": 0.0},
            {"atol": -1.0},
            {"fd_step": 0.1},
            {"grid_resolution": 0.0},
            {"scale": math.inf},
            {"rtol": "tiny"},
        ],
        ids=["no-samples", "float-seed", "bool-seed", "zero-scale", "negative-atol", "big-fd-step", "zero-grid", "inf-scale", "string-rtol"],
    )
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(InvalidProblem):
            SampleConfig(**kwargs)

    def test_with_overrides_skips_none(self):
        cfg = SampleConfig(seed=3)
        assert cfg.with_overrides(seed=None, scale=None) is cfg
        assert cfg.with_overrides(scale=2.0).scale == 2.0

    def test_fresh_advances_seed(self):
        assert SampleConfig(seed=4).fresh().seed == 5

    def test_from_dict_rejects_unknown_keys(self):
        with pytest.raises(InvalidProblem, match="unknown config"):
            SampleConfig.from_dict({"samples": 10})

    def test_from_dict_falls_back_to_base(self):
        base = SampleConfig(seed=9, scale=2.0)
        cfg = SampleConfig.from_dict({"n_samples": 10}, base)
        assert (cfg.seed, cfg.n_samples, cfg.scale) == (9, 10, 2.0)

    def test_to_dict_round_trip(self):
        cfg = SampleConfig(seed=1, n_samples=20, atol=1e-6)
        assert SampleConfig.from_dict(cfg.to_dict()) == cfg

    def test_tolerance_is_absolute_plus_relative(self):
        cfg = SampleConfig(atol=1e-3, rtol=1e-2)
        assert cfg.tolerance(-10.0) == pytest.approx(0.101)


class TestSampling:
    def test_same_seed_same_points(self):
        a = sample_points(3, SampleConfig(seed=11, n_samples=8))
        b = sample_points(3, SampleConfig(seed=11, n_samples=8))
        assert_array_equal(a, b)

    def test_streams_are_independent(self):
        cfg = SampleConfig(seed=11, n_samples=8)
        a = sample_points(2, cfg, stream=STREAM_POINTS, probes=False)
        b = sample_points(2, cfg, stream=STREAM_PAIRS, probes=False)
        assert not np.allclose(a, b)

    def test_probes_come_first(self):
        cfg = SampleConfig(n_samples=4, scale=2.0)
        points = sample_points(2, cfg)
        assert points.shape == (9, 2)
        assert_array_equal(points[:5], probe_points(2, 2.0))
        assert_array_equal(points[:5], [[0, 0], [2, 0], [0, 2], [-2, 0], [0, -2]])

    def test_count_overrides_sample_size(self):
        points = sample_points(2, SampleConfig(n_samples=50), probes=False, count=6)
        assert points.shape == (6, 2)

    def test_pairs_include_origin_probes(self):
        xs, ys = sample_pairs(2, SampleConfig(n_samples=3))
        assert xs.shape == ys.shape == (7, 2)
        assert_array_equal(xs[:4], np.zeros((4, 2)))
        assert_array_equal(ys[:2], np.eye(2))


class TestConstancy:
    def test_constant_values(self):
        result = constancy_test(np.full(10, 3.0), SampleConfig())
        assert result.constant
        assert result.spread == 0.0
        assert not result.clearly_varying

    def test_varying_values(self):
        values = np.array([0.0, 1.0, 0.5])
        result = constancy_test(values, SampleConfig())
        assert not result.constant
        assert result.clearly_varying
        assert (result.argmin, result.argmax) == (0, 1)

    def test_tolerance_scales_with_median(self):
        values = np.array([1e6, 1e6 + 1e-3])
        assert constancy_test(values, SampleConfig(atol=0.0, rtol=1e-8)).constant

    def test_small_spread_is_not_a_witness(self):
        # Above the tolerance but below ten tolerances
        values = np.array([0.0, 5e-8])
        result = constancy_test(values, SampleConfig(atol=1e-8, rtol=0.0))
        assert not result.constant
        assert not result.clearly_varying
