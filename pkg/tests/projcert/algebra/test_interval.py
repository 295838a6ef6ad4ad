"""Tests for the interval-pair dichotomy."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from projcert.algebra import decide_1d_pair
from projcert.certificate import Confidence, Verdict, WitnessKind
from projcert.errors import WrongDimension
from projcert.sets import Ray, Singleton, interval


class TestProjectorCases:
    def test_two_singletons(self):
        cert = decide_1d_pair(Singleton([5.0]), Singleton([-1.0]))
        assert cert.is_projector
        assert cert.confidence is Confidence.EXACT
        assert_allclose(cert.result.u, [4.0])
        assert cert.gamma == -5.0

    @pytest.mark.parametrize(
        "c, d, lo, hi",
        [
            (interval(-2.0, 0.0), interval(0.0, 3.0), -2.0, 3.0),
            (interval(0.0, 3.0), interval(-2.0, 0.0), -2.0, 3.0),
            (interval(-math.inf, 0.0), interval(0.0, math.inf), -math.inf, math.inf),
            (Ray([1.0]), Ray([-1.0]), -math.inf, math.inf),
        ],
        ids=["finite", "swapped", "half-lines", "rays"],
    )
    def test_meeting_only_at_origin(self, c, d, lo, hi):
        cert = decide_1d_pair(c, d)
        assert cert.is_projector
        assert cert.gamma == 0.0
        lower, upper = cert.result.bounds()
        assert (lower[0], upper[0]) == (lo, hi)

    def test_origin_singleton_returns_other_set(self):
        other = interval(1.0, 2.0)
        cert = decide_1d_pair(Singleton([0.0]), other)
        assert cert.is_projector
        assert cert.result is other


class TestRefutations:
    def test_overlapping_intervals(self):
        cert = decide_1d_pair(interval(0.0, 1.0), interval(0.0, 1.0))
        assert cert.verdict is Verdict.NOT_PROJECTOR
        assert cert.confidence is Confidence.EXACT
        assert cert.witness.kind is WitnessKind.CONSTANCY
        assert [float(p[0]) for p in cert.witness.points] == [-1.0, 1.0]
        assert cert.witness.values == (0.0, 1.0)

    @pytest.mark.parametrize(
        "c, d",
        [
            (interval(1.0, 2.0), Singleton([3.0])),
            (interval(-1.0, 1.0), interval(0.0, 5.0)),
            (interval(2.0, 3.0), interval(-3.0, -2.0)),
        ],
        ids=["interval-and-point", "overlap-at-zero-interior", "disjoint"],
    )
    def test_dichotomy_failures(self, c, d):
        assert decide_1d_pair(c, d).is_refuted

    def test_operator_is_attached(self):
        cert = decide_1d_pair(interval(0.0, 1.0), interval(0.0, 1.0))
        assert_allclose(cert.operator(np.array([0.5])), [1.0])


class TestValidation:
    def test_wrong_dimension(self):
        with pytest.raises(WrongDimension):
            decide_1d_pair(Ray([1.0, 0.0]), Ray([0.0, 1.0]))
