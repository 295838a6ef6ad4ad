"""Tests for the shared criteria: g, constancy, witnesses, result sets."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from projcert.algebra.criteria import (
    are_polar_pair,
    classify_values,
    distance_identity_gap,
    first_violation,
    g_values,
    pair_product,
    pairwise_products,
    range_witness,
    reproduces,
    simplify_sum,
)
from projcert.certificate import WitnessKind
from projcert.combination import Combination
from projcert.sampling import SampleConfig
from projcert.sets import (
    Ball,
    Box,
    FinitelyGeneratedCone,
    Halfspace,
    MinkowskiSum,
    PolarCone,
    Ray,
    Singleton,
    Subspace,
    Translate,
    box,
    interval,
    is_whole_space,
    subspace,
)


class TestGValues:
    def test_unit_coefficients_reduce_to_pairwise_products(self, make_points):
        sets = [Ray([1.0, 0.3]), Ball([1.0, -1.0], 0.5), Halfspace([0.0, 1.0], 1.0)]
        xs = make_points(2, 25, scale=3.0)
        expected = sum(pairwise_products(sets, xs).values())
        assert_allclose(g_values(Combination.sum_of(sets), xs), expected, atol=1e-12)

    def test_orthogonal_rays_are_constant(self, make_points):
        comb = Combination.sum_of([Ray([1.0, 0.0]), Ray([0.0, 1.0])])
        assert_allclose(g_values(comb, make_points(2, 20)), 0.0, atol=1e-15)

    def test_single_term_vanishes(self, make_points):
        # α = α₁ and the pair sum has only the zero diagonal
        comb = Combination.of([(1.0, Ball([0.0, 0.0], 1.0))])
        assert_allclose(g_values(comb, make_points(2, 10)), 0.0, atol=1e-15)

    def test_pair_product(self):
        q = pair_product(interval(0.0, 1.0), interval(0.0, 1.0))
        assert_allclose(q(np.array([[-1.0], [0.5], [3.0]])), [0.0, 0.25, 1.0])


class TestClassifyValues:
    def test_constant_values_give_gamma(self):
        points = np.zeros((3, 2))
        outcome = classify_values(np.array([2.0, 2.0, 2.0]), points, SampleConfig(), "c")
        assert outcome.constant
        assert not outcome.refuted
        assert outcome.gamma == 2.0

    def test_varying_values_give_witness(self):
        points = np.array([[0.0], [1.0], [2.0]])
        outcome = classify_values(np.array([1.0, 0.0, 3.0]), points, SampleConfig(), "c")
        assert outcome.refuted
        w = outcome.witness
        assert w.kind is WitnessKind.CONSTANCY
        assert [float(p[0]) for p in w.points] == [1.0, 2.0]
        assert w.values == (0.0, 3.0)

    def test_borderline_spread_is_neither(self):
        cfg = SampleConfig(atol=1e-8, rtol=0.0)
        outcome = classify_values(np.array([0.0, 5e-8]), np.zeros((2, 1)), cfg, "c")
        assert not outcome.constant
        assert not outcome.refuted
        assert "10x tolerance" in outcome.note()


class TestWitnessHelpers:
    def test_first_violation(self):
        assert first_violation(np.array([0.0, 0.5, 2.0, 3.0]), 1.0) == 2
        assert first_violation(np.array([0.0, 0.5]), 1.0) is None

    def test_constancy_witness_reproduces(self):
        comb = Combination.sum_of([interval(0.0, 1.0), interval(0.0, 1.0)])
        points = np.array([[-1.0], [1.0]])
        outcome = classify_values(g_values(comb, points), points, SampleConfig(), "g constant")
        assert reproduces(outcome.witness, SampleConfig(), quantity=lambda xs: g_values(comb, xs))

    def test_range_witness_reproduces(self):
        op = Combination.sum_of([Ray([1.0, 0.0]), Ray([1.0, 0.0])]).operator()
        x = np.array([1.0, 0.0])
        witness = range_witness(x, op(x), "T fixes its range")
        assert witness.kind is WitnessKind.RANGE
        assert reproduces(witness, SampleConfig(), operator=op.many)

    def test_identity_operator_does_not_reproduce(self):
        x = np.array([1.0, 2.0])
        witness = range_witness(x, x, "T fixes its range")
        assert not reproduces(witness, SampleConfig(), operator=lambda xs: xs)


class TestSimplifySum:
    def test_singletons_add(self):
        result = simplify_sum([Singleton([1.0, 2.0]), Singleton([3.0, 4.0])])
        assert isinstance(result, Singleton)
        assert_allclose(result.u, [4.0, 6.0])

    def test_antipodal_rays_give_a_line(self):
        result = simplify_sum([Ray([1.0, 1.0]), Ray([-1.0, -1.0])])
        assert isinstance(result, Subspace)
        assert result.rank == 1

    def test_orthogonal_rays_give_a_cone(self):
        result = simplify_sum([Ray([1.0, 0.0]), Ray([0.0, 1.0])])
        assert isinstance(result, FinitelyGeneratedCone)

    def test_four_coordinate_rays_fill_the_plane(self):
        rays = [Ray([1.0, 0.0]), Ray([-1.0, 0.0]), Ray([0.0, 1.0]), Ray([0.0, -1.0])]
        assert is_whole_space(simplify_sum(rays))

    def test_subspaces_merge(self):
        result = simplify_sum([subspace([[1.0, 0.0, 0.0]], 3), subspace([[0.0, 1.0, 0.0]], 3)])
        assert isinstance(result, Subspace)
        assert result.rank == 2

    def test_polar_pair_fills_the_space(self):
        assert is_whole_space(simplify_sum([Ray([1.0, 0.0]), Halfspace([1.0, 0.0], 0.0)]))

    def test_intervals(self):
        lower, upper = simplify_sum([interval(-2.0, 0.0), interval(0.0, 3.0)]).bounds()
        assert (lower[0], upper[0]) == (-2.0, 3.0)

    def test_shift_moves_a_box(self):
        result = simplify_sum([box([0.0, 0.0], [1.0, 1.0]), Singleton([2.0, -1.0])])
        assert isinstance(result, Box)
        assert_allclose(result.lower, [2.0, -1.0])

    def test_shift_of_anything_else_is_a_translate(self):
        result = simplify_sum([Ball([0.0, 0.0], 1.0), Singleton([0.0, 3.0])])
        assert isinstance(result, Translate)

    def test_unknown_structure_stays_a_sum(self):
        result = simplify_sum([Ball([0.0, 0.0], 1.0), Halfspace([1.0, 1.0], 2.0)])
        assert isinstance(result, MinkowskiSum)


class TestArePolarPair:
    @pytest.mark.parametrize(
        "k, s, expected",
        [
            (Ray([1.0, 0.0]), Halfspace([1.0, 0.0], 0.0), True),
            (Halfspace([0.0, 1.0], 0.0), Ray([0.0, 1.0]), True),
            (FinitelyGeneratedCone([[1.0, 0.0], [1.0, 1.0]]), PolarCone(FinitelyGeneratedCone([[1.0, 0.0], [1.0, 1.0]])), True),
            (Ray([1.0, 0.0]), Ray([-1.0, 0.0]), False),
            (Ball([0.0, 0.0], 1.0), Halfspace([1.0, 0.0], 0.0), False),
        ],
        ids=["ray-halfspace", "halfspace-ray", "explicit-polar", "opposite-rays", "not-cones"],
    )
    def test_detection(self, k, s, expected):
        assert are_polar_pair(k, s) is expected


class TestDistanceIdentity:
    def test_holds_for_the_true_result(self, make_points):
        comb = Combination.sum_of([Ray([1.0, 0.0]), Ray([0.0, 1.0])])
        quadrant = box([0.0, 0.0], [np.inf, np.inf])
        assert distance_identity_gap(comb, quadrant, 0.0, make_points(2, 30)) < 1e-12

    def test_detects_a_wrong_result(self, make_points):
        comb = Combination.sum_of([Ray([1.0, 0.0]), Ray([0.0, 1.0])])
        assert distance_identity_gap(comb, Ray([1.0, 0.0]), 0.0, make_points(2, 30)) > 1e-3
