"""Tests for the independent projection oracles."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from projcert.errors import DidNotConverge, UnsupportedDimension
from projcert.oracles import (
    FW_GAP_TOL,
    OPEN_LOOP_GAP_TOL,
    block_coordinate_sum_project,
    dykstra_project,
    frank_wolfe_project,
    grid_oracle_project,
    nnls_cone_project,
    oracle_project,
    oracle_tolerance,
)
from projcert.sets import (
    Ball,
    ConeIntersection,
    FinitelyGeneratedCone,
    Halfspace,
    MinkowskiSum,
    Polytope,
    Ray,
    TruncatedCone,
    box,
    interval,
    subspace,
)

TRIANGLE = np.array([[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]])


class TestFrankWolfe:
    @pytest.mark.parametrize(
        "x", [[0.3, -1.0], [2.0, 2.0], [-1.0, 0.5]], ids=["bottom-edge", "hypotenuse", "left-edge"]
    )
    def test_matches_polytope_projection(self, x):
        x = np.array(x)
        assert_allclose(frank_wolfe_project(TRIANGLE, x), Polytope(TRIANGLE).project(x), atol=1e-8)

    def test_open_loop_at_a_vertex(self):
        y = frank_wolfe_project(TRIANGLE, np.array([-1.0, -1.0]), step_rule="open-loop")
        assert_allclose(y, [0.0, 0.0])

    def test_open_loop_converges_to_an_edge_midpoint(self):
        # The optimum sits inside an edge, where 2/(k+2) steps zigzag
        unit_triangle = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        y = frank_wolfe_project(unit_triangle, np.array([1.0, 1.0]), step_rule="open-loop")
        assert_allclose(y, [0.5, 0.5], atol=1e-3)

    @pytest.mark.parametrize(
        "step_rule, gap_tol", [("away", FW_GAP_TOL), ("open-loop", OPEN_LOOP_GAP_TOL)], ids=["away", "open-loop"]
    )
    def test_gap_tolerance_follows_step_rule(self, step_rule, gap_tol):
        x = np.array([1.0, 1.0])
        unit_triangle = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        y = frank_wolfe_project(unit_triangle, x, step_rule=step_rule)
        gap = float(np.max((unit_triangle - y) @ (x - y)))
        assert gap <= gap_tol * (1.0 + x @ x)

    def test_interior_point_is_fixed(self):
        x = np.array([0.5, 0.5])
        assert_allclose(frank_wolfe_project(TRIANGLE, x), x, atol=1e-8)

    def test_budget(self):
        with pytest.raises(DidNotConverge):
            frank_wolfe_project(TRIANGLE, np.array([2.0, 2.0]), step_rule="open-loop", max_iterations=3)


class TestConeOracles:
    def test_nnls_on_oblique_generators(self):
        gens = np.array([[1.0, 0.0], [1.0, 1.0]])
        assert_allclose(nnls_cone_project(gens, np.array([0.0, 2.0])), [1.0, 1.0], atol=1e-12)
        assert_allclose(nnls_cone_project(gens, np.array([2.0, 1.0])), [2.0, 1.0], atol=1e-12)

    def test_dykstra_on_quadrants(self):
        first = Halfspace([1.0, 0.0], 0.0).project
        second = Halfspace([0.0, 1.0], 0.0).project
        assert_allclose(dykstra_project(first, second, np.array([1.0, 2.0])), [0.0, 0.0], atol=1e-9)

    def test_dykstra_on_ball_and_halfspace(self):
        # Plain alternating projections would stop at a non-nearest point
        ball = Ball([0.0, 0.0], 1.0).project
        half = Halfspace([0.0, -1.0], 0.0).project
        y = dykstra_project(ball, half, np.array([2.0, -1.0]))
        assert_allclose(y, [1.0, 0.0], atol=1e-6)

    def test_sum_oracle(self):
        parts = (Ray([1.0, 0.0]), Ray([0.0, 1.0]))
        y = block_coordinate_sum_project(parts, np.array([-1.0, 3.0]))
        assert_allclose(y, [0.0, 3.0], atol=1e-9)


class TestGridOracle:
    @pytest.mark.parametrize(
        "s, x",
        [
            (Ball([0.0, 0.0], 1.0), [2.0, 1.0]),
            (box([0.0, 0.0], [1.0, 1.0]), [2.0, -0.5]),
            (Halfspace([1.0, 1.0], 1.0), [2.0, 2.0]),
            (interval(-1.0, 2.0), [5.0]),
        ],
        ids=["ball", "box", "halfspace", "interval"],
    )
    def test_agrees_with_closed_form(self, s, x):
        x = np.array(x)
        y = grid_oracle_project(s, x, 1e-3)
        assert np.linalg.norm(y - s.project(x)) <= oracle_tolerance(s, 1e-3)

    @pytest.mark.parametrize(
        "s, x, expected",
        [
            (TruncatedCone(Ray([1.0, 0.0]), 1.0), [3.0, -2.0], [1.0, 0.0]),
            (Ball([0.0, 0.0], 2.0), [-3.0, 4.0], [-1.2, 1.6]),
            (Ball(np.zeros(3), 1.0), [0.0, 3.0, 4.0], [0.0, 0.6, 0.8]),
            (box([0.0, 0.0, 0.0], [1.0, 1.0, 1.0]), [2.0, -1.0, 0.5], [1.0, 0.0, 0.5]),
        ],
        ids=["2d-truncated-ray", "2d-ball", "3d-ball", "3d-box"],
    )
    def test_outside_point_through_dispatcher(self, s, x, expected):
        y = oracle_project(s, np.array(x), 1e-3)
        assert np.linalg.norm(y - np.array(expected)) <= oracle_tolerance(s, 1e-3)

    def test_point_inside_is_returned(self):
        x = np.array([0.2, 0.3])
        y = grid_oracle_project(Ball([0.0, 0.0], 1.0), x, 1e-3)
        assert np.linalg.norm(y - x) <= oracle_tolerance(Ball([0.0, 0.0], 1.0), 1e-3)

    def test_rejects_high_dimension(self):
        with pytest.raises(UnsupportedDimension):
            grid_oracle_project(Ball(np.zeros(4), 1.0), np.ones(4), 1e-3)


class TestDispatcher:
    def test_routes_by_variant(self):
        cone = FinitelyGeneratedCone([[1.0, 0.0], [1.0, 1.0]])
        assert_allclose(oracle_project(cone, np.array([0.0, 2.0])), [1.0, 1.0], atol=1e-12)
        meet = ConeIntersection(Halfspace([1.0, 0.0], 0.0), Halfspace([0.0, 1.0], 0.0))
        assert_allclose(oracle_project(meet, np.array([1.0, -2.0])), [0.0, -2.0], atol=1e-9)
        line = MinkowskiSum((Ray([1.0, 1.0]), Ray([-1.0, -1.0])))
        assert_allclose(
            oracle_project(line, np.array([2.0, 0.0])), subspace([[1.0, 1.0]], 2).project([2.0, 0.0]), atol=1e-9
        )

    def test_tolerances(self):
        assert oracle_tolerance(Polytope(TRIANGLE), 1e-3) == 1e-6
        assert oracle_tolerance(Ball([0.0, 0.0], 1.0), 1e-3) == pytest.approx(2e-3 * np.sqrt(2.0))
