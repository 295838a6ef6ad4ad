"""Decision engine: is a combination of projectors itself a projector?

Modules:
  - criteria: the constancy quantity g, witness helpers, result naming
  - interval: pairs of intervals on the real line
  - cones: rays, generated cones, cone families, intersections, differences
  - sums: pair sums, subspace families, general sums
  - linear: simplification and routing of Σ αᵢ P_{Cᵢ}, scalar and convex rules
  - matrix: orthogonal-projector test for matrices
  - rules: named rules for problem files and the CLI
"""

from .cones import (
    cone_difference_projector,
    cone_intersection_projector,
    decide_cone_family_sum,
    decide_generated_cone,
    decide_ray_pair,
)
from .criteria import g_values, reproduces
from .interval import decide_1d_pair
from .linear import (
    decide_convex_combination,
    decide_generic,
    decide_linear_combination,
    decide_scalar_multiple,
)
from .matrix import MatrixCheck, matrix_projector_check
from .rules import RULES, decide
from .sums import cone_inclusion_holds, decide_pair_sum, decide_subspace_sum, decide_sum

__all__ = [
    "RULES",
    "MatrixCheck",
    "cone_difference_projector",
    "cone_inclusion_holds",
    "cone_intersection_projector",
    "decide",
    "decide_1d_pair",
    "decide_cone_family_sum",
    "decide_convex_combination",
    "decide_generated_cone",
    "decide_generic",
    "decide_linear_combination",
    "decide_pair_sum",
    "decide_ray_pair",
    "decide_scalar_multiple",
    "decide_subspace_sum",
    "decide_sum",
    "g_values",
    "matrix_projector_check",
    "reproduces",
]
