"""Named decision rules, selectable from problem files and the CLI.

`auto` runs the full linear-combination router; every other name forces
one rule and checks that the combination has the shape that rule expects.
"""

from collections.abc import Callable

from ..certificate import Certificate
from ..combination import Combination
from ..errors import InvalidProblem
from ..sampling import SampleConfig
from ..sets import Ray
from .cones import (
    cone_difference_projector,
    cone_intersection_projector,
    decide_cone_family_sum,
    decide_generated_cone,
)
from .interval import decide_1d_pair
from .linear import decide_convex_combination, decide_linear_combination
from .sums import decide_pair_sum, decide_subspace_sum

Rule = Callable[[Combination, SampleConfig], Certificate]


def _unit_sets(comb: Combination, rule: str, count: int | None = None) -> list:
    if any(a != 1.0 for a in comb.coefficients):
        raise InvalidProblem(f"rule {rule!r} needs unit coefficients")
    if count is not None and len(comb) != count:
        raise InvalidProblem(f"rule {rule!r} needs exactly {count} terms, got {len(comb)}")
    return list(comb.sets)


def _pair_sum(comb: Combination, cfg: SampleConfig) -> Certificate:
    c, d = _unit_sets(comb, "pair-sum", 2)
    return decide_pair_sum(c, d, cfg)


def _interval_pair(comb: Combination, cfg: SampleConfig) -> Certificate:
    c, d = _unit_sets(comb, "1d", 2)
    return decide_1d_pair(c, d, cfg)


def _subspaces(comb: Combination, cfg: SampleConfig) -> Certificate:
    return decide_subspace_sum(_unit_sets(comb, "subspaces"), cfg)


def _cone_family(comb: Combination, cfg: SampleConfig) -> Certificate:
    return decide_cone_family_sum(_unit_sets(comb, "cone-family"), cfg)


def _generated_cone(comb: Combination, cfg: SampleConfig) -> Certificate:
    sets = _unit_sets(comb, "generated-cone")
    if not all(isinstance(s, Ray) for s in sets):
        raise InvalidProblem("rule 'generated-cone' needs ray terms")
    return decide_generated_cone([s.direction for s in sets], cfg)


def _intersection(comb: Combination, cfg: SampleConfig) -> Certificate:
    k1, k2 = _unit_sets(comb, "cone-intersection", 2)
    return cone_intersection_projector(k1, k2, cfg)


def _difference(comb: Combination, cfg: SampleConfig) -> Certificate:
    if len(comb) != 2 or comb.coefficients != (1.0, -1.0):
        raise InvalidProblem("rule 'cone-difference' needs terms (1, K1), (-1, K2)")
    return cone_difference_projector(comb.sets[0], comb.sets[1], cfg, cone_rule=True)


RULES: dict[str, Rule] = {
    "auto": decide_linear_combination,
    "pair-sum": _pair_sum,
    "subspaces": _subspaces,
    "cone-family": _cone_family,
    "generated-cone": _generated_cone,
    "cone-intersection": _intersection,
    "cone-difference": _difference,
    "convex": decide_convex_combination,
    "1d": _interval_pair,
}


def decide(comb: Combination, cfg: SampleConfig | None = None, rule: str = "auto") -> Certificate:
    """Run the named rule; the certificate keeps the operator it decided on."""
    cfg = cfg or SampleConfig()
    try:
        handler = RULES[rule]
    except KeyError:
        raise InvalidProblem(f"unknown rule {rule!r}; choose from {', '.join(RULES)}") from None
    return handler(comb, cfg)
