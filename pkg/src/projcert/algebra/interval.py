"""Pairs of intervals on the real line.

P_C + P_D is a projector iff both intervals are singletons, or they meet
exactly in {0}. A pair where one side is {0} is a projector too, since
P_{0} vanishes; that case is decided before the dichotomy.
"""

import logging

import numpy as np

from ..certificate import Certificate, Confidence
from ..combination import Combination
from ..errors import WrongDimension
from ..sampling import WITNESS_FACTOR, SampleConfig
from ..sets import ConvexSet, Singleton, interval
from .criteria import pair_product, run_constancy

logger = logging.getLogger(__name__)

METHOD = "1d-dichotomy"


def _endpoints(s: ConvexSet) -> tuple[float, float]:
    lo, hi = s.bounds()
    return float(lo[0]), float(hi[0])


def _meet_only_at_origin(c: tuple[float, float], d: tuple[float, float]) -> bool:
    lo, hi = max(c[0], d[0]), min(c[1], d[1])
    return lo == 0.0 and hi == 0.0


def _probe_grid(c: tuple[float, float], d: tuple[float, float]) -> np.ndarray:
    """Breakpoints, the midpoints between them, and points beyond both ends."""
    finite = sorted({v for v in (*c, *d, 0.0) if np.isfinite(v)})
    mids = [(a + b) / 2 for a, b in zip(finite, finite[1:])]
    outer = [finite[0] - 1.0 - abs(finite[0]), finite[-1] + 1.0 + abs(finite[-1])]
    return np.array(sorted({*finite, *mids, *outer}))[:, None]


def decide_1d_pair(c: ConvexSet, d: ConvexSet, cfg: SampleConfig | None = None) -> Certificate:
    """Decide P_C + P_D for two closed intervals of ℝ."""
    for s in (c, d):
        if s.dim != 1:
            raise WrongDimension(f"the interval rule needs sets of dimension 1, got {s.dim}")
    cfg = cfg or SampleConfig()
    operator = Combination.sum_of((c, d)).operator()

    if isinstance(c, Singleton) and isinstance(d, Singleton):
        a, b = float(c.u[0]), float(d.u[0])
        return Certificate.projector(METHOD, Singleton([a + b]), gamma=a * b, operator=operator)

    for zero, other in ((c, d), (d, c)):
        if isinstance(zero, Singleton) and zero.u[0] == 0.0:
            logger.debug("Interval pair with {0}: the sum is P of the other interval")
            return Certificate.projector(METHOD, other, gamma=0.0, operator=operator)

    ic, id_ = _endpoints(c), _endpoints(d)
    if _meet_only_at_origin(ic, id_):
        result = interval(ic[0] + id_[0], ic[1] + id_[1])
        return Certificate.projector(METHOD, result, gamma=0.0, operator=operator)

    grid = _probe_grid(ic, id_)
    outcome = run_constancy(pair_product(c, d), grid, cfg, "⟨P_C ξ, P_D ξ⟩ is constant")
    if outcome.witness is None:
        # The breakpoint grid always separates two distinct values; tiny
        # intervals can still fall under the tolerance
        return Certificate.inconclusive(
            METHOD,
            f"intervals fail the dichotomy but no breakpoint varies by {WITNESS_FACTOR:g}x tolerance",
            evidence=outcome.evidence,
            operator=operator,
        )
    return Certificate.refuted(
        METHOD,
        outcome.witness,
        confidence=Confidence.EXACT,
        evidence=outcome.evidence,
        operator=operator,
    )
