"""decide: run the decision engine on a problem's combination."""

import logging

from ..algebra import decide
from ..certificate import Certificate, Verdict
from ..combination import Combination
from ..problem import ProblemFile
from ..sampling import SampleConfig
from . import NUMERICAL_ERRORS, CommandResult

logger = logging.getLogger(__name__)


def certificate_for(comb: Combination, cfg: SampleConfig, rule: str = "auto") -> Certificate:
    """Decide, turning numerical failures into an Inconclusive certificate."""
    try:
        cert = decide(comb, cfg, rule)
    except NUMERICAL_ERRORS as e:
        logger.warning("Decision on %s gave up: %s", comb.label(), e)
        return Certificate.inconclusive(rule, str(e), operator=comb.operator())
    if cert.verdict is Verdict.INCONCLUSIVE:
        logger.warning("Inconclusive (%s): %s", cert.method, cert.diagnostics)
    return cert


def run_decide(problem: ProblemFile, cfg: SampleConfig) -> CommandResult:
    cert = certificate_for(problem.require_combination(), cfg, problem.rule)
    document = {
        "task": "decide",
        "combination": problem.require_combination().to_dict(),
        "config": cfg.to_dict(),
        "certificate": cert.to_dict(),
    }
    return CommandResult(document, cert.exit_code)
