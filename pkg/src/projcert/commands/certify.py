"""certify: decision plus the numerical checks on Σ αᵢ P_{Cᵢ}.

The checks and the identity suite are reported next to the certificate;
they never change the verdict or the exit code.
"""

import logging

from ..certifier import run_checks
from ..identities import identity_suite
from ..problem import ProblemFile
from ..sampling import STREAM_RESAMPLE, SampleConfig, sample_points
from . import CommandResult
from .decide import certificate_for

logger = logging.getLogger(__name__)


def run_certify(problem: ProblemFile, cfg: SampleConfig) -> CommandResult:
    comb = problem.require_combination()
    cert = certificate_for(comb, cfg, problem.rule)
    operator = cert.operator or comb.operator()

    checks = run_checks(operator, cfg)
    identities = identity_suite(sample_points(comb.dim, cfg, stream=STREAM_RESAMPLE), comb)

    failing = [report.check for report in checks if not report.passed]
    if cert.is_projector and failing:
        logger.warning("Checks failed on a certified projector: %s", ", ".join(failing))

    document = {
        "task": "certify",
        "combination": comb.to_dict(),
        "config": cfg.to_dict(),
        "certificate": cert.to_dict(),
        "checks": [report.to_dict() for report in checks],
        "identities": identities.to_dict(),
    }
    return CommandResult(document, cert.exit_code)
