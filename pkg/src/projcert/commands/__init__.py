"""CLI tasks, one module per subcommand.

  - decide: certificate for a combination
  - certify: decision plus numerical checks and the identity suite
  - oracle_compare: closed-form projections against the oracles
  - reproduce: regression fixtures, single or all, and their listing

Every task returns a CommandResult: the JSON document for stdout and the
process exit code.
"""

from dataclasses import dataclass
from typing import Any

from ..errors import DidNotConverge, NotSupported, UnsupportedDimension, UnsupportedExactProjection

# Solver and closed-form failures: reported as Inconclusive, exit 2
NUMERICAL_ERRORS = (DidNotConverge, NotSupported, UnsupportedDimension, UnsupportedExactProjection)


@dataclass(frozen=True)
class CommandResult:
    document: Any
    exit_code: int
