"""Exception hierarchy for projcert.

Input problems (bad descriptors, bad weights, malformed problem files)
subclass ValueError as well as ProjcertError, so the CLI can map every
input error to exit code 64 with a single except clause. Numerical
failures (solver budgets, unsupported closed forms) are plain
ProjcertError and become Inconclusive certificates.
"""


class ProjcertError(Exception):
    """Base class for all projcert errors."""


# ── Input errors ─────────────────────────────────────────────────────────


class InvalidDescriptor(ProjcertError, ValueError):
    """A set descriptor violates its invariants or cannot be parsed."""


class DimensionMismatch(ProjcertError, ValueError):
    """Vectors or descriptors of different ambient dimension were combined."""


class InvalidWeights(ProjcertError, ValueError):
    """Convex-combination weights outside (0, 1] or not summing to 1."""


class NotACone(InvalidDescriptor):
    """A cone rule received a descriptor that is not a cone variant."""


class ZeroVector(InvalidDescriptor):
    """A ray direction or cone generator is the zero vector."""


class WrongDimension(ProjcertError, ValueError):
    """An operation restricted to a fixed dimension got another one."""


class NonSquare(ProjcertError, ValueError):
    """matrix_projector_check received a non-square matrix."""


class UnsupportedFunction(ProjcertError, ValueError):
    """moreau_envelope_check received a function without a known prox."""


class UnknownFixture(ProjcertError, ValueError):
    """reproduce was asked for a fixture name that does not exist."""


class InvalidProblem(ProjcertError, ValueError):
    """A problem file or sample configuration failed strict validation."""


# ── Numerical errors ─────────────────────────────────────────────────────


class UnsupportedExactProjection(ProjcertError):
    """No closed-form projector exists for this descriptor."""


class NotSupported(ProjcertError):
    """Neither the exact nor the iterative path could produce a result."""


class UnsupportedDimension(ProjcertError):
    """The grid oracle only works in dimension 1 to 3."""


class DidNotConverge(ProjcertError):
    """An iterative solver exhausted its iteration budget."""
