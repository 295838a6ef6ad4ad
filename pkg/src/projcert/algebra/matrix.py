"""Linear maps: L is an orthogonal projector iff L = LᵀL (equivalently
symmetric and idempotent). The range basis comes from a pivoted QR.
"""

import logging
from dataclasses import dataclass
from typing import Any

import numpy as np
import scipy.linalg

from ..errors import InvalidDescriptor, NonSquare
from ..sets import Subspace
from ..utils import vector_to_json

logger = logging.getLogger(__name__)

PROJECTOR_TOL = 1e-10
RANK_TOL = 1e-10


@dataclass(frozen=True)
class MatrixCheck:
    is_orthogonal_projector: bool
    residual: float
    range_basis: np.ndarray | None = None

    def to_subspace(self) -> Subspace | None:
        if self.range_basis is None:
            return None
        return Subspace(self.range_basis, self.range_basis.shape[1])

    def to_dict(self) -> dict[str, Any]:
        return {
            "is_orthogonal_projector": self.is_orthogonal_projector,
            "residual": self.residual,
            "range_basis": None
            if self.range_basis is None
            else [vector_to_json(row) for row in self.range_basis],
        }


def matrix_projector_check(matrix: Any) -> MatrixCheck:
    """Test ‖L − LᵀL‖_max ≤ 1e-10 and, when it holds, return an orthonormal range basis."""
    try:
        mat = np.asarray(matrix, dtype=float)
    except (TypeError, ValueError) as e:
        raise InvalidDescriptor(f"matrix is not numeric: {e}") from e
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.size == 0:
        raise NonSquare(f"expected a nonempty square matrix, got shape {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise InvalidDescriptor("matrix has non-finite entries")

    residual = float(np.max(np.abs(mat - mat.T @ mat)))
    if residual > PROJECTOR_TOL:
        logger.debug("Matrix is not an orthogonal projector (residual %.3e)", residual)
        return MatrixCheck(False, residual)

    q, r, _ = scipy.linalg.qr(mat, pivoting=True)
    diag = np.abs(np.diag(r))
    cutoff = RANK_TOL * max(1.0, float(diag[0]) if diag.size else 0.0)
    rank = int(np.sum(diag > cutoff))
    basis = q[:, :rank].T
    return MatrixCheck(True, residual, basis)
