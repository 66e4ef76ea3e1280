"""Symmetries J = J^H = J^{-1} and their eigenspace splitting."""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from . import subspace as sp
from .errors import NotSymmetry
from .subspace import DEFAULT_TOL, Subspace, as_matrix

__all__ = ["Symmetry", "validate_symmetry", "SYMMETRY_TOL"]

SYMMETRY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Symmetry:
    matrix: np.ndarray
    plus_space: Subspace
    minus_space: Subspace

    @property
    def n(self):
        return self.matrix.shape[0]

    @property
    def signature(self):
        return self.plus_space.dim, self.minus_space.dim

    @property
    def plus_projection(self):
        """``J⁺ = (I + J) / 2``."""
        return (np.eye(self.n) + self.matrix) / 2

    @property
    def minus_projection(self):
        """``J⁻ = (I - J) / 2``."""
        return (np.eye(self.n) - self.matrix) / 2

    def __repr__(self):
        p, m = self.signature
        return f"Symmetry(n={self.n}, signature=({p}, {m}))"


def validate_symmetry(M, cfg=DEFAULT_TOL, tol=SYMMETRY_TOL):
    """Check ``J = J^H`` and ``J² = I`` (each within ``tol``, Frobenius)."""
    if isinstance(M, Symmetry):
        return M
    J = as_matrix(M, square=True)
    n = J.shape[0]
    I = np.eye(n)
    residuals = {
        "selfadjoint": _kernels.hermitian_residual(J),
        "involution": _kernels.product_residual(J, J, I),
    }
    if residuals["selfadjoint"] > tol or residuals["involution"] > tol:
        raise NotSymmetry(f"not a symmetry: residuals {residuals}", residuals)
    plus = sp.column_space(I + J, cfg)
    minus = sp.column_space(I - J, cfg)
    if plus.dim + minus.dim != n:
        raise NotSymmetry("eigenspaces of J do not span the space", residuals)
    J = J.copy()
    J.setflags(write=False)
    return Symmetry(J, plus, minus)
