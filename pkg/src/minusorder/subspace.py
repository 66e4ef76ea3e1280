"""Subspaces of C^n and idempotents built from a (range, kernel) pair.

A subspace is stored as an orthonormal column basis. All rank decisions go
through one rule: a singular value counts when it exceeds
``rank_rel_tol * sigma_max * max(rows, cols)``. Intersections are computed
by De Morgan, ``S1 ∩ S2 = (S1^⊥ + S2^⊥)^⊥``, so that rule is the only
tolerance scheme in the module.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (DimensionMismatch, IllConditioned, InvalidMatrix,
                     NotComplementary)

__all__ = ["ToleranceConfig", "DEFAULT_TOL", "Subspace", "as_matrix",
           "column_space", "null_space", "sum", "intersect", "complement",
           "contains", "equal", "distance", "is_direct_sum",
           "ortho_projection", "idempotent_from_range_kernel",
           "canonical_unit_vector", "zero_subspace", "full_space",
           "span"]

#: Condition number beyond which idempotent_from_range_kernel refuses.
MAX_COND = 1e8


@dataclass(frozen=True)
class ToleranceConfig:
    """Independent tolerance knobs.

    rank_rel_tol : relative singular-value cutoff for numerical rank.
    idem_tol : relative Frobenius tolerance for operator identities
        (idempotency, minus-order products, J-projection residuals).
    subspace_eq_tol : absolute Frobenius tolerance for subspace
        containment and equality on orthonormal bases.
    """

    rank_rel_tol: float = 1e-10
    idem_tol: float = 1e-8
    subspace_eq_tol: float = 1e-8

    def __post_init__(self):
        for name in ("rank_rel_tol", "idem_tol", "subspace_eq_tol"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")


DEFAULT_TOL = ToleranceConfig()


def as_matrix(M, square=False):
    """Return ``M`` as a finite 2-D complex128 array.

    Raises InvalidMatrix on wrong rank, empty shape or non-finite entries.
    """
    try:
        A = np.asarray(M, dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise InvalidMatrix(f"cannot convert to a complex matrix: {exc}") from None
    if A.ndim != 2 or A.shape[0] == 0 or A.shape[1] == 0:
        raise InvalidMatrix(f"expected a non-empty 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidMatrix("matrix has NaN or infinite entries")
    if square and A.shape[0] != A.shape[1]:
        raise InvalidMatrix(f"expected a square matrix, got shape {A.shape}")
    return A


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of C^n given by an orthonormal basis (n x k, k may be 0)."""

    ambient_dim: int
    basis: np.ndarray
    rank_tol: float = field(default=DEFAULT_TOL.rank_rel_tol)

    def __post_init__(self):
        B = np.asarray(self.basis, dtype=np.complex128)
        if B.ndim != 2 or B.shape[0] != self.ambient_dim:
            raise InvalidMatrix(f"basis shape {B.shape} does not match ambient dimension {self.ambient_dim}")
        B = B.copy()
        B.setflags(write=False)
        object.__setattr__(self, "basis", B)

    @property
    def dim(self):
        return self.basis.shape[1]

    @property
    def is_zero(self):
        return self.dim == 0

    @property
    def is_full(self):
        return self.dim == self.ambient_dim

    def projector(self):
        return ortho_projection(self)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim})"


def zero_subspace(n):
    return Subspace(n, np.zeros((n, 0), dtype=np.complex128))


def full_space(n):
    return Subspace(n, np.eye(n, dtype=np.complex128))


def _rank_from_singular_values(s, shape, rank_rel_tol):
    if s.size == 0 or s[0] == 0.0:
        return 0
    # unit floor: round-off residue of an O(1) computation is not a direction
    cutoff = rank_rel_tol * max(s[0], 1.0) * max(shape)
    return int(np.count_nonzero(s > cutoff))


def column_space(M, cfg=DEFAULT_TOL):
    """Orthonormal basis of the numerical column space of ``M``."""
    A = as_matrix(M)
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    r = _rank_from_singular_values(s, A.shape, cfg.rank_rel_tol)
    return Subspace(A.shape[0], U[:, :r], cfg.rank_rel_tol)


def null_space(M, cfg=DEFAULT_TOL):
    """Orthonormal basis of the numerical null space of ``M``.

    Uses the right singular vectors belonging to singular values at or
    below the rank cutoff.
    """
    A = as_matrix(M)
    _, s, Vh = np.linalg.svd(A, full_matrices=True)
    r = _rank_from_singular_values(s, A.shape, cfg.rank_rel_tol)
    return Subspace(A.shape[1], Vh[r:].conj().T, cfg.rank_rel_tol)


def span(vectors, cfg=DEFAULT_TOL):
    """Subspace spanned by the columns of ``vectors`` (convenience)."""
    return column_space(vectors, cfg)


def _check_same_ambient(*spaces):
    n = spaces[0].ambient_dim
    for S in spaces[1:]:
        if S.ambient_dim != n:
            raise DimensionMismatch(f"ambient dimensions differ: {n} vs {S.ambient_dim}")
    return n


def sum(S1, S2, cfg=DEFAULT_TOL):  # noqa: A001 - mirrors the subspace operation
    """``S1 + S2``: column space of the stacked bases."""
    n = _check_same_ambient(S1, S2)
    if S1.is_zero and S2.is_zero:
        return zero_subspace(n)
    return column_space(np.hstack([S1.basis, S2.basis]), cfg)


def complement(S):
    """Orthogonal complement ``S^⊥``."""
    n = S.ambient_dim
    if S.is_zero:
        return full_space(n)
    if S.is_full:
        return zero_subspace(n)
    U, _, _ = np.linalg.svd(S.basis, full_matrices=True)
    return Subspace(n, U[:, S.dim:], S.rank_tol)


def intersect(S1, S2, cfg=DEFAULT_TOL):
    """``S1 ∩ S2`` computed as ``(S1^⊥ + S2^⊥)^⊥``."""
    _check_same_ambient(S1, S2)
    return complement(sum(complement(S1), complement(S2), cfg))


def contains(S1, S2, cfg=DEFAULT_TOL):
    """True iff ``S2 ⊆ S1`` within ``cfg.subspace_eq_tol``."""
    return _containment_residual(S1, S2) <= cfg.subspace_eq_tol


def _containment_residual(S1, S2):
    _check_same_ambient(S1, S2)
    if S2.is_zero:
        return 0.0
    B1, B2 = S1.basis, S2.basis
    return float(np.linalg.norm(B2 - B1 @ (B1.conj().T @ B2)))


def distance(S1, S2):
    """``‖P_S1 - P_S2‖_F``, a basis-independent metric."""
    _check_same_ambient(S1, S2)
    return float(np.linalg.norm(ortho_projection(S1) - ortho_projection(S2)))


def equal(S1, S2, cfg=DEFAULT_TOL):
    return distance(S1, S2) <= cfg.subspace_eq_tol


def _stacked_singular_values(S1, S2):
    T = np.hstack([S1.basis, S2.basis])
    return np.linalg.svd(T, compute_uv=False)


def is_direct_sum(S1, S2, cfg=DEFAULT_TOL):
    """True iff ``S1 ∔ S2 = C^n``."""
    n = _check_same_ambient(S1, S2)
    if S1.dim + S2.dim != n:
        return False
    s = _stacked_singular_values(S1, S2)
    return bool(s[-1] > cfg.rank_rel_tol * s[0] * n)


def ortho_projection(S):
    """Orthogonal projection ``basis @ basis^H`` onto ``S``."""
    B = S.basis
    return B @ B.conj().T


def idempotent_from_range_kernel(R, N, cfg=DEFAULT_TOL):
    """The idempotent onto ``R`` along ``N``.

    Computed as ``[U|V] diag(I_r, 0) [U|V]^{-1}``. Raises NotComplementary
    if ``R ∔ N`` is not the whole space and IllConditioned if the stacked
    basis has condition number above 1e8.
    """
    n = _check_same_ambient(R, N)
    if not is_direct_sum(R, N, cfg):
        raise NotComplementary(f"range (dim {R.dim}) and kernel (dim {N.dim}) are not complementary in C^{n}")
    if R.is_zero:
        return np.zeros((n, n), dtype=np.complex128)
    if N.is_zero:
        return np.eye(n, dtype=np.complex128)
    T = np.hstack([R.basis, N.basis])
    cond = float(np.linalg.cond(T))
    if cond > MAX_COND:
        raise IllConditioned(f"range/kernel basis condition number {cond:.3g} exceeds {MAX_COND:.0e}", cond)
    Tinv_top = np.linalg.solve(T, np.eye(n, dtype=np.complex128))[:R.dim]
    return R.basis @ Tinv_top


def canonical_unit_vector(S, tie_tol=1e-12):
    """A deterministic, basis-independent unit vector in ``S``.

    Picks the column of ``P_S`` with the largest norm (first index among
    ties within ``tie_tol``) and normalizes it, with its largest-modulus
    entry made real positive.
    """
    if S.is_zero:
        raise ValueError("zero subspace has no unit vectors")
    P = ortho_projection(S)
    weights = np.real(np.diag(P))
    j = int(np.flatnonzero(weights >= weights.max() - tie_tol)[0])
    v = P[:, j] / np.linalg.norm(P[:, j])
    return fix_phase(v)


def fix_phase(v):
    """Rotate ``v`` so its first largest-modulus entry is real positive."""
    mags = np.abs(v)
    k = int(np.flatnonzero(mags >= mags.max() - 1e-12)[0])
    return v * (np.conj(v[k]) / mags[k])
