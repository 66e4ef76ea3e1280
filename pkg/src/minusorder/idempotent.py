"""Validated idempotents and the extremal orthogonal projections around them.

For an idempotent Q the two extremal orthogonal projections are

* ``q_under(Q)``: the largest orthogonal projection P with P ⪯ Q, the
  projection onto R(Q) ∩ R(Q^H);
* ``q_over(Q)``: the smallest orthogonal projection P with Q ⪯ P, the
  projection onto N(Q + Q^H)^⊥.

Both are computed by two independent formulas and compared; a disagreement
raises FormulaMismatch rather than returning either answer.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from . import subspace as sp
from .errors import FormulaMismatch, NotIdempotent
from .subspace import DEFAULT_TOL, Subspace, as_matrix

__all__ = ["Idempotent", "CanonicalForm", "validate_idempotent",
           "orthogonal_projection_onto", "canonical_form", "abs_value",
           "psd_sqrt", "block_sqrt", "block_tilde", "q_under",
           "q_under_via_abs", "q_over", "identity", "zero"]

#: Tolerance for cross-formula agreement (Frobenius distance of projections).
FORMULA_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Idempotent:
    """A square matrix known to satisfy ``Q @ Q == Q`` within tolerance.

    Build through :func:`validate_idempotent`; the range and kernel are
    computed once and cached here.
    """

    matrix: np.ndarray
    range: Subspace
    kernel: Subspace
    is_orthogonal: bool

    @property
    def n(self):
        return self.matrix.shape[0]

    @property
    def rank(self):
        return self.range.dim

    @property
    def H(self):
        """The adjoint, itself an idempotent (range and kernel swap to the orthogonal complements)."""
        return Idempotent(self.matrix.conj().T, sp.complement(self.kernel),
                          sp.complement(self.range), self.is_orthogonal)

    def complement(self):
        """``I - Q``, whose range is N(Q) and kernel R(Q)."""
        return Idempotent(np.eye(self.n) - self.matrix, self.kernel,
                          self.range, self.is_orthogonal)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __repr__(self):
        kind = "orthogonal" if self.is_orthogonal else "oblique"
        return f"Idempotent(n={self.n}, rank={self.rank}, {kind})"


def _frozen(A):
    A = np.array(A, dtype=np.complex128)
    A.setflags(write=False)
    return A


def validate_idempotent(M, cfg=DEFAULT_TOL):
    """Check ``M`` is idempotent and return it with range/kernel cached.

    The test is ``‖M² - M‖_F <= idem_tol * (1 + ‖M‖_F²)``.
    """
    A = as_matrix(M, square=True)
    res = _kernels.idempotent_residual(A)
    norm = float(np.linalg.norm(A))
    if res > cfg.idem_tol * (1.0 + norm * norm):
        raise NotIdempotent(f"‖M²−M‖_F = {res:.3e} exceeds tolerance", res)
    rng = sp.column_space(A, cfg)
    ker = sp.null_space(A, cfg)
    if not sp.is_direct_sum(rng, ker, cfg):
        raise NotIdempotent("numerical range and kernel are not complementary", res)
    ortho = _kernels.hermitian_residual(A) <= cfg.idem_tol
    return Idempotent(_frozen(A), rng, ker, bool(ortho))


def orthogonal_projection_onto(S):
    """Idempotent wrapper around ``P_S``; range and kernel are known exactly."""
    return Idempotent(_frozen(sp.ortho_projection(S)), S, sp.complement(S), True)


def identity(n):
    return orthogonal_projection_onto(sp.full_space(n))


def zero(n):
    return orthogonal_projection_onto(sp.zero_subspace(n))


def _as_idempotent(Q, cfg):
    return Q if isinstance(Q, Idempotent) else validate_idempotent(Q, cfg)


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    """Block form of Q on M ⊕ (R(Q) ⊖ M) ⊕ R(Q)^⊥ with M = R(Q) ∩ R(Q^H).

    In those coordinates Q = [[I, 0, 0], [0, I, q1_block], [0, 0, 0]].
    """

    m_space: Subspace
    r_minus_m: Subspace
    r_perp: Subspace
    q1_block: np.ndarray

    def unitary(self):
        """Columns: bases of the three blocks, in order."""
        return np.hstack([self.m_space.basis, self.r_minus_m.basis, self.r_perp.basis])

    def block_dims(self):
        return self.m_space.dim, self.r_minus_m.dim, self.r_perp.dim

    def assemble(self):
        """Rebuild Q from the blocks."""
        m, k, p = self.block_dims()
        n = m + k + p
        B = np.zeros((n, n), dtype=np.complex128)
        B[:m + k, :m + k] = np.eye(m + k)
        B[m:m + k, m + k:] = self.q1_block
        W = self.unitary()
        return W @ B @ W.conj().T

    def q1_adjoint_injective(self, cfg=DEFAULT_TOL):
        """Whether ``q1_block^H`` has trivial kernel (Q1 maps onto R(Q) ⊖ M)."""
        k, p = self.q1_block.shape
        if k == 0:
            return True
        if p == 0:
            return False
        s = np.linalg.svd(self.q1_block, compute_uv=False)
        return bool(s.size >= k and s[k - 1] > cfg.rank_rel_tol * max(1.0, s[0]) * max(k, p))


def canonical_form(Q, cfg=DEFAULT_TOL):
    """Decompose an idempotent into its three-block canonical form."""
    Q = _as_idempotent(Q, cfg)
    A = Q.matrix
    m_space = sp.intersect(Q.range, sp.column_space(A.conj().T, cfg), cfg)
    r_minus_m = sp.intersect(Q.range, sp.complement(m_space), cfg)
    r_perp = sp.complement(Q.range)
    q1 = r_minus_m.basis.conj().T @ A @ r_perp.basis
    return CanonicalForm(m_space, r_minus_m, r_perp, q1)


def psd_sqrt(H):
    """Square root of a Hermitian PSD matrix.

    Eigenvalues at round-off level (below ``n * eps * max|λ|``, including
    all negative ones) are clamped to 0 before the square root, otherwise
    a 1e-16 eigenvalue would contribute a 1e-8 error to the root.
    """
    H = as_matrix(H, square=True)
    H = (H + H.conj().T) / 2
    w, V = np.linalg.eigh(H)
    floor = H.shape[0] * np.finfo(float).eps * max(np.abs(w).max(), 0.0)
    w = np.sqrt(np.where(w > floor, w, 0.0))
    return (V * w) @ V.conj().T


def _inv_sqrt_hpd(H):
    # H >= I here, so no clamping
    w, V = np.linalg.eigh((H + H.conj().T) / 2)
    return (V / np.sqrt(w)) @ V.conj().T


def abs_value(M):
    """``|M| = (M^H M)^{1/2}``."""
    A = as_matrix(M, square=True)
    return psd_sqrt(A.conj().T @ A)


def block_tilde(A):
    """``[[I, A], [A^H, A^H A]]`` for an h x k matrix ``A``."""
    A = as_matrix(A)
    h, k = A.shape
    T = np.zeros((h + k, h + k), dtype=np.complex128)
    T[:h, :h] = np.eye(h)
    T[:h, h:] = A
    T[h:, :h] = A.conj().T
    T[h:, h:] = A.conj().T @ A
    return T


def block_sqrt(A):
    """Closed-form square root of :func:`block_tilde`.

    With ``S = (I + A A^H)^{-1/2}`` and ``K = (I + A^H A)^{-1/2}`` the root is
    ``[[S, S A], [A^H S, K A^H A]]``.
    """
    A = as_matrix(A)
    h, k = A.shape
    Ah = A.conj().T
    S = _inv_sqrt_hpd(np.eye(h) + A @ Ah)
    K = _inv_sqrt_hpd(np.eye(k) + Ah @ A)
    R = np.empty((h + k, h + k), dtype=np.complex128)
    R[:h, :h] = S
    R[:h, h:] = S @ A
    R[h:, :h] = Ah @ S
    R[h:, h:] = K @ (Ah @ A)
    return R


def _check_agree(name, *projectors):
    ref = projectors[0]
    worst = max((float(np.linalg.norm(P - ref)) for P in projectors[1:]), default=0.0)
    if worst > FORMULA_TOL:
        raise FormulaMismatch(f"{name}: formulas disagree by {worst:.3e}", worst)
    return worst


def _q_under_intersection(Q, cfg):
    return sp.intersect(Q.range, sp.column_space(Q.matrix.conj().T, cfg), cfg)


def q_under(Q, cfg=DEFAULT_TOL):
    """Largest orthogonal projection below Q: the projection onto R(Q) ∩ R(Q^H)."""
    Q = _as_idempotent(Q, cfg)
    return orthogonal_projection_onto(_q_under_intersection(Q, cfg))


def q_under_via_abs(Q, cfg=DEFAULT_TOL):
    """Projections onto N(I - |Q|) and N(2I - Q - Q^H), cross-checked.

    Returns the first; raises FormulaMismatch if either differs from
    :func:`q_under` (or from each other) by more than 1e-8 in Frobenius
    norm.
    """
    Q = _as_idempotent(Q, cfg)
    A = Q.matrix
    n = Q.n
    I = np.eye(n)
    via_abs = orthogonal_projection_onto(sp.null_space(I - abs_value(A), cfg))
    via_sum = orthogonal_projection_onto(sp.null_space(2 * I - A - A.conj().T, cfg))
    direct = orthogonal_projection_onto(_q_under_intersection(Q, cfg))
    _check_agree("q_under", direct.matrix, via_abs.matrix, via_sum.matrix)
    _check_agree("q_under", via_abs.matrix, via_sum.matrix)
    return via_abs


def q_over(Q, cfg=DEFAULT_TOL):
    """Smallest orthogonal projection above Q: projection onto N(Q + Q^H)^⊥.

    Also computed as ``I - q_under(I - Q)``; the two must agree to 1e-8.
    """
    Q = _as_idempotent(Q, cfg)
    A = Q.matrix
    ker = sp.null_space(A + A.conj().T, cfg)
    primary = orthogonal_projection_onto(sp.complement(ker))
    dual = np.eye(Q.n) - q_under(Q.complement(), cfg).matrix
    _check_agree("q_over", primary.matrix, dual)
    return primary
