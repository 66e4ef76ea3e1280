"""The minus partial order on idempotents and its lattice operations.

``P ⪯ Q`` means ``PQ = QP = P``. Suprema and infima do not always exist;
when they do they are built explicitly from range/kernel data:

* ``P ∨ Q = I`` exactly when ``N(P) ∩ N(Q) ⊆ R(P) + R(Q)``;
* otherwise ``P ∨ Q`` exists iff ``N(P) ∩ N(Q) ≠ {0}`` is a direct
  complement of ``R(P) + R(Q)``, and it is the idempotent onto the sum
  along the intersection.

Infima are the mirror statements with ranges and kernels swapped. In
finite dimension a failed existence test is a definitive "does not exist".
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from . import subspace as sp
from .errors import (DimensionMismatch, FormulaMismatch, NotCommuting,
                     NotComparable)
from .idempotent import (Idempotent, identity, orthogonal_projection_onto,
                         q_over, validate_idempotent, zero)
from .subspace import DEFAULT_TOL, Subspace
from .symmetry import validate_symmetry

__all__ = ["Verdict", "LatticeResult", "OrderReport", "DiffReport",
           "leq_minus", "strictly_below", "order_report", "sup_minus",
           "inf_minus", "inf_minus_direct", "sup_orth",
           "sup_orthogonality_test", "diff_report", "sup_with_symmetry",
           "sup_iterated", "PSD_TOL"]

#: Minimum-eigenvalue floor for positive semidefiniteness checks.
PSD_TOL = 1e-8


class Verdict(enum.Enum):
    IS_IDENTITY = "IsIdentity"
    IS_ZERO = "IsZero"
    EXISTS_NONTRIVIAL = "ExistsNontrivial"
    NOT_EXISTS = "NotExists"

    def dual(self):
        """Verdict of the mirrored problem under ``X -> I - X``."""
        return _DUAL[self]


_DUAL = {
    Verdict.IS_IDENTITY: Verdict.IS_ZERO,
    Verdict.IS_ZERO: Verdict.IS_IDENTITY,
    Verdict.EXISTS_NONTRIVIAL: Verdict.EXISTS_NONTRIVIAL,
    Verdict.NOT_EXISTS: Verdict.NOT_EXISTS,
}


@dataclass(frozen=True, eq=False)
class LatticeResult:
    verdict: Verdict
    operator: Idempotent = None
    witness_range: Subspace = None
    witness_kernel: Subspace = None

    @property
    def exists(self):
        return self.verdict is not Verdict.NOT_EXISTS


@dataclass(frozen=True)
class OrderReport:
    leq: bool
    range_incl: bool
    kernel_incl: bool
    adjoint_leq: bool
    complement_leq: bool
    residuals: dict = field(default_factory=dict)

    @property
    def inclusions(self):
        """``R(P) ⊆ R(Q)`` and ``N(Q) ⊆ N(P)`` together.

        Either inclusion alone can hold without ``P ⪯ Q``; only the
        conjunction is equivalent to it.
        """
        return self.range_incl and self.kernel_incl

    @property
    def consistent(self):
        flags = (self.leq, self.inclusions, self.adjoint_leq, self.complement_leq)
        return all(flags) or not any(flags)


@dataclass(frozen=True)
class DiffReport:
    psd: bool
    selfadjoint: bool
    ortho_proj: bool
    sum_order: bool
    residuals: dict = field(default_factory=dict)

    @property
    def consistent(self):
        flags = (self.psd, self.selfadjoint, self.ortho_proj, self.sum_order)
        return all(flags) or not any(flags)


def _idem(X, cfg):
    return X if isinstance(X, Idempotent) else validate_idempotent(X, cfg)


def _pair(P, Q, cfg):
    P, Q = _idem(P, cfg), _idem(Q, cfg)
    if P.n != Q.n:
        raise DimensionMismatch(f"operands have sizes {P.n} and {Q.n}")
    return P, Q


def _scale(A, B):
    return 1.0 + float(np.linalg.norm(A)) * float(np.linalg.norm(B))


def _leq_residuals(A, B):
    """Residuals ``‖AB - A‖`` and ``‖BA - A‖`` (relative scale separately)."""
    return _kernels.product_residual(A, B, A), _kernels.product_residual(B, A, A)


def _leq_matrices(A, B, tol):
    left, right = _leq_residuals(A, B)
    limit = tol * _scale(A, B)
    return left <= limit and right <= limit, max(left, right) / _scale(A, B)


def leq_minus(P, Q, cfg=DEFAULT_TOL):
    """``P ⪯ Q``, i.e. ``PQ = QP = P`` up to ``idem_tol * (1 + ‖P‖‖Q‖)``."""
    P, Q = _pair(P, Q, cfg)
    return _leq_matrices(P.matrix, Q.matrix, cfg.idem_tol)[0]


def strictly_below(P, Q, cfg=DEFAULT_TOL):
    """``P ≺ Q``: ``P ⪯ Q`` and ``P ≠ Q``."""
    P, Q = _pair(P, Q, cfg)
    differs = float(np.linalg.norm(P.matrix - Q.matrix)) > cfg.idem_tol * _scale(P.matrix, Q.matrix)
    return differs and leq_minus(P, Q, cfg)


def order_report(P, Q, cfg=DEFAULT_TOL):
    """Evaluate the four equivalent forms of ``P ⪯ Q`` independently."""
    P, Q = _pair(P, Q, cfg)
    A, B = P.matrix, Q.matrix
    I = np.eye(P.n)
    leq, r_leq = _leq_matrices(A, B, cfg.idem_tol)
    adj, r_adj = _leq_matrices(A.conj().T, B.conj().T, cfg.idem_tol)
    comp, r_comp = _leq_matrices(I - B, I - A, cfg.idem_tol)
    r_range = sp._containment_residual(Q.range, P.range)
    r_kernel = sp._containment_residual(P.kernel, Q.kernel)
    return OrderReport(
        leq=leq,
        range_incl=r_range <= cfg.subspace_eq_tol,
        kernel_incl=r_kernel <= cfg.subspace_eq_tol,
        adjoint_leq=adj,
        complement_leq=comp,
        residuals={"leq": r_leq, "range_incl": r_range,
                   "kernel_incl": r_kernel, "adjoint_leq": r_adj,
                   "complement_leq": r_comp},
    )


def sup_minus(P, Q, cfg=DEFAULT_TOL):
    """Supremum of two idempotents under ⪯.

    IS_IDENTITY is decided first, so a trivial ``N(P) ∩ N(Q)`` always
    yields the identity.
    """
    P, Q = _pair(P, Q, cfg)
    S = sp.sum(P.range, Q.range, cfg)
    K = sp.intersect(P.kernel, Q.kernel, cfg)
    if sp.contains(S, K, cfg):
        op = identity(P.n)
        return LatticeResult(Verdict.IS_IDENTITY, op, op.range, op.kernel)
    if not K.is_zero and sp.is_direct_sum(S, K, cfg):
        op = validate_idempotent(sp.idempotent_from_range_kernel(S, K, cfg), cfg)
        return LatticeResult(Verdict.EXISTS_NONTRIVIAL, op, S, K)
    return LatticeResult(Verdict.NOT_EXISTS)


def inf_minus_direct(P, Q, cfg=DEFAULT_TOL):
    """Infimum from range/kernel data alone (no duality)."""
    P, Q = _pair(P, Q, cfg)
    n = P.n
    R = sp.intersect(P.range, Q.range, cfg)
    N = sp.sum(P.kernel, Q.kernel, cfg)
    if sp.contains(N, R, cfg):
        op = zero(n)
        return LatticeResult(Verdict.IS_ZERO, op, op.range, op.kernel)
    if not R.is_zero and sp.is_direct_sum(R, N, cfg):
        op = validate_idempotent(sp.idempotent_from_range_kernel(R, N, cfg), cfg)
        return LatticeResult(Verdict.EXISTS_NONTRIVIAL, op, R, N)
    return LatticeResult(Verdict.NOT_EXISTS)


def _complement_result(res):
    if not res.exists:
        return LatticeResult(Verdict.NOT_EXISTS)
    op = res.operator.complement()
    return LatticeResult(res.verdict.dual(), op, res.witness_kernel, res.witness_range)


def _operators_agree(A, B):
    return float(np.linalg.norm(A - B)) / (1.0 + float(np.linalg.norm(A)))


def inf_minus(P, Q, cfg=DEFAULT_TOL):
    """Infimum under ⪯, computed directly and as ``I - sup(I-P, I-Q)``.

    The two routes must agree on the verdict and, when an operator exists,
    to ``1e-8 * (1 + ‖op‖_F)``; otherwise FormulaMismatch is raised.
    """
    P, Q = _pair(P, Q, cfg)
    direct = inf_minus_direct(P, Q, cfg)
    dual = _complement_result(sup_minus(P.complement(), Q.complement(), cfg))
    if direct.verdict is not dual.verdict:
        raise FormulaMismatch(f"inf verdicts disagree: direct {direct.verdict.value}, "
                              f"dual {dual.verdict.value}")
    if direct.exists:
        gap = _operators_agree(direct.operator.matrix, dual.operator.matrix)
        if gap > cfg.idem_tol:
            raise FormulaMismatch(f"inf operators disagree by {gap:.3e}", gap)
    return direct


def sup_orth(P, Q, cfg=DEFAULT_TOL):
    """``P^or ∨ Q^or``: orthogonal projection onto ``R(P^or) + R(Q^or)``."""
    P, Q = _pair(P, Q, cfg)
    S = sp.sum(q_over(P, cfg).range, q_over(Q, cfg).range, cfg)
    return orthogonal_projection_onto(S)


def sup_orthogonality_test(P, Q, cfg=DEFAULT_TOL):
    """Three equivalent tests for "P ∨ Q exists and is an orthogonal projection ≠ I".

    Returns a dict with keys ``condA`` (via sup_minus), ``condB`` (range
    equality of PP^H + QQ^H and P^H P + Q^H Q, not the whole space) and
    ``condC`` (null-space inclusions).
    """
    P, Q = _pair(P, Q, cfg)
    n = P.n
    A, B = P.matrix, Q.matrix
    Ah, Bh = A.conj().T, B.conj().T

    sup = sup_minus(P, Q, cfg)
    cond_a = sup.verdict is Verdict.EXISTS_NONTRIVIAL and sup.operator.is_orthogonal

    left = sp.column_space(A @ Ah + B @ Bh, cfg)
    right = sp.column_space(Ah @ A + Bh @ B, cfg)
    cond_b = sp.equal(left, right, cfg) and left.dim < n

    ker = sp.intersect(P.kernel, Q.kernel, cfg)
    ker_adj = sp.intersect(sp.null_space(Ah, cfg), sp.null_space(Bh, cfg), cfg)
    sym_ker = sp.intersect(sp.null_space(A + Ah, cfg), sp.null_space(B + Bh, cfg), cfg)
    cond_c = (not ker.is_zero and sp.contains(sym_ker, ker, cfg)
              and sp.contains(sym_ker, ker_adj, cfg))
    return {"condA": bool(cond_a), "condB": bool(cond_b), "condC": bool(cond_c)}


def _min_eig(H):
    return float(np.linalg.eigvalsh((H + H.conj().T) / 2)[0])


def diff_report(P, Q, cfg=DEFAULT_TOL):
    """Properties of ``Q - P`` for a comparable pair ``P ⪯ Q``.

    Raises NotComparable if ``P ⪯ Q`` fails.
    """
    P, Q = _pair(P, Q, cfg)
    if not leq_minus(P, Q, cfg):
        raise NotComparable("diff_report requires P ⪯ Q")
    A, B = P.matrix, Q.matrix
    D = B - A
    scale = _scale(A, B)
    herm = _kernels.hermitian_residual(D)
    idem = _kernels.product_residual(D, D, D)
    lam_d = _min_eig(D)
    lam_sum = _min_eig(B + B.conj().T - A - A.conj().T)
    selfadjoint = herm <= cfg.idem_tol * scale
    # ⟨Dx, x⟩ ≥ 0 for every complex x forces D to be Hermitian
    psd = selfadjoint and lam_d >= -PSD_TOL
    ortho = selfadjoint and idem <= cfg.idem_tol * scale
    return DiffReport(
        psd=bool(psd), selfadjoint=bool(selfadjoint), ortho_proj=bool(ortho),
        sum_order=bool(lam_sum >= -PSD_TOL),
        residuals={"hermitian": herm, "idempotent": idem,
                   "min_eig_diff": lam_d, "min_eig_sum": lam_sum},
    )


def _restrict(X, basis):
    return basis.conj().T @ X @ basis


def sup_with_symmetry(P, Q, J, cfg=DEFAULT_TOL):
    """Supremum of two idempotents commuting with a symmetry ``J``.

    Besides the plain supremum, the problem is split over the eigenspaces
    N(I - J) and N(I + J), solved blockwise and reassembled; the two
    answers must agree and the supremum must commute with J.
    """
    P, Q = _pair(P, Q, cfg)
    J = validate_symmetry(J, cfg)
    if J.n != P.n:
        raise DimensionMismatch(f"symmetry has size {J.n}, operands {P.n}")
    Jm = J.matrix
    for name, X in (("P", P.matrix), ("Q", Q.matrix)):
        if _kernels.commutator_residual(X, Jm) > cfg.idem_tol * _scale(X, Jm):
            raise NotCommuting(f"{name} does not commute with J")

    full = sup_minus(P, Q, cfg)

    blocks = []
    for space in (J.plus_space, J.minus_space):
        if space.is_zero:
            continue
        W = space.basis
        res = sup_minus(_restrict(P.matrix, W), _restrict(Q.matrix, W), cfg)
        blocks.append((W, res))

    if all(res.exists for _, res in blocks):
        assembled = sum(W @ res.operator.matrix @ W.conj().T for W, res in blocks)
        if all(res.verdict is Verdict.IS_IDENTITY for _, res in blocks):
            block_verdict = Verdict.IS_IDENTITY
        else:
            block_verdict = Verdict.EXISTS_NONTRIVIAL
    else:
        assembled, block_verdict = None, Verdict.NOT_EXISTS

    if block_verdict is not full.verdict:
        raise FormulaMismatch(f"blockwise verdict {block_verdict.value} differs from "
                              f"{full.verdict.value}")
    if full.exists:
        S = full.operator.matrix
        gap = _operators_agree(S, assembled)
        if gap > cfg.idem_tol:
            raise FormulaMismatch(f"blockwise supremum differs by {gap:.3e}", gap)
        comm = _kernels.commutator_residual(S, Jm)
        if comm > cfg.idem_tol * _scale(S, Jm):
            raise FormulaMismatch(f"supremum fails to commute with J (residual {comm:.3e})", comm)
    return full


def sup_iterated(operators, cfg=DEFAULT_TOL):
    """Left fold of :func:`sup_minus` over several idempotents.

    Only the binary supremum has an existence criterion; this fold is a
    convenience and stops at the first missing supremum.
    """
    operators = list(operators)
    if not operators:
        raise ValueError("need at least one operator")
    acc = _idem(operators[0], cfg)
    result = sup_minus(acc, acc, cfg)
    for X in operators[1:]:
        result = sup_minus(acc, X, cfg)
        if not result.exists:
            return result
        acc = result.operator
    return result
