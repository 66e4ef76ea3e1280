"""J-projections and the constructions around their extremal projections.

A J-projection is an idempotent Q with ``Q = J Q^H J``; we test the
equivalent ``J Q = Q^H J``. Two constructors live here:

* :func:`construct_q_over_preimage` builds a non-selfadjoint J-projection
  whose smallest orthogonal projection above it is a prescribed P;
* :func:`thm37_counterexample` builds, for a non-orthogonal P with
  ``dim R(P)^⊥ ≥ 2``, an idempotent Q ≻ P with ``P^or ⪯̸ Q_or``.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from . import subspace as sp
from .errors import Degenerate, DimensionMismatch, Infeasible
from .idempotent import Idempotent, canonical_form, validate_idempotent
from .subspace import DEFAULT_TOL
from .symmetry import Symmetry, validate_symmetry

__all__ = ["JProjectionCertificate", "is_j_projection", "j_projection_onto",
           "construct_q_over_preimage", "construct_q_under_preimage",
           "thm37_counterexample", "thm37_case", "COUPLING_BLOCK", "DEGENERACY_TOL"]

#: 2x2 block placed on span{x1, x2}; the off-diagonal is sqrt(-3)/2 = i√3/2.
COUPLING_BLOCK = np.array([[1.5, 0.5j * np.sqrt(3.0)],
                           [0.5j * np.sqrt(3.0), -0.5]], dtype=np.complex128)

#: Smallest singular value of [M | (JM)^⊥] below which M counts as J-degenerate.
DEGENERACY_TOL = 1e-4


@dataclass(frozen=True, eq=False)
class JProjectionCertificate:
    q: Idempotent
    j: Symmetry
    residual: float
    is_j_projection: bool


def _idem(X, cfg):
    return X if isinstance(X, Idempotent) else validate_idempotent(X, cfg)


def is_j_projection(Q, J, cfg=DEFAULT_TOL):
    """Certificate for ``J Q = Q^H J`` within ``idem_tol * (1 + ‖Q‖_F)``."""
    Q = _idem(Q, cfg)
    J = validate_symmetry(J, cfg)
    if Q.n != J.n:
        raise DimensionMismatch(f"Q has size {Q.n}, J has size {J.n}")
    res = _kernels.adjoint_product_residual(J.matrix, Q.matrix)
    ok = res <= cfg.idem_tol * (1.0 + float(np.linalg.norm(Q.matrix)))
    return JProjectionCertificate(Q, J, res, bool(ok))


def j_projection_onto(M, J, cfg=DEFAULT_TOL, degeneracy_tol=None):
    """Idempotent onto ``M`` along ``(J M)^⊥``, which is a J-projection.

    Raises Degenerate when ``M ∔ (JM)^⊥`` fails to be the whole space. With
    ``degeneracy_tol`` given, nearly degenerate subspaces (smallest singular
    value of the stacked bases below it) are refused as well.
    """
    J = validate_symmetry(J, cfg)
    if M.ambient_dim != J.n:
        raise DimensionMismatch(f"subspace lives in C^{M.ambient_dim}, J in C^{J.n}")
    K = sp.complement(sp.column_space(J.matrix @ M.basis, cfg)) if not M.is_zero \
        else sp.full_space(J.n)
    if not sp.is_direct_sum(M, K, cfg):
        raise Degenerate("subspace is degenerate for the J-inner product")
    if degeneracy_tol is not None:
        smin = np.linalg.svd(np.hstack([M.basis, K.basis]), compute_uv=False)[-1]
        if smin < degeneracy_tol:
            raise Degenerate(f"subspace is nearly J-degenerate (σ_min = {smin:.2e})")
    return validate_idempotent(sp.idempotent_from_range_kernel(M, K, cfg), cfg)


def _check_commutes(P, J, cfg):
    res = _kernels.commutator_residual(P.matrix, J.matrix)
    return res <= cfg.idem_tol * (1.0 + float(np.linalg.norm(P.matrix)) * float(np.linalg.norm(J.matrix)))


def _q_over_preimage_preconditions(P, J, cfg, name="P"):
    """Name of the first failed precondition, or None."""
    if P.n != J.n:
        raise DimensionMismatch(f"P has size {P.n}, J has size {J.n}")
    if not P.is_orthogonal:
        return f"{name} is not an orthogonal projection"
    if not _check_commutes(P, J, cfg):
        return f"{name} does not commute with J"
    if P.rank < 2:
        return f"dim R({name}) = {P.rank} < 2"
    scale = cfg.idem_tol * (1.0 + float(np.linalg.norm(P.matrix)))
    if np.linalg.norm(P.matrix + J.matrix @ P.matrix) <= scale:
        return f"(I+J){name} = 0"
    if np.linalg.norm(P.matrix - J.matrix @ P.matrix) <= scale:
        return f"(I-J){name} = 0"
    return None


def construct_q_over_preimage(P, J, cfg=DEFAULT_TOL):
    """Non-selfadjoint J-projection Q with ``q_over(Q) = P``.

    Requires P orthogonal, ``PJ = JP``, ``dim R(P) ≥ 2`` and
    ``(I ± J)P ≠ 0``; otherwise Infeasible names the failed condition.
    Unit vectors x1 ∈ R(P) ∩ N(I - J) and x2 ∈ R(P) ∩ N(I + J) are chosen
    deterministically; Q carries the fixed 2x2 coupling block on
    span{x1, x2}, acts as the identity on the rest of R(P) and vanishes on
    R(P)^⊥.
    """
    return _q_over_preimage(_idem(P, cfg), validate_symmetry(J, cfg), cfg, "P")


def _q_over_preimage(P, J, cfg, name):
    reason = _q_over_preimage_preconditions(P, J, cfg, name)
    if reason is not None:
        raise Infeasible(f"no non-orthogonal J-projection preimage: {reason}", reason)
    x1 = sp.canonical_unit_vector(sp.intersect(P.range, J.plus_space, cfg))
    x2 = sp.canonical_unit_vector(sp.intersect(P.range, J.minus_space, cfg))
    X = np.column_stack([x1, x2])
    PR = sp.ortho_projection(P.range)
    Q = PR - X @ X.conj().T + X @ COUPLING_BLOCK @ X.conj().T
    return validate_idempotent(Q, cfg)


def construct_q_under_preimage(P, J, cfg=DEFAULT_TOL):
    """Non-selfadjoint J-projection Q' with ``q_under(Q') = P``.

    Built as ``I - construct_q_over_preimage(I - P, J)``, so the
    preconditions apply to ``I - P``.
    """
    P = _idem(P, cfg)
    J = validate_symmetry(J, cfg)
    return _q_over_preimage(P.complement(), J, cfg, "(I-P)").complement()


def thm37_counterexample(P, cfg=DEFAULT_TOL):
    """An idempotent Q with ``P ≺ Q`` and ``q_over(P) ⪯̸ q_under(Q)``.

    Exists exactly when P is not orthogonal and ``dim R(P)^⊥ ≥ 2``;
    otherwise Infeasible. With P in canonical form and coupling block
    P1 : R(P)^⊥ → R(P) ⊖ M:

    * if P1 is injective, ``Q = P - P Q2 + Q2`` with Q2 the rank-one
      orthogonal projection onto a unit vector of R(P)^⊥;
    * otherwise ``Q = P_R(P) + P_{N(P1)^⊥} + (u - P u) v^H`` with unit
      u ∈ N(P1)^⊥ and v ∈ N(P1), both inside R(P)^⊥.

    :func:`thm37_case` reports which branch applies.
    """
    Q, _ = _thm37(P, cfg)
    return Q


def thm37_case(P, cfg=DEFAULT_TOL):
    """Which construction :func:`thm37_counterexample` uses for P (1 or 2)."""
    return _thm37(P, cfg)[1]


def _thm37(P, cfg):
    P = _idem(P, cfg)
    if P.is_orthogonal:
        raise Infeasible("P is an orthogonal projection; no counterexample exists",
                         "P orthogonal")
    codim = P.n - P.rank
    if codim < 2:
        raise Infeasible(f"dim R(P)^⊥ = {codim} < 2; no counterexample exists",
                         "dim R(P)^⊥ ≤ 1")
    cf = canonical_form(P, cfg)
    A = P.matrix
    perp = cf.r_perp
    p1 = cf.q1_block
    ker_p1 = sp.null_space(p1, cfg) if p1.shape[0] > 0 else sp.full_space(perp.dim)
    if ker_p1.is_zero:
        u = sp.canonical_unit_vector(perp)
        Q2 = np.outer(u, u.conj())
        Q = A - A @ Q2 + Q2
        case = 1
    else:
        # N(P1) and its complement inside R(P)^⊥, lifted to C^n
        ker_lift = sp.Subspace(P.n, perp.basis @ ker_p1.basis)
        co_lift = sp.Subspace(P.n, perp.basis @ sp.complement(ker_p1).basis)
        v = sp.canonical_unit_vector(ker_lift)
        u = sp.canonical_unit_vector(co_lift)
        Q = (sp.ortho_projection(P.range) + sp.ortho_projection(co_lift)
             + np.outer(u - A @ u, v.conj()))
        case = 2
    return validate_idempotent(Q, cfg), case
