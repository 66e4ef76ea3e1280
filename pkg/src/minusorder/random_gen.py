"""Seeded generators of idempotents, symmetries and structured pairs.

Every generator is a pure function of its configuration and a
``numpy.random.Generator``. Streams come from :func:`make_rng`, which
feeds ``(master_seed, trial_index, crc32(purpose_tag))`` into a
``SeedSequence`` driving PCG64, so outputs are bit-for-bit reproducible
and trials can run in any order.
"""

import zlib
from dataclasses import dataclass

import numpy as np

from . import subspace as sp
from .errors import (BadSignature, ChainTooLong, Degenerate, IllConditioned,
                     NotComplementary, NotIdempotent, RetriesExhausted)
from .idempotent import Idempotent, validate_idempotent
from .krein import DEGENERACY_TOL, j_projection_onto
from .subspace import DEFAULT_TOL
from .symmetry import Symmetry, validate_symmetry

__all__ = ["GenConfig", "make_rng", "random_unitary", "random_subspace",
           "random_invertible", "random_idempotent", "random_symmetry",
           "random_comparable_pair", "random_chain", "random_j_projection",
           "random_j_commuting_idempotent", "random_pair", "PAIR_KINDS"]


@dataclass(frozen=True)
class GenConfig:
    dim: int
    rank: int = None
    master_seed: int = 0
    cond_bound: float = 1e4
    max_retries: int = 100

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dim must be positive, got {self.dim}")
        if self.rank is not None and not 0 <= self.rank <= self.dim:
            raise ValueError(f"rank must lie in [0, {self.dim}], got {self.rank}")
        if not self.cond_bound > 1:
            raise ValueError("cond_bound must exceed 1")
        if self.max_retries < 1:
            raise ValueError("max_retries must be positive")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")


def make_rng(master_seed, trial=0, tag=""):
    """Independent PCG64 stream for ``(master_seed, trial, tag)``."""
    key = zlib.crc32(tag.encode("utf-8"))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([master_seed, trial, key])))


def _rng(cfg, rng, trial, tag):
    return rng if rng is not None else make_rng(cfg.master_seed, trial, tag)


def _gaussian(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unitary(rng, n):
    """Haar-distributed unitary from the QR factorization of a Gaussian matrix."""
    Z = _gaussian(rng, (n, n))
    Qm, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Qm * (d / np.abs(d))


def random_subspace(rng, n, k):
    """Uniformly oriented k-dimensional subspace of C^n."""
    if k == 0:
        return sp.zero_subspace(n)
    Qm, _ = np.linalg.qr(_gaussian(rng, (n, k)))
    return sp.Subspace(n, Qm)


def random_invertible(rng, n, cond_bound=1e4, max_retries=100):
    for _ in range(max_retries):
        T = _gaussian(rng, (n, n))
        if np.linalg.cond(T) <= cond_bound:
            return T
    raise RetriesExhausted(f"no {n}x{n} matrix with condition number <= {cond_bound:g}")


def _pick_rank(cfg, rng):
    return cfg.rank if cfg.rank is not None else int(rng.integers(0, cfg.dim + 1))


def random_idempotent(cfg, trial=0, rng=None, tol=DEFAULT_TOL):
    """Idempotent onto a random subspace along a random complement.

    Draws Gaussian bases for range and kernel and rejects pairs whose
    stacked basis has condition number above ``cfg.cond_bound``.
    """
    rng = _rng(cfg, rng, trial, "idempotent")
    n = cfg.dim
    r = _pick_rank(cfg, rng)
    for _ in range(cfg.max_retries):
        R = random_subspace(rng, n, r)
        N = random_subspace(rng, n, n - r)
        if 0 < r < n and np.linalg.cond(np.hstack([R.basis, N.basis])) > cfg.cond_bound:
            continue
        try:
            return validate_idempotent(sp.idempotent_from_range_kernel(R, N, tol), tol)
        except (NotComplementary, IllConditioned, NotIdempotent):
            continue
    raise RetriesExhausted(f"random_idempotent: {cfg.max_retries} rejections")


def random_symmetry(cfg, signature=None, trial=0, rng=None, tol=DEFAULT_TOL):
    """``J = U (I_p ⊕ -I_m) U^H`` with Haar-random U.

    ``signature`` is ``(p, m)`` with ``p + m = dim``; a random split is
    drawn when it is None.
    """
    rng = _rng(cfg, rng, trial, "symmetry")
    n = cfg.dim
    if signature is None:
        p = int(rng.integers(0, n + 1))
        signature = (p, n - p)
    p, m = signature
    if p < 0 or m < 0 or p + m != n:
        raise BadSignature(f"signature {signature} does not add up to dim {n}")
    U = random_unitary(rng, n)
    J = (U * np.concatenate([np.ones(p), -np.ones(m)])) @ U.conj().T
    J = (J + J.conj().T) / 2
    return validate_symmetry(J, tol)


def random_comparable_pair(cfg, sub_rank=None, trial=0, rng=None,
                           orthogonal_gap=False, tol=DEFAULT_TOL):
    """A pair ``P ⪯ Q`` that is comparable by construction.

    ``Q = T diag(I_r, 0) T^{-1}`` and ``P = T diag(P0, 0) T^{-1}`` with P0 a
    random r x r idempotent of rank ``sub_rank``. With ``orthogonal_gap``
    the pair is instead built so that ``Q - P`` is an orthogonal
    projection: P is a random idempotent supported on W^⊥ and
    ``Q = P + P_W``.
    """
    rng = _rng(cfg, rng, trial, "comparable")
    n = cfg.dim
    r = _pick_rank(cfg, rng)
    s = sub_rank if sub_rank is not None else int(rng.integers(0, r + 1))
    if not 0 <= s <= r:
        raise ValueError(f"sub_rank {s} outside [0, {r}]")
    for _ in range(cfg.max_retries):
        try:
            if orthogonal_gap:
                P, Q = _orthogonal_gap_pair(rng, n, r, s, cfg, tol)
            else:
                P, Q = _similarity_pair(rng, n, r, s, cfg, tol)
            return validate_idempotent(P, tol), validate_idempotent(Q, tol)
        except (RetriesExhausted, NotIdempotent, IllConditioned, NotComplementary):
            continue
    raise RetriesExhausted(f"random_comparable_pair: {cfg.max_retries} rejections")


def _similarity_pair(rng, n, r, s, cfg, tol):
    T = random_invertible(rng, n, cfg.cond_bound, cfg.max_retries)
    Tinv = np.linalg.inv(T)
    D_q = np.diag(np.r_[np.ones(r), np.zeros(n - r)]).astype(np.complex128)
    D_p = np.zeros((n, n), dtype=np.complex128)
    if r:
        sub = GenConfig(r, s, cond_bound=cfg.cond_bound, max_retries=cfg.max_retries)
        D_p[:r, :r] = random_idempotent(sub, rng=rng, tol=tol).matrix
    return T @ D_p @ Tinv, T @ D_q @ Tinv


def _orthogonal_gap_pair(rng, n, r, s, cfg, tol):
    W = random_subspace(rng, n, r - s)
    C = sp.complement(W)
    P = np.zeros((n, n), dtype=np.complex128)
    if C.dim:
        sub = GenConfig(C.dim, s, cond_bound=cfg.cond_bound, max_retries=cfg.max_retries)
        P0 = random_idempotent(sub, rng=rng, tol=tol).matrix
        P = C.basis @ P0 @ C.basis.conj().T
    return P, P + sp.ortho_projection(W)


def random_chain(cfg, length, trial=0, rng=None, tol=DEFAULT_TOL):
    """Strictly increasing chain ``Q_1 ≺ ... ≺ Q_k`` under ⪯.

    ``Q_i = T diag(I_{r_i}, 0) T^{-1}`` for strictly increasing ranks; a
    strictly increasing chain can have at most dim + 1 members.
    """
    n = cfg.dim
    if length < 1:
        raise ValueError("chain length must be positive")
    if length > n + 1:
        raise ChainTooLong(f"a strict chain in C^{n} has at most {n + 1} members, asked for {length}")
    rng = _rng(cfg, rng, trial, "chain")
    ranks = np.sort(rng.choice(n + 1, size=length, replace=False))
    T = random_invertible(rng, n, cfg.cond_bound, cfg.max_retries)
    Tinv = np.linalg.inv(T)
    chain = []
    for r in ranks:
        D = np.diag(np.r_[np.ones(r), np.zeros(n - r)])
        chain.append(validate_idempotent(T @ D @ Tinv, tol))
    return chain


def random_j_projection(cfg, J=None, trial=0, rng=None, tol=DEFAULT_TOL):
    """Random J-projection: onto a random M along ``(JM)^⊥``.

    Subspaces with smallest stacked singular value below 1e-4 are rejected
    as J-degenerate. Returns ``(Q, J)``.
    """
    rng = _rng(cfg, rng, trial, "j-projection")
    if J is None:
        J = random_symmetry(cfg, rng=rng, tol=tol)
    J = validate_symmetry(J, tol)
    n = cfg.dim
    r = _pick_rank(cfg, rng)
    for _ in range(cfg.max_retries):
        M = random_subspace(rng, n, r)
        try:
            return j_projection_onto(M, J, tol, degeneracy_tol=DEGENERACY_TOL), J
        except (Degenerate, IllConditioned, NotIdempotent):
            continue
    raise RetriesExhausted(f"random_j_projection: {cfg.max_retries} rejections")


def random_j_commuting_idempotent(cfg, J, rng, tol=DEFAULT_TOL):
    """Idempotent commuting with J: random idempotents on each eigenspace."""
    J = validate_symmetry(J, tol)
    n = cfg.dim
    X = np.zeros((n, n), dtype=np.complex128)
    for space in (J.plus_space, J.minus_space):
        if space.is_zero:
            continue
        sub = GenConfig(space.dim, cond_bound=cfg.cond_bound, max_retries=cfg.max_retries)
        block = random_idempotent(sub, rng=rng, tol=tol).matrix
        X += space.basis @ block @ space.basis.conj().T
    return validate_idempotent(X, tol)


#: Pair kinds produced by :func:`random_pair`.
PAIR_KINDS = ("generic", "comparable", "range-only", "shared-kernel", "complementary")


def random_pair(cfg, kind, rng, tol=DEFAULT_TOL):
    """Pair of idempotents of a given structural kind.

    generic
        independent random idempotents (sup is generically I or nontrivial);
    comparable
        ``P ⪯ Q`` by construction;
    range-only
        ``R(P) ⊆ R(Q)`` while ``N(Q) ⊄ N(P)``;
    shared-kernel
        a vector of ``R(P) + R(Q)`` is put in both kernels, which tends to
        make the supremum fail to exist;
    complementary
        ``(P, I - P)``.
    """
    if kind not in PAIR_KINDS:
        raise ValueError(f"unknown pair kind {kind!r}")
    if kind == "generic":
        return random_idempotent(cfg, rng=rng, tol=tol), random_idempotent(cfg, rng=rng, tol=tol)
    if kind == "comparable":
        P, Q = random_comparable_pair(cfg, rng=rng, tol=tol)
        return (P, Q) if rng.random() < 0.5 else (Q, P)
    if kind == "complementary":
        P = random_idempotent(cfg, rng=rng, tol=tol)
        return P, P.complement()
    builder = _range_only_pair if kind == "range-only" else _shared_kernel_pair
    for _ in range(cfg.max_retries):
        try:
            return builder(rng, cfg.dim, cfg, tol)
        except (NotComplementary, IllConditioned, NotIdempotent):
            continue
    raise RetriesExhausted(f"random_pair({kind}): {cfg.max_retries} rejections")


def _build(R, N, cfg, tol):
    T = np.hstack([R.basis, N.basis])
    if 0 < R.dim < R.ambient_dim and np.linalg.cond(T) > cfg.cond_bound:
        raise IllConditioned("rejected", None)
    return validate_idempotent(sp.idempotent_from_range_kernel(R, N, tol), tol)


def _range_only_pair(rng, n, cfg, tol):
    if n < 2:
        raise ValueError("range-only pairs need dim >= 2")
    rq = int(rng.integers(1, n))
    rp = int(rng.integers(0, rq + 1))
    RQ = random_subspace(rng, n, rq)
    RP = sp.Subspace(n, RQ.basis @ random_subspace(rng, rq, rp).basis) if rp else sp.zero_subspace(n)
    Q = _build(RQ, random_subspace(rng, n, n - rq), cfg, tol)
    P = _build(RP, random_subspace(rng, n, n - rp), cfg, tol)
    return P, Q


def _shared_kernel_pair(rng, n, cfg, tol):
    if n < 3:
        raise ValueError("shared-kernel pairs need dim >= 3")
    rp = int(rng.integers(1, n - 1))
    rq = int(rng.integers(1, n - 1))
    RP = random_subspace(rng, n, rp)
    RQ = random_subspace(rng, n, rq)
    S = sp.sum(RP, RQ, tol)
    w = S.basis @ _gaussian(rng, S.dim)
    w = w / np.linalg.norm(w)

    def kernel_through(k):
        extra = _gaussian(rng, (n, k - 1)) if k > 1 else np.zeros((n, 0))
        return sp.column_space(np.column_stack([w, extra]), tol)

    P = _build(RP, kernel_through(n - rp), cfg, tol)
    Q = _build(RQ, kernel_through(n - rq), cfg, tol)
    return P, Q
