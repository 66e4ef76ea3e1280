"""Randomized property suites.

Each suite is a function ``suite(rng, n, tol, trial)`` that draws its
inputs from ``rng``, records them on the :class:`Trial`, and registers
checks. :func:`run_suite` gives every trial its own stream
``make_rng(seed, trial, suite_name)``, so a single trial can be replayed
without running the ones before it.
"""

import hashlib
import time
from dataclasses import dataclass, field

import numpy as np

from . import subspace as sp
from .errors import IllConditioned, MinusOrderError
from .idempotent import (block_sqrt, block_tilde, orthogonal_projection_onto, psd_sqrt,
                         q_over, q_under, q_under_via_abs, validate_idempotent)
from .krein import (construct_q_over_preimage, construct_q_under_preimage,
                    is_j_projection, thm37_case, thm37_counterexample)
from .lattice import (Verdict, diff_report, inf_minus_direct, leq_minus, order_report,
                      strictly_below, sup_minus, sup_orth, sup_orthogonality_test,
                      sup_with_symmetry, _complement_result)
from .matrixio import digest, matrix_to_obj
from .random_gen import (GenConfig, make_rng, random_chain, random_comparable_pair,
                         random_idempotent, random_j_commuting_idempotent,
                         random_j_projection, random_pair, random_subspace,
                         random_symmetry)
from .subspace import DEFAULT_TOL

__all__ = ["SUITES", "Trial", "TrialResult", "SuiteReport", "run_suite", "run_trial",
           "CHECK_TOL", "DEFAULT_DIM_RANGE"]

#: Absolute or relative tolerance used by suite checks.
CHECK_TOL = 1e-8
DEFAULT_DIM_RANGE = (2, 8)
UPPER_BOUNDS_PER_TRIAL = 100


class Trial:
    """Inputs, constructed outputs and failed checks of one trial."""

    def __init__(self):
        self.inputs = {}
        self.outputs = []
        self.failures = []
        self.checks = 0

    def record(self, name, M):
        self.inputs[name] = np.array(M, dtype=np.complex128)

    def output(self, M):
        self.outputs.append(np.asarray(M, dtype=np.complex128))

    def check(self, cond, message):
        self.checks += 1
        if not cond:
            self.failures.append(message)
        return bool(cond)

    def close(self, A, B, message, tol=CHECK_TOL):
        gap = float(np.linalg.norm(np.asarray(A) - np.asarray(B)))
        return self.check(gap <= tol, f"{message} (gap {gap:.3e})")


@dataclass
class TrialResult:
    trial: int
    dim: int
    passed: bool
    failures: list
    inputs: dict
    digest: str

    def to_dict(self):
        return {"trial": self.trial, "dim": self.dim, "passed": self.passed,
                "failures": self.failures,
                "inputs": {k: matrix_to_obj(v) for k, v in self.inputs.items()},
                "digest": self.digest}


@dataclass
class SuiteReport:
    suite: str
    seed: int
    dim_range: tuple
    trials: int
    results: list = field(default_factory=list)
    elapsed_ms: float = 0.0

    @property
    def passed(self):
        return sum(r.passed for r in self.results)

    @property
    def failed(self):
        return len(self.results) - self.passed

    @property
    def failures(self):
        return sorted((r for r in self.results if not r.passed), key=lambda r: r.trial)

    @property
    def ok(self):
        return self.failed == 0

    def repro_command(self, trial):
        lo, hi = self.dim_range
        return (f"minusorder fuzz --suite {self.suite} --seed {self.seed} "
                f"--dim-range {lo}-{hi} --only-trial {trial}")

    def to_dict(self):
        fails = self.failures
        first = None
        if fails:
            first = fails[0].to_dict()
            first["repro"] = self.repro_command(fails[0].trial)
        return {
            "suite": self.suite, "seed": self.seed, "dim_range": list(self.dim_range),
            "trials": self.trials, "passed": self.passed, "failed": self.failed,
            "failing_trials": [r.trial for r in fails],
            "first_failure": first,
            "digest": digest_of_results(self.results),
        }


def digest_of_results(results):
    h = hashlib.sha256()
    for r in sorted(results, key=lambda r: r.trial):
        h.update(f"{r.trial}:{int(r.passed)}:{r.digest};".encode())
    return h.hexdigest()


# --------------------------------------------------------------------- helpers

def _gen(n):
    return GenConfig(n)


def _pair_kinds(n):
    kinds = ["generic", "comparable", "complementary", "range-only"]
    if n >= 3:
        kinds.append("shared-kernel")
    return kinds


def _mixed_pair(rng, n, tol):
    kinds = _pair_kinds(n)
    kind = kinds[int(rng.integers(len(kinds)))]
    return random_pair(_gen(n), kind, rng, tol)


def _orthogonal_sup_pair(rng, n, tol):
    """Pair supported on a proper subspace W whose ranges span W.

    Their supremum is then the orthogonal projection onto W.
    """
    w = int(rng.integers(1, n))
    W = random_subspace(rng, n, w)
    B = W.basis
    rp = int(rng.integers(1, w + 1))
    rq = int(rng.integers(max(w - rp, 0), w + 1))
    P0 = random_idempotent(GenConfig(w, rp), rng=rng, tol=tol).matrix
    Q0 = random_idempotent(GenConfig(w, rq), rng=rng, tol=tol).matrix
    return (validate_idempotent(B @ P0 @ B.conj().T, tol),
            validate_idempotent(B @ Q0 @ B.conj().T, tol))


def _lemma_pair(rng, n, tol):
    """Pair with ``q_over(P) ⪯ q_under(Q)`` by construction."""
    m = int(rng.integers(1, n + 1))
    M = random_subspace(rng, n, m)
    Q = sp.ortho_projection(M)
    C = sp.complement(M)
    if C.dim:
        Q0 = random_idempotent(GenConfig(C.dim), rng=rng, tol=tol).matrix
        Q = Q + C.basis @ Q0 @ C.basis.conj().T
    P0 = random_idempotent(GenConfig(m), rng=rng, tol=tol).matrix
    P = M.basis @ P0 @ M.basis.conj().T
    return validate_idempotent(P, tol), validate_idempotent(Q, tol)


def _rel(A, B):
    A, B = np.asarray(A), np.asarray(B)
    return float(np.linalg.norm(A - B)) / (1.0 + float(np.linalg.norm(A)))


def _ortho(M):
    return orthogonal_projection_onto(M).matrix


# ---------------------------------------------------------------------- suites

def _order_axioms(rng, n, tol, t):
    P = random_idempotent(_gen(n), rng=rng, tol=tol)
    t.record("P", P)
    t.check(leq_minus(P, P, tol), "reflexivity fails")
    A, B = _mixed_pair(rng, n, tol)
    t.record("A", A)
    t.record("B", B)
    if leq_minus(A, B, tol) and leq_minus(B, A, tol):
        t.close(A.matrix, B.matrix, "antisymmetry fails")
    chain = random_chain(_gen(n), 3 if n >= 2 else 2, rng=rng, tol=tol)
    for i, Q in enumerate(chain):
        t.record(f"chain{i}", Q)
    t.check(leq_minus(chain[0], chain[-1], tol), "transitivity fails along a chain")


def _lemma21(rng, n, tol, t):
    P, Q = _mixed_pair(rng, n, tol)
    t.record("P", P)
    t.record("Q", Q)
    rep = order_report(P, Q, tol)
    t.check(rep.consistent, f"order_report forms disagree: leq={rep.leq} "
            f"inclusions={rep.inclusions} adjoint={rep.adjoint_leq} "
            f"complement={rep.complement_leq}")


def _independent_sum_kernel(P, Q, tol):
    """R(P) + R(Q) and N(P) ∩ N(Q) from stacked matrices."""
    S = sp.column_space(np.hstack([P.matrix, Q.matrix]), tol)
    K = sp.null_space(np.vstack([P.matrix, Q.matrix]), tol)
    return S, K


def _random_upper_bound(rng, S, K, tol, cond_bound=1e4, retries=100):
    """Random idempotent with range ⊇ S and kernel ⊆ K, where S ∔ K = C^n."""
    k = K.dim
    for _ in range(retries):
        d = int(rng.integers(0, k + 1))
        Nb = K.basis @ random_subspace(rng, k, d).basis if d else np.zeros((S.ambient_dim, 0))
        Lb = K.basis @ random_subspace(rng, k, k - d).basis if k - d else np.zeros((S.ambient_dim, 0))
        T = np.hstack([S.basis, Lb, Nb])
        if np.linalg.cond(T) > cond_bound:
            continue
        r = S.dim + k - d
        D = np.diag(np.r_[np.ones(r), np.zeros(d)])
        return validate_idempotent(T @ D @ np.linalg.inv(T), tol)
    raise IllConditioned("no well-conditioned upper bound", None)


def _sup_lub(rng, n, tol, t):
    P, Q = _mixed_pair(rng, n, tol)
    t.record("P", P)
    t.record("Q", Q)
    res = sup_minus(P, Q, tol)
    S_ind, K_ind = _independent_sum_kernel(P, Q, tol)
    contained = sp._containment_residual(S_ind, K_ind) <= tol.subspace_eq_tol
    if res.verdict is Verdict.IS_IDENTITY:
        t.check(contained, "IsIdentity but N(P)∩N(Q) ⊄ R(P)+R(Q)")
        return
    if res.verdict is Verdict.NOT_EXISTS:
        t.check(not contained and not K_ind.is_zero and not sp.is_direct_sum(S_ind, K_ind, tol),
                "NotExists although the supremum conditions hold")
        return
    S = res.operator
    t.output(S)
    t.check(leq_minus(P, S, tol) and leq_minus(Q, S, tol), "supremum is not an upper bound")
    t.close(_ortho(res.witness_range), _ortho(S_ind), "range witness differs")
    t.close(_ortho(res.witness_kernel), _ortho(K_ind), "kernel witness differs")
    t.close(_ortho(S.range), _ortho(S_ind), "R(S) differs from R(P)+R(Q)")
    for _ in range(UPPER_BOUNDS_PER_TRIAL):
        U = _random_upper_bound(rng, res.witness_range, res.witness_kernel, tol)
        if not (leq_minus(P, U, tol) and leq_minus(Q, U, tol)):
            t.check(False, "generated upper bound fails to dominate P and Q")
            break
        if not t.check(leq_minus(S, U, tol), "an upper bound does not dominate the supremum"):
            t.record("U", U)
            break


def _duality(rng, n, tol, t):
    P, Q = _mixed_pair(rng, n, tol)
    t.record("P", P)
    t.record("Q", Q)
    direct = inf_minus_direct(P, Q, tol)
    dual = _complement_result(sup_minus(P.complement(), Q.complement(), tol))
    t.check(direct.verdict is dual.verdict,
            f"verdicts differ: {direct.verdict.value} vs {dual.verdict.value}")
    if direct.exists and dual.exists:
        t.output(direct.operator)
        gap = _rel(direct.operator.matrix, dual.operator.matrix)
        t.check(gap <= CHECK_TOL, f"inf operators differ by {gap:.3e}")


def _cor27(rng, n, tol, t):
    P = random_idempotent(_gen(n), rng=rng, tol=tol)
    t.record("P", P)
    I = np.eye(n)
    s = sup_minus(P, P.complement(), tol)
    t.check(s.verdict is Verdict.IS_IDENTITY, f"sup(P, I-P) verdict {s.verdict.value}")
    i = inf_minus_direct(P, P.complement(), tol)
    t.check(i.verdict is Verdict.IS_ZERO, f"inf(P, I-P) verdict {i.verdict.value}")
    if s.exists:
        t.close(s.operator.matrix, I, "sup(P, I-P) != I")
    if i.exists:
        t.close(i.operator.matrix, np.zeros((n, n)), "inf(P, I-P) != 0")
    sa = sup_minus(P, P.H, tol)
    if t.check(sa.exists, "sup(P, P*) does not exist"):
        t.output(sa.operator)
        t.close(sa.operator.matrix, q_over(P, tol).matrix, "sup(P, P*) != q_over(P)")


def _cor28(rng, n, tol, t):
    P = random_idempotent(_gen(n), rng=rng, tol=tol)
    t.record("P", P)
    A = P.matrix
    I = np.eye(n)
    X = _ortho(sp.column_space(A + A.conj().T, tol))
    Y = _ortho(sp.column_space(2 * I - A - A.conj().T, tol))
    res = sup_minus(X, Y, tol)
    t.check(res.verdict is Verdict.IS_IDENTITY, f"verdict {res.verdict.value}")


def _cor210(rng, n, tol, t):
    if rng.random() < 0.3:
        P, Q = _orthogonal_sup_pair(rng, n, tol)
    else:
        P, Q = _mixed_pair(rng, n, tol)
    t.record("P", P)
    t.record("Q", Q)
    c = sup_orthogonality_test(P, Q, tol)
    t.check(len(set(c.values())) == 1, f"conditions disagree: {c}")


def _prop26(rng, n, tol, t):
    if rng.random() < 0.5:
        P, Q = _orthogonal_sup_pair(rng, n, tol)
    else:
        P, Q = _mixed_pair(rng, n, tol)
    t.record("P", P)
    t.record("Q", Q)
    O = sup_orth(P, Q, tol)
    t.output(O)
    Po, Qo = q_over(P, tol), q_over(Q, tol)
    t.check(leq_minus(Po, O, tol) and leq_minus(Qo, O, tol),
            "sup_orth is not above q_over(P) and q_over(Q)")
    so = sup_minus(Po, Qo, tol)
    if t.check(so.exists, "sup of the q_over projections does not exist"):
        t.close(so.operator.matrix, O.matrix, "sup(q_over(P), q_over(Q)) != sup_orth")
    res = sup_minus(P, Q, tol)
    if res.exists and res.operator.is_orthogonal:
        t.close(res.operator.matrix, O.matrix, "orthogonal supremum != sup_orth")


def _prop33(rng, n, tol, t):
    Q = random_idempotent(_gen(n), rng=rng, tol=tol)
    t.record("Q", Q)
    # q_under_via_abs and q_over raise FormulaMismatch when their routes disagree
    U = q_under_via_abs(Q, tol)
    O = q_over(Q, tol)
    t.output(U)
    t.output(O)
    t.close(O.matrix, np.eye(n) - q_under(Q.complement(), tol).matrix,
            "q_over(Q) != I - q_under(I-Q)")


def _prop39(rng, n, tol, t):
    P, Q = random_comparable_pair(_gen(n), rng=rng, orthogonal_gap=bool(rng.random() < 0.5),
                                  tol=tol)
    t.record("P", P)
    t.record("Q", Q)
    rep = diff_report(P, Q, tol)
    t.check(rep.consistent, f"DiffReport disagrees: psd={rep.psd} selfadjoint={rep.selfadjoint} "
            f"ortho={rep.ortho_proj} sum_order={rep.sum_order}")


def _lemma36(rng, n, tol, t):
    if rng.random() < 0.5:
        P, Q = _lemma_pair(rng, n, tol)
    else:
        P, Q = _mixed_pair(rng, n, tol)
    t.record("P", P)
    t.record("Q", Q)
    Po = q_over(P, tol).matrix
    D = Q.matrix - Po
    scale = 1.0 + float(np.linalg.norm(Q.matrix))
    props = (np.linalg.norm(D @ D - D) <= CHECK_TOL * scale
             and np.linalg.norm(D @ Po) <= CHECK_TOL * scale
             and np.linalg.norm(Po @ D) <= CHECK_TOL * scale)
    pre = leq_minus(Po, q_under(Q, tol), tol)
    t.check(pre == bool(props), f"q_over(P) ⪯ q_under(Q) is {pre} but the difference "
            f"properties are {bool(props)}")


def _cor34(rng, n, tol, t):
    Q, J = random_j_projection(_gen(n), rng=rng, tol=tol)
    t.record("Q", Q)
    t.record("J", J.matrix)
    t.check(is_j_projection(Q, J, tol).is_j_projection, "generated Q is not a J-projection")
    Jm = J.matrix
    for name, X in (("q_under", q_under(Q, tol).matrix), ("q_over", q_over(Q, tol).matrix)):
        t.output(X)
        t.check(np.linalg.norm(X @ Jm - Jm @ X) <= CHECK_TOL, f"{name}(Q) does not commute with J")


def _cor211(rng, n, tol, t, retries=100):
    J = random_symmetry(_gen(n), rng=rng, tol=tol)
    for _ in range(retries):
        P = random_j_commuting_idempotent(_gen(n), J, rng, tol)
        Q = random_j_commuting_idempotent(_gen(n), J, rng, tol)
        res = sup_minus(P, Q, tol)
        if res.exists:
            break
    else:
        t.check(False, "no J-commuting pair with an existing supremum")
        return
    t.record("P", P)
    t.record("Q", Q)
    t.record("J", J.matrix)
    res = sup_with_symmetry(P, Q, J, tol)
    S = res.operator.matrix
    t.output(S)
    t.check(np.linalg.norm(S @ J.matrix - J.matrix @ S) <= CHECK_TOL,
            "supremum does not commute with J")


def _thm37(rng, n, tol, t):
    r = int(rng.integers(1, n - 1))
    for _ in range(100):
        P = random_idempotent(GenConfig(n, r), rng=rng, tol=tol)
        if not P.is_orthogonal:
            break
    t.record("P", P)
    Q = thm37_counterexample(P, tol)
    t.output(Q)
    t.check(thm37_case(P, tol) in (1, 2), "unknown construction case")
    t.check(strictly_below(P, Q, tol), "P ≺ Q fails")
    t.check(not leq_minus(q_over(P, tol), q_under(Q, tol), tol),
            "q_over(P) ⪯ q_under(Q) although a counterexample was expected")
    # sufficiency: orthogonal P below a random Q
    W = random_subspace(rng, n, int(rng.integers(0, n + 1)))
    Po = orthogonal_projection_onto(W)
    C = sp.complement(W)
    Qm = Po.matrix.copy()
    if C.dim:
        E = random_idempotent(GenConfig(C.dim), rng=rng, tol=tol).matrix
        Qm = Qm + C.basis @ E @ C.basis.conj().T
    Qs = validate_idempotent(Qm, tol)
    t.record("P_orth", Po)
    t.record("Q_above", Qs)
    t.check(leq_minus(Po, Qs, tol), "constructed Q is not above orthogonal P")
    t.check(leq_minus(Po, q_under(Qs, tol), tol), "orthogonal P not below q_under(Q)")


def _feasible_commuting_projection(rng, J, lo=2):
    """Orthogonal P commuting with J with both J-parts of R(P) nonzero."""
    n = J.n
    p, m = J.signature
    a = int(rng.integers(1, p + 1))
    b = int(rng.integers(max(1, lo - a), m + 1))
    Lp = J.plus_space.basis @ random_subspace(rng, p, a).basis
    Lm = J.minus_space.basis @ random_subspace(rng, m, b).basis
    return sp.ortho_projection(sp.Subspace(n, np.hstack([Lp, Lm])))


def _thm38(rng, n, tol, t):
    p = int(rng.integers(1, n))
    J = random_symmetry(_gen(n), signature=(p, n - p), rng=rng, tol=tol)
    P = _feasible_commuting_projection(rng, J)
    t.record("P", P)
    t.record("J", J.matrix)
    Q = construct_q_over_preimage(P, J, tol)
    _check_preimage(t, Q, J, P, q_over, tol)
    # dual direction when I - P is feasible as well
    if n >= 4 and rng.random() < 0.5:
        a = int(rng.integers(1, p)) if p > 1 else 0
        b = int(rng.integers(1, n - p)) if n - p > 1 else 0
        if a and b:
            Lp = J.plus_space.basis @ random_subspace(rng, p, p - a).basis
            Lm = J.minus_space.basis @ random_subspace(rng, n - p, n - p - b).basis
            Pd = np.eye(n) - sp.ortho_projection(sp.Subspace(n, np.hstack([Lp, Lm])))
            t.record("P_dual", Pd)
            Qd = construct_q_under_preimage(Pd, J, tol)
            _check_preimage(t, Qd, J, Pd, q_under, tol)


def _check_preimage(t, Q, J, P, extremal, tol):
    t.output(Q)
    A, Jm = Q.matrix, J.matrix
    scale = 1.0 + float(np.linalg.norm(A)) ** 2
    t.check(np.linalg.norm(A @ A - A) <= 1e-12 * scale, "Q² != Q")
    t.check(np.linalg.norm(Jm @ A - A.conj().T @ Jm) <= 1e-12 * scale, "JQ != Q*J")
    t.check(np.linalg.norm(A - A.conj().T) > 0.5, "Q is selfadjoint")
    t.close(extremal(Q, tol).matrix, P, f"{extremal.__name__}(Q) != P")


def _sqrt32(rng, n, tol, t):
    h, k = int(rng.integers(1, 7)), int(rng.integers(1, 7))
    A = rng.standard_normal((h, k)) + 1j * rng.standard_normal((h, k))
    A *= rng.uniform(0.0, 5.0) / max(np.linalg.norm(A, 2), 1e-300)
    t.inputs["A"] = A
    R = block_sqrt(A)
    T = block_tilde(A)
    t.output(R)
    t.close(R @ R, T, "block_sqrt(A)² != Ã")
    t.close(R, R.conj().T, "block_sqrt(A) is not Hermitian")
    t.close(R, psd_sqrt(T), "block_sqrt(A) != eigen square root")


def _chains(rng, n, tol, t):
    k = int(rng.integers(1, n + 2))
    chain = random_chain(_gen(n), k, rng=rng, tol=tol)
    for i, Q in enumerate(chain):
        t.record(f"Q{i}", Q)
        t.output(Q)
    ranks = [sp.column_space(Q.matrix, tol).dim for Q in chain]
    t.check(all(a < b for a, b in zip(ranks, ranks[1:])), f"ranks not increasing: {ranks}")
    for i, (A, B) in enumerate(zip(chain, chain[1:])):
        t.check(leq_minus(A, B, tol), f"Q{i} ⪯ Q{i + 1} fails")
        t.check(leq_minus(q_over(A, tol), q_over(B, tol), tol), f"q_over not monotone at {i}")
        t.check(leq_minus(q_under(A, tol), q_under(B, tol), tol), f"q_under not monotone at {i}")


#: name -> (suite function, smallest dimension it supports)
SUITES = {
    "order-axioms": (_order_axioms, 2),
    "lemma21": (_lemma21, 2),
    "sup-lub": (_sup_lub, 2),
    "duality": (_duality, 2),
    "cor27": (_cor27, 1),
    "cor28": (_cor28, 1),
    "cor210": (_cor210, 2),
    "prop26": (_prop26, 2),
    "prop33": (_prop33, 1),
    "prop39": (_prop39, 1),
    "lemma36": (_lemma36, 2),
    "cor34": (_cor34, 1),
    "cor211": (_cor211, 1),
    "thm37": (_thm37, 3),
    "thm38": (_thm38, 2),
    "sqrt32": (_sqrt32, 1),
    "chains": (_chains, 1),
}


def _effective_range(name, dim_range):
    lo, hi = dim_range
    if lo < 1 or hi < lo:
        raise ValueError(f"bad dimension range {dim_range}")
    lo = max(lo, SUITES[name][1])
    return lo, max(lo, hi)


def run_trial(name, trial, seed=0, dim_range=DEFAULT_DIM_RANGE, tol=DEFAULT_TOL):
    """Run one trial; errors raised inside the suite count as failures."""
    if name not in SUITES:
        raise KeyError(name)
    fn, _ = SUITES[name]
    lo, hi = _effective_range(name, dim_range)
    rng = make_rng(seed, trial, name)
    n = int(rng.integers(lo, hi + 1))
    t = Trial()
    try:
        fn(rng, n, tol, t)
    except (MinusOrderError, np.linalg.LinAlgError) as exc:
        t.failures.append(f"{type(exc).__name__}: {exc}")
    return TrialResult(trial, n, not t.failures, t.failures, t.inputs,
                       digest(*t.inputs.values(), *t.outputs))


def run_suite(name, trials, seed=0, dim_range=DEFAULT_DIM_RANGE, tol=DEFAULT_TOL,
              only_trial=None):
    """Run ``trials`` trials (or just ``only_trial``) of the named suite.

    Raises KeyError for an unknown suite name.
    """
    if name not in SUITES:
        raise KeyError(name)
    if trials < 0:
        raise ValueError("trials must be non-negative")
    start = time.perf_counter()
    indices = [only_trial] if only_trial is not None else range(trials)
    report = SuiteReport(name, seed, _effective_range(name, dim_range), len(indices))
    report.results = [run_trial(name, i, seed, dim_range, tol) for i in indices]
    report.elapsed_ms = (time.perf_counter() - start) * 1e3
    return report
