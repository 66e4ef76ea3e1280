"""``minusorder`` command line.

Every subcommand prints one JSON report on stdout. Exit codes: 0 for a
positive result, 1 for a negative mathematical verdict, 2 for errors
(unreadable input, size mismatch, infeasible construction, bad usage).
"""

import argparse
import json
import os
import sys
import time
from dataclasses import replace

import numpy as np

from . import __version__
from .errors import Infeasible, MinusOrderError, NotIdempotent
from .fuzz import DEFAULT_DIM_RANGE, SUITES, run_suite
from .idempotent import canonical_form, q_over, q_under, validate_idempotent
from .krein import (construct_q_over_preimage, construct_q_under_preimage, is_j_projection,
                    thm37_case, thm37_counterexample)
from .lattice import inf_minus, leq_minus, order_report, strictly_below, sup_minus
from .matrixio import digest, load_matrix, matrix_to_obj, save_matrix
from .subspace import DEFAULT_TOL
from .symmetry import validate_symmetry

TOL_ENV = "MINUSORDER_TOL"

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _tolerances(flag):
    """Tolerance config and where it came from (flag beats environment)."""
    source, value = "default", None
    env = os.environ.get(TOL_ENV)
    if flag is not None:
        source, value = "flag", flag
    elif env:
        try:
            value = float(env)
        except ValueError:
            raise UsageError(f"{TOL_ENV}={env!r} is not a number") from None
        source = "env"
    cfg = DEFAULT_TOL
    if value is not None:
        try:
            cfg = replace(DEFAULT_TOL, idem_tol=value, subspace_eq_tol=value)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    echo = {"rank_rel_tol": cfg.rank_rel_tol, "idem_tol": cfg.idem_tol,
            "subspace_eq_tol": cfg.subspace_eq_tol, "source": source}
    if source == "env":
        echo["env"] = {TOL_ENV: env}
    return cfg, echo


def _cm(M):
    """Any complex matrix as nested [re, im] pairs."""
    A = np.atleast_2d(np.asarray(M, dtype=np.complex128))
    return [[[float(z.real), float(z.imag)] for z in row] for row in A]


class _Run:
    """Collects inputs, result and residuals for one report."""

    def __init__(self, command, cfg):
        self.command = command
        self.cfg = cfg
        self.inputs = {}
        self.result = {}
        self.residuals = {}
        self.seed = None

    def load(self, name, path):
        M = load_matrix(path)
        self.inputs[name] = {"path": path, "dim": M.shape[0], "sha256": digest(M)}
        return M

    def idem(self, name, path):
        M = self.load(name, path)
        try:
            return validate_idempotent(M, self.cfg)
        except NotIdempotent as exc:
            raise MinusOrderError(f"{name} is not an idempotent: {exc}") from None


def _write_out(args, run, M):
    if getattr(args, "out", None) and M is not None:
        save_matrix(args.out, M)
        run.result["out"] = args.out


def _lattice_payload(res):
    d = {"verdict": res.verdict.value, "exists": res.exists}
    if res.exists:
        d["operator"] = matrix_to_obj(res.operator.matrix)
        d["range_dim"] = res.witness_range.dim
        d["kernel_dim"] = res.witness_kernel.dim
    return d


def cmd_check(args, run):
    M = run.load("P", args.P)
    try:
        P = validate_idempotent(M, run.cfg)
    except NotIdempotent as exc:
        run.result = {"idempotent": False, "reason": str(exc)}
        run.residuals = {"idempotent": exc.residual}
        return EXIT_NEGATIVE
    run.result = {"idempotent": True, "rank": P.rank, "orthogonal": P.is_orthogonal}
    run.residuals = {"idempotent": float(np.linalg.norm(M @ M - M))}
    return EXIT_OK


def cmd_order(args, run):
    P, Q = run.idem("P", args.P), run.idem("Q", args.Q)
    rep = order_report(P, Q, run.cfg)
    run.result = {"leq": rep.leq, "range_incl": rep.range_incl, "kernel_incl": rep.kernel_incl,
                  "adjoint_leq": rep.adjoint_leq, "complement_leq": rep.complement_leq,
                  "consistent": rep.consistent}
    run.residuals = rep.residuals
    return EXIT_OK if rep.leq else EXIT_NEGATIVE


def _cmd_lattice(op, args, run):
    P, Q = run.idem("P", args.P), run.idem("Q", args.Q)
    res = op(P, Q, run.cfg)
    run.result = _lattice_payload(res)
    if res.exists:
        S = res.operator.matrix
        run.residuals = {"idempotent": float(np.linalg.norm(S @ S - S))}
        _write_out(args, run, S)
    return EXIT_OK if res.exists else EXIT_NEGATIVE


def cmd_sup(args, run):
    return _cmd_lattice(sup_minus, args, run)


def cmd_inf(args, run):
    return _cmd_lattice(inf_minus, args, run)


def _cmd_extremal(fn, args, run):
    Q = run.idem("Q", args.Q)
    X = fn(Q, run.cfg).matrix
    run.result = {"operator": matrix_to_obj(X), "rank": int(round(np.trace(X).real))}
    run.residuals = {"idempotent": float(np.linalg.norm(X @ X - X)),
                     "hermitian": float(np.linalg.norm(X - X.conj().T))}
    _write_out(args, run, X)
    return EXIT_OK


def cmd_qor(args, run):
    return _cmd_extremal(q_over, args, run)


def cmd_qunder(args, run):
    return _cmd_extremal(q_under, args, run)


def cmd_canonical(args, run):
    Q = run.idem("Q", args.Q)
    cf = canonical_form(Q, run.cfg)
    U = cf.unitary()
    run.result = {"block_dims": list(cf.block_dims()), "q1_block": _cm(cf.q1_block),
                  "q1_adjoint_injective": cf.q1_adjoint_injective(run.cfg),
                  "unitary": matrix_to_obj(U)}
    run.residuals = {"reassembly": float(np.linalg.norm(cf.assemble() - Q.matrix))}
    return EXIT_OK


def cmd_jcheck(args, run):
    Q = run.idem("Q", args.Q)
    J = validate_symmetry(run.load("J", args.J), run.cfg)
    cert = is_j_projection(Q, J, run.cfg)
    run.result = {"j_projection": cert.is_j_projection, "signature": list(J.signature)}
    run.residuals = {"JQ-Q*J": cert.residual}
    return EXIT_OK if cert.is_j_projection else EXIT_NEGATIVE


def cmd_construct38(args, run):
    P = run.idem("P", args.P)
    J = validate_symmetry(run.load("J", args.J), run.cfg)
    build, extremal = ((construct_q_under_preimage, q_under) if args.dual
                       else (construct_q_over_preimage, q_over))
    Q = build(P, J, run.cfg)
    A = Q.matrix
    run.result = {"operator": matrix_to_obj(A), "dual": args.dual,
                  "selfadjoint": bool(np.linalg.norm(A - A.conj().T) <= run.cfg.idem_tol)}
    run.residuals = {"idempotent": float(np.linalg.norm(A @ A - A)),
                     "JQ-Q*J": is_j_projection(Q, J, run.cfg).residual,
                     "extremal-P": float(np.linalg.norm(extremal(Q, run.cfg).matrix - P.matrix))}
    _write_out(args, run, A)
    return EXIT_OK


def cmd_counterexample37(args, run):
    P = run.idem("P", args.P)
    Q = thm37_counterexample(P, run.cfg)
    Po, Qu = q_over(P, run.cfg), q_under(Q, run.cfg)
    run.result = {"operator": matrix_to_obj(Q.matrix), "case": thm37_case(P, run.cfg),
                  "strictly_below": strictly_below(P, Q, run.cfg),
                  "qover_P_leq_qunder_Q": leq_minus(Po, Qu, run.cfg)}
    run.residuals = {"PQ-P": float(np.linalg.norm(P.matrix @ Q.matrix - P.matrix)),
                     "QP-P": float(np.linalg.norm(Q.matrix @ P.matrix - P.matrix))}
    _write_out(args, run, Q.matrix)
    return EXIT_OK


def _dim_range(args):
    if args.dim is not None and args.dim_range is not None:
        raise UsageError("give --dim or --dim-range, not both")
    if args.dim is not None:
        return (args.dim, args.dim)
    if args.dim_range is not None:
        try:
            lo, hi = (int(x) for x in args.dim_range.split("-"))
        except ValueError:
            raise UsageError(f"--dim-range expects LO-HI, got {args.dim_range!r}") from None
        return (lo, hi)
    return DEFAULT_DIM_RANGE


def cmd_fuzz(args, run):
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    try:
        rep = run_suite(args.suite, args.trials, seed=args.seed, dim_range=_dim_range(args),
                        tol=run.cfg, only_trial=args.only_trial)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    run.seed = args.seed
    run.result = rep.to_dict()
    run.residuals = {"failed_checks": sum(len(r.failures) for r in rep.results)}
    return EXIT_OK if rep.ok else EXIT_NEGATIVE


def build_parser():
    p = argparse.ArgumentParser(prog="minusorder",
                                description="Minus-order lattice and J-projection toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--tol", type=float, default=None,
                   help=f"idempotency/subspace tolerance (overrides ${TOL_ENV})")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, files, help_, out=False):
        sp_ = sub.add_parser(name, help=help_)
        for f in files:
            sp_.add_argument(f, help=f"{f} matrix file (JSON)")
        if out:
            sp_.add_argument("--out", help="write the constructed operator here")
        sp_.set_defaults(func=fn)
        return sp_

    add("check", cmd_check, ["P"], "validate an idempotent")
    add("order", cmd_order, ["P", "Q"], "evaluate P ⪯ Q in all equivalent forms")
    add("sup", cmd_sup, ["P", "Q"], "supremum under the minus order", out=True)
    add("inf", cmd_inf, ["P", "Q"], "infimum under the minus order", out=True)
    add("qor", cmd_qor, ["Q"], "smallest orthogonal projection above Q", out=True)
    add("qunder", cmd_qunder, ["Q"], "largest orthogonal projection below Q", out=True)
    add("canonical", cmd_canonical, ["Q"], "canonical 3x3 block form")
    add("jcheck", cmd_jcheck, ["Q", "J"], "is Q a J-projection")
    c38 = add("construct38", cmd_construct38, ["P", "J"],
              "non-selfadjoint J-projection with prescribed extremal projection", out=True)
    c38.add_argument("--dual", action="store_true",
                     help="prescribe the largest orthogonal projection below Q instead")
    add("counterexample37", cmd_counterexample37, ["P"],
        "idempotent Q above P breaking the extremal-projection order", out=True)

    fz = sub.add_parser("fuzz", help="run a randomized property suite")
    fz.add_argument("--suite", required=True, help=", ".join(SUITES))
    fz.add_argument("--trials", type=int, default=100)
    fz.add_argument("--dim", type=int, default=None, help="fixed dimension")
    fz.add_argument("--dim-range", default=None, help="LO-HI (default 2-8)")
    fz.add_argument("--seed", type=int, default=0)
    fz.add_argument("--only-trial", type=int, default=None,
                    help="replay a single trial index")
    fz.set_defaults(func=cmd_fuzz)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_ERROR
    start = time.perf_counter()
    report = {"command": args.command}
    try:
        cfg, tol_echo = _tolerances(args.tol)
        report["tolerance"] = tol_echo
        run = _Run(args.command, cfg)
        try:
            code = args.func(args, run)
        finally:
            report["inputs"] = run.inputs
        report.update(result=run.result, residuals=run.residuals, seed=run.seed)
    except (MinusOrderError, UsageError, OSError) as exc:
        code = EXIT_ERROR
        reason = exc.reason if isinstance(exc, Infeasible) else None
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        if reason:
            report["error"]["reason"] = reason
    report["exit_code"] = code
    report["elapsed_ms"] = (time.perf_counter() - start) * 1e3
    json.dump(report, sys.stdout, indent=2, default=_json_default)
    sys.stdout.write("\n")
    return code


def _json_default(o):
    if isinstance(o, (np.bool_,)):
        return bool(o)
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    raise TypeError(f"not serializable: {type(o).__name__}")


if __name__ == "__main__":
    sys.exit(main())
