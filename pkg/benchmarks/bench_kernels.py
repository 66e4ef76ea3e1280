"""Compare the compiled residual kernels against the numpy fallback.

Usage::

    python benchmarks/bench_kernels.py [--sizes 2 4 8 16 64] [--repeat 2000]
    python benchmarks/bench_kernels.py --end-to-end

``--end-to-end`` times a fuzz suite once per backend, each in a fresh
interpreter so the import-time backend choice applies.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from minusorder._kernels import _pykernels

try:
    from minusorder._kernels import _ckernels
except ImportError:
    _ckernels = None

CASES = {
    "product_residual": 3,
    "commutator_residual": 2,
    "adjoint_product_residual": 2,
    "hermitian_residual": 1,
    "idempotent_residual": 1,
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[2, 4, 8, 16, 64])
    ap.add_argument("--repeat", type=int, default=2000)
    ap.add_argument("--end-to-end", action="store_true")
    args = ap.parse_args(argv)
    if args.end_to_end:
        return end_to_end()
    if _ckernels is None:
        print("compiled kernels not built; only the numpy backend is available")
    rng = np.random.default_rng(0)
    print(f"{'kernel':26s} {'n':>4s} {'numpy us':>10s} {'cython us':>10s} {'speedup':>8s}")
    for name, arity in CASES.items():
        for n in args.sizes:
            mats = [rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
                    for _ in range(arity)]
            py = getattr(_pykernels, name)
            t_py = timeit.timeit(lambda: py(*mats), number=args.repeat) / args.repeat * 1e6
            if _ckernels is None:
                print(f"{name:26s} {n:4d} {t_py:10.2f} {'-':>10s} {'-':>8s}")
                continue
            c = getattr(_ckernels, name)
            assert np.isclose(c(*mats), py(*mats), rtol=1e-12)
            t_c = timeit.timeit(lambda: c(*mats), number=args.repeat) / args.repeat * 1e6
            print(f"{name:26s} {n:4d} {t_py:10.2f} {t_c:10.2f} {t_py / t_c:8.2f}x")


E2E = ("import time; from minusorder.fuzz import run_suite; from minusorder import BACKEND; "
       "t = time.perf_counter(); r = run_suite('lemma21', 500, seed=0); "
       "print(f'{BACKEND:8s} lemma21 x500: {time.perf_counter() - t:.2f} s, {r.passed} passed')")


def end_to_end():
    for pure in ("0", "1"):
        env = dict(os.environ, MINUSORDER_PURE_PYTHON=pure)
        subprocess.run([sys.executable, "-c", E2E], env=env, check=True)


if __name__ == "__main__":
    main()
