import os
import subprocess
import sys

import numpy as np
import pytest

from minusorder import _kernels
from minusorder._kernels import _pykernels

NAMES = ["product_residual", "commutator_residual", "adjoint_product_residual",
         "hermitian_residual", "idempotent_residual"]

try:
    from minusorder._kernels import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def _args(name, rng, n=5):
    M = [rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) for _ in range(3)]
    return {"product_residual": M, "commutator_residual": M[:2],
            "adjoint_product_residual": M[:2], "hermitian_residual": M[:1],
            "idempotent_residual": M[:1]}[name]


@pytest.mark.parametrize("name", NAMES)
def test_python_kernels_match_numpy_definitions(name, rng):
    args = _args(name, rng)
    A = args[0]
    ref = {
        "product_residual": lambda: np.linalg.norm(args[0] @ args[1] - args[2]),
        "commutator_residual": lambda: np.linalg.norm(args[0] @ args[1] - args[1] @ args[0]),
        "adjoint_product_residual": lambda: np.linalg.norm(
            args[0] @ args[1] - args[1].conj().T @ args[0]),
        "hermitian_residual": lambda: np.linalg.norm(A - A.conj().T),
        "idempotent_residual": lambda: np.linalg.norm(A @ A - A),
    }[name]()
    assert getattr(_pykernels, name)(*args) == pytest.approx(ref, rel=1e-12)


@pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")
@pytest.mark.parametrize("name", NAMES)
def test_compiled_kernels_match_python(name, rng):
    args = _args(name, rng)
    assert getattr(_ckernels, name)(*args) == pytest.approx(getattr(_pykernels, name)(*args),
                                                           rel=1e-12, abs=1e-14)


@pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")
def test_compiled_kernels_accept_read_only_and_strided(rng):
    A = rng.standard_normal((6, 6)) + 0j
    A.setflags(write=False)
    B = (rng.standard_normal((6, 6)) + 0j)[:, ::-1]
    assert _ckernels.commutator_residual(A, B) == pytest.approx(
        _pykernels.commutator_residual(A, B), rel=1e-12)


def test_backend_selected():
    assert _kernels.BACKEND in ("cython", "python")
    forced = os.environ.get("MINUSORDER_PURE_PYTHON", "") not in ("", "0")
    if _ckernels is not None and not forced:
        assert _kernels.BACKEND == "cython"


def test_pure_python_override():
    env = dict(os.environ, MINUSORDER_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c",
                          "import minusorder._kernels as k; print(k.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_dispatch_above_crossover_matches_numpy(rng):
    n = _kernels.CROSSOVER + 5
    A, B = (rng.standard_normal((n, n)) + 0j for _ in range(2))
    assert _kernels.commutator_residual(A, B) == pytest.approx(
        _pykernels.commutator_residual(A, B), rel=1e-12)
    assert _kernels.product_residual(A, B, A) == pytest.approx(
        _pykernels.product_residual(A, B, A), rel=1e-12)
