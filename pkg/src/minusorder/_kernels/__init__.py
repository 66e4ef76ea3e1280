"""Residual kernels with a compiled backend and a numpy fallback.

The Cython extension is used when it was built; set
``MINUSORDER_PURE_PYTHON=1`` to force the numpy implementation. The
compiled loops are O(n³) without blocking, so matrix-product kernels hand
sizes above :data:`CROSSOVER` to numpy/BLAS (see benchmarks/bench_kernels.py).
"""

import os

from . import _pykernels

#: Largest dimension for which the compiled product kernels are used.
CROSSOVER = 12

if os.environ.get("MINUSORDER_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"


def _by_size(name):
    small, large = getattr(_impl, name), getattr(_pykernels, name)
    if small is large:
        return large

    def kernel(A, *rest):
        return (small if A.shape[0] <= CROSSOVER else large)(A, *rest)

    kernel.__name__ = name
    kernel.__doc__ = large.__doc__
    return kernel


product_residual = _by_size("product_residual")
commutator_residual = _by_size("commutator_residual")
adjoint_product_residual = _by_size("adjoint_product_residual")
idempotent_residual = _by_size("idempotent_residual")
# elementwise; the compiled loop wins at every size
hermitian_residual = _impl.hermitian_residual

__all__ = ["BACKEND", "CROSSOVER", "product_residual", "commutator_residual",
           "adjoint_product_residual", "hermitian_residual",
           "idempotent_residual"]
