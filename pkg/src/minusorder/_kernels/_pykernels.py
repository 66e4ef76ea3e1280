"""numpy implementations of the residual kernels (fallback backend)."""

import numpy as np


def _fro(X):
    return float(np.linalg.norm(X))


def product_residual(A, B, C):
    return _fro(A @ B - C)


def commutator_residual(A, B):
    return _fro(A @ B - B @ A)


def adjoint_product_residual(J, Q):
    return _fro(J @ Q - Q.conj().T @ J)


def hermitian_residual(M):
    return _fro(M - M.conj().T)


def idempotent_residual(M):
    return _fro(M @ M - M)
