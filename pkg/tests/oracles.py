"""Independent reference computations written directly against numpy.

These deliberately avoid the package's subspace layer so that tests do
not compare a routine against itself.
"""

import numpy as np


def null_projector(M, tol=1e-9):
    M = np.asarray(M, dtype=complex)
    _, s, Vh = np.linalg.svd(M)
    s = np.r_[s, np.zeros(Vh.shape[0] - s.size)]
    V = Vh[s <= tol].conj().T
    return V @ V.conj().T


def range_projector(M, tol=1e-9):
    U, s, _ = np.linalg.svd(np.asarray(M, dtype=complex))
    B = U[:, :int(np.sum(s > tol))]
    return B @ B.conj().T


def q_under(Q):
    """Projection onto {x : Qx = x = Q*x}."""
    Q = np.asarray(Q, dtype=complex)
    I = np.eye(Q.shape[0])
    return null_projector(np.vstack([Q - I, Q.conj().T - I]))


def q_over(Q):
    Q = np.asarray(Q, dtype=complex)
    return np.eye(Q.shape[0]) - null_projector(Q + Q.conj().T)


def leq(P, Q, tol=1e-9):
    P, Q = np.asarray(P), np.asarray(Q)
    return np.linalg.norm(P @ Q - P) <= tol and np.linalg.norm(Q @ P - P) <= tol


def oblique(range_cols, kernel_cols):
    """Idempotent with the given range and kernel bases."""
    R = np.asarray(range_cols, dtype=complex).reshape(-1, np.shape(range_cols)[-1]) \
        if np.ndim(range_cols) == 2 else np.asarray(range_cols, dtype=complex)[:, None]
    K = np.asarray(kernel_cols, dtype=complex)
    K = K if K.ndim == 2 else K[:, None]
    T = np.hstack([R, K])
    D = np.diag(np.r_[np.ones(R.shape[1]), np.zeros(K.shape[1])])
    return T @ D @ np.linalg.inv(T)
