"""JSON matrix files.

Format::

    {"dim": n, "data": [[[re, im], ...], ...]}

``data`` is n x n, row-major, each entry a two-element numeric array.
Floats are written with ``repr`` precision, which round-trips doubles
exactly.
"""

import hashlib
import json
import math

import numpy as np

from .errors import InvalidMatrix

__all__ = ["matrix_to_obj", "matrix_from_obj", "load_matrix", "save_matrix",
           "digest"]


def matrix_to_obj(M):
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidMatrix(f"matrix files hold square matrices, got shape {A.shape}")
    return {"dim": int(A.shape[0]),
            "data": [[[float(z.real), float(z.imag)] for z in row] for row in A]}


def _number(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def matrix_from_obj(obj):
    """Parse a decoded MatrixFile; raises InvalidMatrix on any deviation."""
    if not isinstance(obj, dict) or "dim" not in obj or "data" not in obj:
        raise InvalidMatrix("matrix file must be an object with 'dim' and 'data'")
    n, data = obj["dim"], obj["data"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InvalidMatrix(f"'dim' must be a positive integer, got {n!r}")
    if not isinstance(data, list) or len(data) != n:
        raise InvalidMatrix(f"'data' must have {n} rows")
    A = np.empty((n, n), dtype=np.complex128)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != n:
            raise InvalidMatrix(f"row {i} must have {n} entries")
        for j, entry in enumerate(row):
            if (not isinstance(entry, list) or len(entry) != 2
                    or not all(_number(x) for x in entry)):
                raise InvalidMatrix(f"entry ({i}, {j}) must be a [re, im] pair of finite numbers")
            A[i, j] = complex(entry[0], entry[1])
    return A


def load_matrix(path):
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidMatrix(f"{path}: not valid JSON ({exc})") from None
    return matrix_from_obj(obj)


def save_matrix(path, M):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_obj(M), fh)
        fh.write("\n")


def digest(*matrices):
    """SHA-256 over the raw complex128 bytes of the given matrices."""
    h = hashlib.sha256()
    for M in matrices:
        A = np.ascontiguousarray(M, dtype=np.complex128)
        h.update(str(A.shape).encode())
        h.update(A.tobytes())
    return h.hexdigest()
