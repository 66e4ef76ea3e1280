import numpy as np
import pytest

from minusorder import subspace as sp
from minusorder.errors import InvalidMatrix, NotIdempotent
from minusorder.idempotent import (abs_value, block_sqrt, block_tilde, canonical_form,
                                   identity, orthogonal_projection_onto, psd_sqrt, q_over,
                                   q_under, q_under_via_abs, validate_idempotent, zero)
from minusorder.random_gen import GenConfig, random_idempotent

N = np.array([[1, 1], [0, 0]], dtype=complex)


def test_validate_accepts_oblique_and_reports_structure():
    P = validate_idempotent(N)
    assert P.rank == 1
    assert not P.is_orthogonal
    np.testing.assert_allclose(sp.ortho_projection(P.kernel), [[0.5, -0.5], [-0.5, 0.5]],
                               atol=1e-14)


def test_validate_rejects():
    with pytest.raises(NotIdempotent) as exc:
        validate_idempotent([[1, 2], [3, 4]])
    assert exc.value.residual > 1
    with pytest.raises(InvalidMatrix):
        validate_idempotent(np.ones((2, 3)))


def test_matrix_is_read_only():
    P = validate_idempotent(N)
    with pytest.raises(ValueError):
        P.matrix[0, 0] = 5


def test_complement_swaps_range_and_kernel():
    P = validate_idempotent(N)
    C = P.complement()
    np.testing.assert_allclose(C.matrix, np.eye(2) - N)
    assert sp.equal(C.range, P.kernel) and sp.equal(C.kernel, P.range)


def test_identity_zero_orthogonal():
    assert identity(3).is_orthogonal and identity(3).rank == 3
    assert zero(3).rank == 0
    O = orthogonal_projection_onto(sp.column_space(np.array([[1], [1]])))
    np.testing.assert_allclose(O.matrix, np.full((2, 2), 0.5))


def test_canonical_form_of_rank_one_example():
    cf = canonical_form(N)
    assert cf.block_dims() == (0, 1, 1)
    np.testing.assert_allclose(np.abs(cf.q1_block), [[1.0]], atol=1e-14)
    assert cf.q1_adjoint_injective()
    U = cf.unitary()
    np.testing.assert_allclose(U.conj().T @ U, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(cf.assemble(), N, atol=1e-14)


def test_canonical_form_of_orthogonal_projection_has_empty_coupling():
    cf = canonical_form(np.diag([1, 1, 0]))
    assert cf.block_dims() == (2, 0, 1)
    assert cf.q1_block.size == 0


def test_canonical_form_reassembles_random(rng):
    for trial in range(20):
        P = random_idempotent(GenConfig(6), trial=trial)
        cf = canonical_form(P)
        U = cf.unitary()
        np.testing.assert_allclose(U.conj().T @ U, np.eye(6), atol=1e-12)
        np.testing.assert_allclose(cf.assemble(), P.matrix, atol=1e-9)
        assert cf.q1_adjoint_injective()


def test_abs_value_example():
    np.testing.assert_allclose(abs_value(N), np.full((2, 2), 1 / np.sqrt(2)), atol=1e-14)


def test_psd_sqrt_clamps_roundoff():
    H = np.array([[1, 1], [1, 1.0]])
    R = psd_sqrt(H)
    np.testing.assert_allclose(R @ R, H, atol=1e-14)
    assert np.all(np.isfinite(R))


def test_block_sqrt_scalar_example():
    np.testing.assert_allclose(block_sqrt(np.array([[1.0]])),
                               np.full((2, 2), 1 / np.sqrt(2)), atol=1e-14)


def test_block_sqrt_matches_eigen_route(rng):
    A = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    R = block_sqrt(A)
    T = block_tilde(A)
    np.testing.assert_allclose(R @ R, T, atol=1e-10)
    np.testing.assert_allclose(R, psd_sqrt(T), atol=1e-10)


def test_block_tilde_layout():
    A = np.array([[2.0]])
    np.testing.assert_allclose(block_tilde(A), [[1, 2], [2, 4]])


@pytest.mark.parametrize("Q, under, over", [
    (N, np.zeros((2, 2)), np.eye(2)),
    (np.diag([1, 0]), np.diag([1, 0]), np.diag([1, 0])),
    (np.eye(2), np.eye(2), np.eye(2)),
    (np.zeros((2, 2)), np.zeros((2, 2)), np.zeros((2, 2))),
])
def test_q_under_q_over_examples(Q, under, over):
    np.testing.assert_allclose(q_under(Q).matrix, under, atol=1e-12)
    np.testing.assert_allclose(q_under_via_abs(Q).matrix, under, atol=1e-12)
    np.testing.assert_allclose(q_over(Q).matrix, over, atol=1e-12)


def test_q_under_of_block_example():
    # e1 fixed, oblique rank-one part on span{e2, e3}
    Q = np.array([[1, 0, 0], [0, 1, 1], [0, 0, 0]], dtype=complex)
    np.testing.assert_allclose(q_under(Q).matrix, np.diag([1, 0, 0]), atol=1e-12)
    np.testing.assert_allclose(q_over(Q).matrix, np.eye(3), atol=1e-12)
