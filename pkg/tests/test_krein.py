import numpy as np
import pytest

from minusorder import subspace as sp
from minusorder.errors import Degenerate, Infeasible
from minusorder.idempotent import q_over, q_under
from minusorder.krein import (COUPLING_BLOCK, construct_q_over_preimage,
                              construct_q_under_preimage, is_j_projection, j_projection_onto,
                              thm37_case, thm37_counterexample)
from minusorder.lattice import leq_minus, strictly_below
from minusorder.symmetry import validate_symmetry
from minusorder.errors import NotSymmetry

import oracles

Q38 = np.array([[1.5, 0.5j * np.sqrt(3)], [0.5j * np.sqrt(3), -0.5]])
J2 = np.diag([1.0, -1.0])
P4 = np.array([[1, 0, 1, 0], [0, 1, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]], dtype=complex)


def line(*v):
    return sp.column_space(np.array(v, dtype=complex)[:, None])


def test_validate_symmetry_examples():
    J = validate_symmetry(np.eye(3))
    assert J.signature == (3, 0)
    assert validate_symmetry(J2).signature == (1, 1)
    S = validate_symmetry([[0, 1], [1, 0]])
    np.testing.assert_allclose(sp.ortho_projection(S.plus_space), np.full((2, 2), 0.5),
                               atol=1e-14)
    with pytest.raises(NotSymmetry):
        validate_symmetry(np.diag([1, 2]))


def test_is_j_projection_examples():
    assert is_j_projection(np.diag([1, 0]), J2).is_j_projection
    cert = is_j_projection(Q38, J2)
    assert cert.is_j_projection and cert.residual < 1e-15
    assert not is_j_projection([[1, 1], [0, 0]], np.eye(2)).is_j_projection


def test_j_projection_onto_examples():
    np.testing.assert_allclose(j_projection_onto(line(1, 0), J2).matrix, np.diag([1, 0]),
                               atol=1e-14)
    with pytest.raises(Degenerate):
        j_projection_onto(line(1, 1), J2)
    Q = j_projection_onto(line(2, 1), J2)
    # oracle: kernel is (J(2,1))^⊥ = (2,-1)^⊥ = span{(1,2)}
    oracle = oracles.oblique(np.array([2, 1]), np.array([1, 2]))
    np.testing.assert_allclose(oracle, np.array([[4, -2], [2, -1]]) / 3, atol=1e-14)
    np.testing.assert_allclose(Q.matrix, oracle, atol=1e-12)
    assert is_j_projection(Q, J2).is_j_projection and not Q.is_orthogonal


def test_construct_q_over_preimage_reproduces_coupling_block():
    Q = construct_q_over_preimage(np.eye(2), J2)
    assert np.max(np.abs(Q.matrix - Q38)) <= 1e-12
    np.testing.assert_allclose(COUPLING_BLOCK, Q38, atol=0)
    np.testing.assert_allclose(q_over(Q).matrix, np.eye(2), atol=1e-12)
    np.testing.assert_allclose(oracles.q_over(Q.matrix), np.eye(2), atol=1e-12)


@pytest.mark.parametrize("P, J, reason", [
    (np.eye(2), np.eye(2), "(I-J)P = 0"),
    (np.eye(2), -np.eye(2), "(I+J)P = 0"),
    (np.diag([1, 0, 0, 0]), np.diag([1, -1, 1, -1]), "dim R(P) = 1 < 2"),
    (np.diag([1, 1, 0]), np.array([[1, 0, 0], [0, 0, 1], [0, 1, 0]]), "P does not commute with J"),
    (np.array([[1, 1], [0, 0]]), J2, "P is not an orthogonal projection"),
])
def test_construct_q_over_preimage_infeasible(P, J, reason):
    with pytest.raises(Infeasible) as exc:
        construct_q_over_preimage(P, J)
    assert exc.value.reason == reason


def test_construct_q_under_preimage_zero():
    Q = construct_q_under_preimage(np.zeros((2, 2)), J2)
    np.testing.assert_allclose(Q.matrix, np.eye(2) - Q38, atol=1e-12)
    np.testing.assert_allclose(q_under(Q).matrix, 0, atol=1e-12)


def test_construct_q_under_preimage_infeasible_rank_one():
    with pytest.raises(Infeasible) as exc:
        construct_q_under_preimage(np.diag([1, 0]), J2)
    assert exc.value.reason == "dim R((I-P)) = 1 < 2"


def test_construct_q_under_preimage_regression():
    # precondition oracle: I-P = diag(0,0,1,1) commutes with J, rank 2, and
    # (I+J)(I-P) = 2e3e3*, (I-J)(I-P) = 2e4e4* are both nonzero: feasible
    P = np.diag([1, 1, 0, 0])
    J = np.diag([1, 1, 1, -1])
    Q = construct_q_under_preimage(P, J)
    expected = np.eye(4, dtype=complex)
    expected[2:, 2:] = np.eye(2) - Q38
    np.testing.assert_allclose(Q.matrix, expected, atol=1e-12)
    np.testing.assert_allclose(q_under(Q).matrix, P, atol=1e-12)
    assert is_j_projection(Q, J).is_j_projection


def test_counterexample_four_by_four_case_one():
    Q = thm37_counterexample(P4)
    expected = np.array([[1, 0, 0, 0], [0, 1, 0, 1], [0, 0, 1, 0], [0, 0, 0, 0]])
    np.testing.assert_allclose(Q.matrix, expected, atol=1e-12)
    assert thm37_case(P4) == 1
    assert strictly_below(P4, Q)
    # brute-force oracle values
    np.testing.assert_allclose(oracles.q_over(P4), np.eye(4), atol=1e-12)
    np.testing.assert_allclose(oracles.q_under(expected), np.diag([1, 0, 1, 0]), atol=1e-12)
    np.testing.assert_allclose(q_over(P4).matrix, np.eye(4), atol=1e-12)
    np.testing.assert_allclose(q_under(Q).matrix, np.diag([1, 0, 1, 0]), atol=1e-12)
    assert not leq_minus(q_over(P4), q_under(Q))


def test_counterexample_case_two():
    # coupling block with a kernel: e4 lies in R(P)^⊥ and P e4 = 0 inside it
    P = np.zeros((4, 4), dtype=complex)
    P[0, 0] = P[1, 1] = 1
    P[1, 2] = 1
    assert thm37_case(P) == 2
    Q = thm37_counterexample(P)
    assert strictly_below(P, Q)
    assert not oracles.leq(oracles.q_over(P), oracles.q_under(Q.matrix))


@pytest.mark.parametrize("P, reason", [
    (np.diag([1, 0, 0]), "P orthogonal"),
    (np.array([[1, 1], [0, 0]]), "dim R(P)^⊥ ≤ 1"),
])
def test_counterexample_infeasible(P, reason):
    with pytest.raises(Infeasible) as exc:
        thm37_counterexample(P)
    assert exc.value.reason == reason
