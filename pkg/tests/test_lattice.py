import numpy as np
import pytest

from minusorder.errors import DimensionMismatch, NotCommuting, NotComparable
from minusorder.lattice import (Verdict, diff_report, inf_minus, inf_minus_direct, leq_minus,
                                order_report, strictly_below, sup_iterated, sup_minus,
                                sup_orth, sup_orthogonality_test, sup_with_symmetry)
from minusorder.random_gen import GenConfig, random_idempotent

import oracles

N = np.array([[1, 1], [0, 0]], dtype=complex)
E1 = np.diag([1, 0, 0]).astype(complex)
B3 = np.array([[0, 0, 0], [0, 1, 1], [0, 0, 0]], dtype=complex)


def test_leq_examples():
    P = random_idempotent(GenConfig(4), trial=3)
    assert leq_minus(P, P)
    assert leq_minus(P, np.eye(4))
    assert leq_minus(E1, E1 + B3)
    assert not leq_minus(N, np.diag([1, 0]))
    assert strictly_below(np.diag([1, 0]), np.eye(2))
    assert not strictly_below(N, N)


def test_leq_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        leq_minus(np.eye(2), np.eye(3))


def test_order_report_all_true_and_zero():
    rep = order_report(np.diag([1, 0]), np.eye(2))
    assert rep.leq and rep.range_incl and rep.kernel_incl and rep.adjoint_leq and rep.complement_leq
    rep = order_report(np.zeros((2, 2)), N)
    assert rep.leq and rep.inclusions and rep.consistent


def test_order_report_one_sided_inclusion():
    # R(N) = R(diag(1,0)) = span{e1}: the range inclusion alone holds
    rep = order_report(N, np.diag([1, 0]))
    assert not rep.leq and not rep.adjoint_leq and not rep.complement_leq
    assert rep.range_incl and not rep.kernel_incl
    assert not rep.inclusions and rep.consistent


def test_sup_three_by_three_example():
    res = sup_minus(E1, B3)
    assert res.verdict is Verdict.EXISTS_NONTRIVIAL
    oracle = oracles.oblique(np.array([[1, 0], [0, 1], [0, 0]]), np.array([0, 1, -1]))
    np.testing.assert_allclose(oracle, [[1, 0, 0], [0, 1, 1], [0, 0, 0]], atol=1e-14)
    np.testing.assert_allclose(res.operator.matrix, oracle, atol=1e-12)
    assert res.witness_range.dim == 2 and res.witness_kernel.dim == 1


def test_sup_identity_cases():
    P = random_idempotent(GenConfig(4, 2), trial=1)
    res = sup_minus(P, P.complement())
    assert res.verdict is Verdict.IS_IDENTITY
    np.testing.assert_allclose(res.operator.matrix, np.eye(4))
    np.testing.assert_allclose(sup_minus(N, N.conj().T).operator.matrix, np.eye(2), atol=1e-12)


def test_sup_not_exists():
    # K = span{(1,1,0), e3} meets R(P) + R(Q) = span{e1, e2} without lying in it
    K = np.array([[1, 1, 0], [0, 0, 1]]).T
    P = oracles.oblique(np.array([1, 0, 0]), K)
    Q = oracles.oblique(np.array([0, 1, 0]), K)
    assert sup_minus(P, Q).verdict is Verdict.NOT_EXISTS


def test_sup_of_comparable_pair_is_larger():
    res = sup_minus(E1, E1 + B3)
    np.testing.assert_allclose(res.operator.matrix, E1 + B3, atol=1e-12)


def test_inf_examples():
    P = random_idempotent(GenConfig(3, 1), trial=2)
    assert inf_minus(P, P.complement()).verdict is Verdict.IS_ZERO
    S = random_idempotent(GenConfig(3, 2), trial=4)
    res = inf_minus(S, np.eye(3))
    np.testing.assert_allclose(res.operator.matrix, S.matrix, atol=1e-10)
    assert inf_minus(E1, B3).verdict is Verdict.IS_ZERO
    assert inf_minus_direct(E1, B3).verdict is Verdict.IS_ZERO


def test_verdict_dual():
    assert Verdict.IS_IDENTITY.dual() is Verdict.IS_ZERO
    assert Verdict.IS_ZERO.dual() is Verdict.IS_IDENTITY
    assert Verdict.NOT_EXISTS.dual() is Verdict.NOT_EXISTS
    assert Verdict.EXISTS_NONTRIVIAL.dual() is Verdict.EXISTS_NONTRIVIAL


def test_sup_orth_examples():
    np.testing.assert_allclose(sup_orth(N, np.zeros((2, 2))).matrix, np.eye(2), atol=1e-12)
    D = np.diag([1, 0])
    np.testing.assert_allclose(sup_orth(D, D).matrix, D, atol=1e-12)
    np.testing.assert_allclose(sup_orth(np.diag([1, 0, 0]), np.diag([0, 1, 0])).matrix,
                               np.diag([1, 1, 0]), atol=1e-12)


@pytest.mark.parametrize("P, Q, expected", [
    (np.diag([1, 0, 0]), np.diag([0, 1, 0]), True),
    (N, np.eye(2) - N, False),
    (N, np.zeros((2, 2)), False),
])
def test_sup_orthogonality_test_examples(P, Q, expected):
    assert sup_orthogonality_test(P, Q) == {"condA": expected, "condB": expected,
                                           "condC": expected}


def test_diff_report_examples():
    rep = diff_report(np.diag([1, 0]), np.eye(2))
    assert rep.psd and rep.selfadjoint and rep.ortho_proj and rep.sum_order
    rep = diff_report(N, np.eye(2))
    assert not (rep.psd or rep.selfadjoint or rep.ortho_proj or rep.sum_order)
    # oracle: 2I - N - N* = [[0,-1],[-1,2]] has eigenvalues 1 ± √2
    assert rep.residuals["min_eig_sum"] == pytest.approx(1 - np.sqrt(2))
    rep = diff_report(np.zeros((2, 2)), N)
    assert not (rep.psd or rep.selfadjoint or rep.ortho_proj or rep.sum_order)
    rep = diff_report(np.zeros((2, 2)), np.diag([0, 1]))
    assert rep.psd and rep.ortho_proj and rep.consistent


def test_diff_report_requires_comparable():
    with pytest.raises(NotComparable):
        diff_report(np.eye(2), np.diag([1, 0]))


def test_sup_with_symmetry_diagonal_example():
    J = np.diag([1, -1, 1])
    res = sup_with_symmetry(np.diag([1, 0, 0]), np.diag([0, 0, 1]), J)
    np.testing.assert_allclose(res.operator.matrix, np.diag([1, 0, 1]), atol=1e-12)


def test_sup_with_symmetry_identity_symmetry_reduces_to_sup():
    res = sup_with_symmetry(E1, B3, np.eye(3))
    np.testing.assert_allclose(res.operator.matrix, sup_minus(E1, B3).operator.matrix)


def test_sup_with_symmetry_rejects_non_commuting():
    with pytest.raises(NotCommuting):
        sup_with_symmetry(N, np.zeros((2, 2)), np.diag([1, -1]))


def test_sup_iterated():
    res = sup_iterated([np.diag([1, 0, 0]), np.diag([0, 1, 0]), np.diag([0, 0, 1])])
    assert res.verdict is Verdict.IS_IDENTITY
    res = sup_iterated([E1])
    np.testing.assert_allclose(res.operator.matrix, E1)
    with pytest.raises(ValueError):
        sup_iterated([])
