import numpy as np
import pytest

from qhstar import compute_operators, example, verify_operator_ledger
from qhstar.canonical_operators import center_basis, compute_w


def test_hopf_star_operators_are_trivial(hopf3):
    ops = compute_operators(hopf3.qha, hopf3.star)
    one = hopf3.qha.one().coeffs
    for x in (ops.w, ops.w_bar, ops.c):
        np.testing.assert_allclose(x.coeffs, one, atol=1e-12)


def test_w_on_function_algebra_oracle(dual3):
    # with Φ unimodular and Ω = 1⊗1 the defining sum collapses to w(x) = Φ(-x, x, -x)
    H = dual3.qha
    phi = H.coassociator.coeffs
    w, w_inv = compute_w(H, dual3.star)
    expect = np.array([phi[-x % 3, x, -x % 3] for x in range(3)])
    np.testing.assert_allclose(w.coeffs, expect, atol=1e-12)
    np.testing.assert_allclose((w * w_inv).coeffs, H.one().coeffs, atol=1e-12)


@pytest.mark.parametrize("fixture", ["dual3", "char4", "char4_plain", "s3_full"])
def test_ledger_passes(fixture, request):
    S = request.getfixturevalue(fixture)
    rep = verify_operator_ledger(S.qha, S.star)
    assert rep.overall, rep.failed()


def test_gauge_makes_w_nontrivial(char4, char4_plain):
    w = compute_operators(char4.qha, char4.star).w
    w0 = compute_operators(char4_plain.qha, char4_plain.star).w
    one = char4.qha.one().coeffs
    assert np.max(np.abs(w.coeffs - one)) > 0.1
    np.testing.assert_allclose(w0.coeffs, one, atol=1e-12)


def test_c_is_central_and_unit_when_self_conjugate(s3_full, char4):
    ops = compute_operators(s3_full.qha, s3_full.star)
    from qhstar.tensor_core import commutator_residual

    assert commutator_residual(ops.c) < 1e-10
    # Ω = (FF†)^{-1} is self-adjoint, so w̄ = w and c = 1
    ops4 = compute_operators(char4.qha, char4.star)
    np.testing.assert_allclose(ops4.c.coeffs, char4.qha.one().coeffs, atol=1e-12)


def test_center_of_s3_has_three_classes(s3_full):
    assert len(center_basis(s3_full.qha)) == 3


def test_w_scale_follows_gauge():
    S = example("symmetric_group_star", None, None, 3)
    rep = verify_operator_ledger(S.qha, S.star)
    assert rep.overall, rep.failed()
