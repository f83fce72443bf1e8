import numpy as np
import pytest

from oracles import pointwise_drinfeld, to_idempotent_coords
from qhstar import compute_operators, drinfeld_set, example, random_twist
from qhstar.drinfeld_twists import (
    VariantMismatch,
    compute_gamma,
    drinfeld_checks,
    drinfeld_structures_pass,
    gamma_dagger_variants,
    primed_canonical_variants,
    primed_coproduct,
    verify_conjugation_ledger,
    verify_twist_law,
    w_placement_verdict,
)
from qhstar.examples import character_idempotents


def idempotent_rows(S):
    H = S.qha
    if S.meta["name"] == "dual_group_cocycle":
        return np.eye(H.dim)
    return np.array([p.coeffs for p in character_idempotents(H.algebra, H.dim)])


@pytest.mark.parametrize("fixture", ["dual3", "char4", "char4_plain"])
def test_pointwise_oracle(fixture, request):
    S = request.getfixturevalue(fixture)
    H = S.qha
    P = idempotent_rows(S)
    coords = lambda x: to_idempotent_coords(x.coeffs, P)  # noqa: E731
    F, F_inv = pointwise_drinfeld(H.dim, coords(H.coassociator), coords(H.alpha), coords(H.beta))
    ds = drinfeld_set(H)
    np.testing.assert_allclose(coords(ds.F_delta.element), F, atol=1e-12)
    np.testing.assert_allclose(coords(ds.F_delta.inverse), F_inv, atol=1e-12)


def test_hopf_case_is_trivial(hopf3):
    ds = drinfeld_set(hopf3.qha)
    one = hopf3.qha.one(2).coeffs
    np.testing.assert_allclose(ds.F_delta.element.coeffs, one, atol=1e-14)
    np.testing.assert_allclose(ds.gamma.coeffs, one, atol=1e-14)


def test_noncommutative_checks(s3_full):
    ds, rep = drinfeld_checks(s3_full.qha)
    assert rep.overall, rep.failed()
    assert drinfeld_structures_pass(s3_full.qha).overall


def test_uncounital_alpha_is_rejected(dual3):
    H = dual3.qha
    lam = 0.5 + 0.5j
    bad = H.replace(alpha=H.alpha * lam, beta=H.beta * (1 / lam))
    ds, rep = drinfeld_checks(bad)
    assert "twist-counital" in {e.name for e in rep.failed()}
    with pytest.raises(VariantMismatch):
        drinfeld_set(bad)


def test_gamma_needs_consistent_variants(dual3):
    H = dual3.qha
    g = compute_gamma(H)
    assert g.order == 2
    # a non-cocycle Φ makes the two ingredient tensors disagree
    broken = example("perturbed_cocycle", 3).qha
    with pytest.raises(VariantMismatch):
        compute_gamma(broken)


def test_primed_structure_of_hopf_is_itself(hopf3):
    H = hopf3.qha
    Hp = primed_coproduct(H)
    np.testing.assert_allclose(Hp.coproduct.matrix, H.coproduct.matrix, atol=1e-14)


def test_twist_law_noncommutative(s3_full, rng):
    H = s3_full.qha
    ds = drinfeld_set(H)
    for _ in range(3):
        rep = verify_twist_law(H, random_twist(H, rng), ds)
        assert rep.overall, rep.failed()


@pytest.mark.parametrize("fixture", ["dual3", "char4", "s3_full"])
def test_conjugation_ledger(fixture, request):
    S = request.getfixturevalue(fixture)
    ops = compute_operators(S.qha, S.star)
    rep = verify_conjugation_ledger(S.qha, S.star, ops)
    assert rep.overall, rep.failed()


def test_placement_and_display_variants(char4, hopf3):
    ops = compute_operators(char4.qha, char4.star)
    v = w_placement_verdict(char4.qha, char4.star, ops)
    assert v.verdict == "W^-1"
    assert v.residual_direct > 1e-3
    prim = primed_canonical_variants(char4.qha, char4.star, ops)
    assert prim["W^-1"] < 1e-9 < prim["W"]
    gam = gamma_dagger_variants(char4.qha, char4.star, ops)
    assert gam["second-leg"] < 1e-9 < gam["first-leg"]
    ops3 = compute_operators(hopf3.qha, hopf3.star)
    assert w_placement_verdict(hopf3.qha, hopf3.star, ops3).verdict == "both"


def test_mediating_element_reports_counit_scale(dual3):
    from qhstar.drinfeld_twists import primed_mediating_element

    H = dual3.qha
    np.testing.assert_allclose(primed_mediating_element(H).coeffs, H.one().coeffs, atol=1e-12)
    lam = 0.5 + 0.5j
    bad = H.replace(alpha=H.alpha * lam, beta=H.beta * (1 / lam))
    np.testing.assert_allclose(primed_mediating_element(bad).coeffs, lam * H.one().coeffs, atol=1e-12)
