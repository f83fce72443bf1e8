"""Randomised invariants over the builtin examples."""

import itertools
from functools import lru_cache

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from qhstar import (
    StarData,
    TensorElement,
    check_antipode,
    check_qba,
    check_star_qha,
    classify_star_qt,
    compute_operators,
    example,
    random_twist,
    twist_structure,
)
from qhstar.canonical_operators import center_basis
from qhstar.drinfeld_twists import drinfeld_checks, w_placement_verdict
from qhstar.fileformat import dumps, loads
from qhstar.qha_structures import antipode_equivalence_v, opposite
from qhstar.star_structures import is_star_compatible_antipode, tilde_star, tilde_structure
from qhstar.tensor_core import commutator_residual, invert, permute_legs
from qhstar.twist_calculus import central_compatible_twist, compose_twists, is_compatible_twist

POOL = [
    ("group_hopf_star", (3,)),
    ("dual_group_cocycle", (3,)),
    ("char_twisted_star", (4, 0)),
    ("char_twisted_star", (3, 5, False)),
    ("z2_triangular", ()),
    ("bicharacter_qt", (3, 1)),
    ("bicharacter_qt", (4, 3)),
    ("symmetric_group_star", ()),
    ("symmetric_group_star", (1, 2, 3)),
]
QT_POOL = [p for p in POOL if p[0] in ("z2_triangular", "bicharacter_qt")]

seeds = st.integers(0, 2 ** 32 - 1)
props = settings(max_examples=25, deadline=None)


@lru_cache(maxsize=None)
def build(name, params):
    return example(name, *params)


def close(a, b, atol=1e-9):
    a = a.coeffs if isinstance(a, TensorElement) else np.asarray(a)
    b = b.coeffs if isinstance(b, TensorElement) else np.asarray(b)
    return np.max(np.abs(a - b), initial=0.0) <= atol * max(1.0, np.max(np.abs(b), initial=0.0))


def rand_el(alg, order, rng, scale=1.0):
    shape = (alg.dim,) * order
    return TensorElement(alg, scale * (rng.normal(size=shape) + 1j * rng.normal(size=shape)))


# -- kernel --------------------------------------------------------------------

@settings(max_examples=100, deadline=None)
@given(seed=seeds, which=st.sampled_from([("symmetric_group_star", ()), ("dual_group_cocycle", (3,)),
                                          ("real_bicharacter_qt", (2,))]),
       order=st.integers(1, 3))
def test_associativity(seed, which, order):
    alg = build(*which).algebra
    rng = np.random.default_rng(seed)
    a, b, c = (rand_el(alg, order, rng) for _ in range(3))
    assert close((a * b) * c, a * (b * c))


@props
@given(seed=seeds, order=st.integers(1, 2))
def test_inverse_two_sided(seed, order):
    H = build("symmetric_group_star", ()).qha
    rng = np.random.default_rng(seed)
    a = H.one(order) + rand_el(H.algebra, order, rng, 0.1)
    ai = invert(a)
    assert close(a * ai, H.one(order)) and close(ai * a, H.one(order))


@props
@given(seed=seeds, s=st.permutations([1, 2, 3]), t=st.permutations([1, 2, 3]))
def test_permutations_act(seed, s, t):
    alg = build("symmetric_group_star", ()).algebra
    a = rand_el(alg, 3, np.random.default_rng(seed))
    composed = [s[t[i] - 1] for i in range(3)]
    assert np.array_equal(permute_legs(permute_legs(a, s), t).coeffs, permute_legs(a, composed).coeffs)


@props
@given(seed=seeds)
def test_coproduct_on_legs_matches_loops(seed):
    H = build("dual_group_cocycle", (3,)).qha
    n = H.dim
    t = rand_el(H.algebra, 2, np.random.default_rng(seed))
    D = H.coproduct.matrix.reshape(n, n, n)
    got = H.delta(H.delta(t, 1), 3)
    ref = np.zeros((n,) * 4, dtype=complex)
    for i, j, p, q, r, s in itertools.product(range(n), repeat=6):
        ref[p, q, r, s] += t.coeffs[i, j] * D[p, q, i] * D[r, s, j]
    assert close(got, ref, 1e-12)


# -- structures under twisting -------------------------------------------------

@props
@given(seed=seeds, which=st.sampled_from(POOL))
def test_twisting_preserves_axioms(seed, which):
    S = build(*which)
    F = random_twist(S.qha, np.random.default_rng(seed))
    T = S.twisted(F)
    assert check_qba(T.qha).overall and check_antipode(T.qha).overall
    assert check_star_qha(T.qha, T.star).overall
    assert abs(T.qha.eps(T.qha.alpha) * T.qha.eps(T.qha.beta) - 1) < 1e-9
    O = opposite(T.qha)
    assert check_qba(O).overall and check_antipode(O).overall


@props
@given(seed=seeds)
def test_twist_composition(seed):
    H = build("symmetric_group_star", (1, 2, 3)).qha
    rng = np.random.default_rng(seed)
    F, G, K = (random_twist(H, rng) for _ in range(3))
    FG = compose_twists(F, G, H, verify=False)
    lhs = twist_structure(twist_structure(H, G), F)
    rhs = twist_structure(H, FG)
    assert close(lhs.coproduct.matrix, rhs.coproduct.matrix) and close(lhs.coassociator, rhs.coassociator)
    assert close(lhs.alpha, rhs.alpha) and close(lhs.beta, rhs.beta)
    left = compose_twists(compose_twists(F, G, H, False), K, H, False)
    right = compose_twists(F, compose_twists(G, K, H, False), H, False)
    assert close(left.element, right.element)
    one = compose_twists(F, type(F).identity(H), H, False)
    assert close(one.element, F.element)


@props
@given(seed=seeds)
def test_compatible_twists_form_subgroup(seed):
    H = build("symmetric_group_star", (1,)).qha
    rng = np.random.default_rng(seed)
    centre = center_basis(H)

    def central():
        z = sum((c * (1.0 + 0.3 * rng.normal()) for c in centre[1:]), centre[0] * 3.0)
        return z * (1.0 / H.eps(z))

    A, B = central_compatible_twist(H, central()), central_compatible_twist(H, central())
    assert is_compatible_twist(A * B, H)[0]
    assert is_compatible_twist(A.inv(), H)[0]


@props
@given(seed=seeds, which=st.sampled_from([("group_hopf_star", (4,)), ("symmetric_group_star", ())]))
def test_hopf_star_bootstrap(seed, which):
    S = build(*which)
    T = S.twisted(random_twist(S.qha, np.random.default_rng(seed)))
    assert check_star_qha(T.qha, T.star).overall
    # Ω = 1⊗1 is self-conjugate, and so is (F†)^{-1}F^{-1}
    assert close(T.star.dag(T.star.omega.element), T.star.omega.element)
    assert is_star_compatible_antipode(T.qha, T.star) == is_star_compatible_antipode(S.qha, S.star)


@props
@given(seed=seeds, which=st.sampled_from(POOL))
def test_canonical_element_properties(seed, which):
    S = build(*which)
    T = S.twisted(random_twist(S.qha, np.random.default_rng(seed)))
    H, star = T.qha, T.star
    q = star.omega.inverse * star.dag(star.omega.element)
    for i in range(H.dim):
        d = H.delta(H.basis(i))
        assert close(q * d, d * q)
    assert check_star_qha(H, StarData(star.dagger, star.omega_dag)).overall
    back = tilde_structure(tilde_structure(H, star), tilde_star(star))
    for a, b in ((back.coproduct.matrix, H.coproduct.matrix), (back.coassociator, H.coassociator),
                 (back.antipode.matrix, H.antipode.matrix), (back.alpha, H.alpha), (back.beta, H.beta)):
        assert close(a, b)


@props
@given(seed=seeds)
def test_equivalence_v_unique(seed):
    # the linear system S2(e_i) v = v S(e_i), v α = α2 has a one-dimensional solution space
    H = build("symmetric_group_star", (1,)).qha
    rng = np.random.default_rng(seed)
    v0 = H.one() + rand_el(H.algebra, 1, rng, 0.2)
    v0 = v0 * (1.0 / H.eps(v0))
    vi = invert(v0)
    from qhstar.qha_structures import conjugation_matrix
    from qhstar.tensor_core import LinearMapData, regular_matrix

    S2 = LinearMapData(conjugation_matrix(v0, vi) @ H.antipode.matrix)
    v = antipode_equivalence_v(H, S2, v0 * H.alpha, H.beta * vi)
    assert close(v, v0)
    n = H.dim
    rows = [regular_matrix(TensorElement(H.algebra, S2.matrix[:, i]))
            - regular_matrix(TensorElement(H.algebra, H.antipode.matrix[:, i]), "right") for i in range(n)]
    A = np.vstack(rows + [regular_matrix(H.alpha, "right")])
    null = n - np.linalg.matrix_rank(A[:-n], tol=1e-9)
    assert null >= 1 and np.linalg.matrix_rank(A, tol=1e-9) == n


# -- operators and the Drinfeld twist -------------------------------------------

@props
@given(seed=seeds, which=st.sampled_from([p for p in POOL if p[0] != "z2_triangular"]))
def test_w_is_universal(seed, which):
    S = build(*which)
    w = compute_operators(S.qha, S.star).w
    T = S.twisted(random_twist(S.qha, np.random.default_rng(seed)))
    ops = compute_operators(T.qha, T.star)
    assert close(ops.w, w)
    # w is central exactly when the antipode is *-compatible
    assert (commutator_residual(ops.w) < 1e-9) == is_star_compatible_antipode(T.qha, T.star)
    H = T.qha
    assert close(T.star.dag(ops.c), H.Sinv(invert(ops.c)))


@props
@given(seed=seeds, which=st.sampled_from(POOL))
def test_drinfeld_variants_agree(seed, which):
    S = build(*which)
    T = S.twisted(random_twist(S.qha, np.random.default_rng(seed)))
    ds, rep = drinfeld_checks(T.qha)
    assert rep.overall, rep.failed()
    ops = compute_operators(T.qha, T.star)
    v = w_placement_verdict(T.qha, T.star, ops, ds)
    assert v.residual_inverse <= v.threshold
    # the W placement can only agree when W² acts trivially
    W2 = ops.W * ops.W
    assert (v.residual_direct <= v.threshold) == close(W2, T.qha.one(2), 1e-8)


@props
@given(seed=seeds, which=st.sampled_from(QT_POOL))
def test_classification_twist_invariant(seed, which):
    S = build(*which)
    before = classify_star_qt(S.qha, S.star, S.r_matrix).kind
    T = S.twisted(random_twist(S.qha, np.random.default_rng(seed)))
    assert classify_star_qt(T.qha, T.star, T.r_matrix).kind is before
    from qhstar import verify_qt_star_ledger

    rep = verify_qt_star_ledger(T.qha, T.star, T.r_matrix)
    assert rep.overall, rep.failed()


@props
@given(seed=seeds, which=st.sampled_from(POOL))
def test_round_trip(seed, which):
    S = build(*which).twisted(random_twist(build(*which).qha, np.random.default_rng(seed)))
    text = dumps(S)
    assert dumps(loads(text)) == text
    S2 = loads(text)
    assert S2.qha.coassociator.coeffs.tobytes() == S.qha.coassociator.coeffs.tobytes()
    assert S2.star.omega.element.coeffs.tobytes() == S.star.omega.element.coeffs.tobytes()
