"""The operators ``w``, ``w̄`` and ``c`` relating ``S`` to the conjugated antipode ``S̃``.

``w`` mediates between two antipode triples of the structure twisted by Ω:
``(S̃, S^{-1}(β)†, S^{-1}(α)†)`` from the conjugated side and ``(S, α_Ω, β_Ω)``.
``w̄`` is the same operator built from ``Ω†``; ``c = w^{-1}w̄`` is central.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qha_structures import (
    CheckReport,
    QuasiHopfData,
    StructureError,
    antipode_equivalence_report,
    antipode_equivalence_v,
    conjugation_matrix,
)
from .star_structures import (
    StarData,
    is_star_compatible_antipode,
    star_twist,
    tilde_structure,
)
from .tensor_core import (
    DEFAULT_TOL,
    LinearMapData,
    TensorElement,
    ToleranceConfig,
    apply_leg,
    commutator_residual,
    contract,
    invert,
    outer,
)
from .twist_calculus import (
    TwistData,
    central_compatible_twist,
    random_twist,
    twist_structure,
    twisted_alpha,
    twisted_beta,
    twisted_coassociator,
    twisted_coproduct,
)


class FormulaMismatch(StructureError):
    """Two closed forms of the same operator disagree."""


@dataclass(frozen=True, eq=False)
class OperatorSet:
    w: TensorElement
    w_inv: TensorElement
    w_bar: TensorElement
    w_bar_inv: TensorElement
    c: TensorElement

    @property
    def W(self) -> TensorElement:
        """``S^{-1}(w) ⊗ S^{-1}(w)``; filled in by ``compute_operators``."""
        return self._W

    @property
    def W_inv(self) -> TensorElement:
        return self._W_inv


def _w_forms(H: QuasiHopfData, st: StarData) -> dict[str, TensorElement]:
    """Every closed form of ``w`` and ``w^{-1}`` for the given canonical element."""
    dag = st.dag
    om = st.omega
    S, St = H.antipode, tilde_structure(H, st).antipode
    St_inv = St.inverse()
    S_St_inv = S.compose(St_inv)
    a_om, b_om = twisted_alpha(H, om), twisted_beta(H, om)
    a_om_dag = twisted_alpha(H, st.omega_dag)
    alpha_t = dag(H.Sinv(H.alpha))   # S^{-1}(α)†
    beta_t = dag(H.Sinv(H.beta))     # S^{-1}(β)†
    phi_t = dag(H.phi_inv)           # (Φ†)^{-1}
    phi_td = dag(H.coassociator)     # Φ†
    phi = H.coassociator
    el = lambda x: TensorElement(H.algebra, x)  # noqa: E731
    return {
        "w": contract(apply_leg(St, 3, apply_leg(S, 1, phi_t)), [1, a_om, 2, alpha_t, 3]),
        "w-second": contract(apply_leg(S_St_inv, 1, apply_leg(S, 2, phi_td)),
                             [1, el(S_St_inv(alpha_t.coeffs)), 2, a_om, 3]),
        "w-alt": contract(apply_leg(St, 3, apply_leg(S, 1, phi)),
                          [1, H.alpha, 2, dag(H.Sinv(a_om_dag)), 3]),
        "w-inv": contract(apply_leg(S, 3, apply_leg(St, 1, phi_t)), [1, beta_t, 2, b_om, 3]),
        "w-inv-second": contract(apply_leg(S_St_inv, 3, apply_leg(S, 2, phi_td)),
                                 [1, b_om, 2, el(S_St_inv(beta_t.coeffs)), 3]),
    }


def compute_w(H: QuasiHopfData, st: StarData, tol: ToleranceConfig = DEFAULT_TOL
              ) -> tuple[TensorElement, TensorElement]:
    """``(w, w^{-1})``; raises FormulaMismatch when the closed forms disagree."""
    forms = _w_forms(H, st)
    w, w_inv = forms["w"], forms["w-inv"]
    rep = CheckReport("w")
    rep.compare("w-second", forms["w-second"], w, tol)
    rep.compare("w-alt", forms["w-alt"], w, tol)
    rep.compare("w-inv-second", forms["w-inv-second"], w_inv, tol)
    rep.compare("w-times-inverse", w * w_inv, H.one(), tol)
    if not rep.overall:
        raise FormulaMismatch("forms of w disagree: " + ", ".join(e.name for e in rep.failed()), rep)
    return w, w_inv


def compute_w_bar(H: QuasiHopfData, st: StarData, tol: ToleranceConfig = DEFAULT_TOL
                  ) -> tuple[TensorElement, TensorElement]:
    """``w`` computed with ``Ω†`` in place of Ω."""
    return compute_w(H, StarData(st.dagger, st.omega_dag), tol)


def compute_operators(H: QuasiHopfData, st: StarData, tol: ToleranceConfig = DEFAULT_TOL) -> OperatorSet:
    w, w_inv = compute_w(H, st, tol)
    wb, wb_inv = compute_w_bar(H, st, tol)
    ops = OperatorSet(w, w_inv, wb, wb_inv, w_inv * wb)
    sw, sw_inv = H.Sinv(w), H.Sinv(w_inv)
    object.__setattr__(ops, "_W", outer(sw, sw))
    object.__setattr__(ops, "_W_inv", outer(sw_inv, sw_inv))
    return ops


def center_basis(H: QuasiHopfData, tol: ToleranceConfig = DEFAULT_TOL) -> list[TensorElement]:
    """A basis of the center from the null space of ``x -> [e_i, x]``."""
    m = H.algebra.mult
    n = H.dim
    # rows: (i, k) components of e_i x - x e_i as linear functions of x
    A = (m - np.transpose(m, (1, 0, 2))).transpose(0, 2, 1).reshape(n * n, n)
    _, s, vh = np.linalg.svd(A)
    rank = int(np.sum(s > tol.threshold(max(float(s[0]) if s.size else 0.0, 1.0))))
    return [TensorElement(H.algebra, vh[j].conj()) for j in range(rank, n)]


def _commutator_sides(z: TensorElement) -> tuple[np.ndarray, np.ndarray]:
    m = z.algebra.mult
    return np.einsum("i,ijk->jk", z.coeffs, m), np.einsum("i,jik->jk", z.coeffs, m)


def _basis(H):
    for i in range(H.dim):
        yield H.algebra.basis_labels[i], H.basis(i)


def verify_operator_ledger(H: QuasiHopfData, st: StarData, ops: OperatorSet | None = None,
                           seed: int = 0, tol: ToleranceConfig = DEFAULT_TOL) -> CheckReport:
    """One entry per identity satisfied by ``w``, ``w̄`` and ``c``.

    ``seed`` drives the random twist used for the conjugated-twist identities,
    the universality check and the compatible-twist rescaling of ``w``.
    """
    if ops is None:
        ops = compute_operators(H, st, tol)
    rep = CheckReport("operators")
    dag = st.dag
    om = st.omega
    w, w_inv, wb, wb_inv, c = ops.w, ops.w_inv, ops.w_bar, ops.w_bar_inv, ops.c
    S, Sinv = H.S, H.Sinv
    St_map = tilde_structure(H, st).antipode
    St_inv_map = St_map.inverse()
    el = lambda x: TensorElement(H.algebra, x)  # noqa: E731
    St = lambda a: el(St_map(a.coeffs))  # noqa: E731
    St_inv = lambda a: el(St_inv_map(a.coeffs))  # noqa: E731
    a_om, b_om = twisted_alpha(H, om), twisted_beta(H, om)
    omd = st.omega_dag
    a_omd, b_omd = twisted_alpha(H, omd), twisted_beta(H, omd)
    alpha, beta = H.alpha, H.beta
    phi_inv = H.phi_inv

    forms = _w_forms(H, st)
    rep.compare("w-second-form", forms["w-second"], w, tol)
    rep.compare("w-inverse-second-form", forms["w-inv-second"], w_inv, tol)
    rep.compare("w-alt-form", forms["w-alt"], w, tol)
    rep.compare("w-times-inverse", w * w_inv, H.one(), tol)

    # mediating element from the generic antipode-equivalence construction
    try:
        v, _ = antipode_equivalence_report(tilde_structure(H, st).replace(
            coproduct=LinearMapData(twisted_coproduct(H, om)),
            coassociator=twisted_coassociator(H, om)), H.antipode, a_om, b_om, tol)
        rep.compare("w-from-equivalence", v, w, tol)
    except StructureError:
        rep.flag("w-from-equivalence", False)

    rep.compare("w-beta-tilde", w * dag(Sinv(beta)), a_om, tol)
    rep.compare("beta-omega-w", b_om * w, dag(Sinv(alpha)), tol)
    rep.compare("antipode-from-tilde", H.antipode.matrix,
                conjugation_matrix(w, w_inv) @ St_map.matrix, tol)
    rep.compare("w-tilde-beta", w * St(dag(beta)), a_om, tol)
    w_dag, w_dag_inv = dag(w), dag(w_inv)
    for label, a in _basis(H):
        rep.compare(f"antipode-dagger[{label}]", dag(S(a)), w_dag_inv * Sinv(dag(a)) * w_dag, tol)

    rep.compare("w-dagger-form", w_dag,
                contract(apply_leg(St_inv_map, 1, apply_leg(H.antipode_inv, 3, phi_inv)),
                         [3, Sinv(alpha), 2, dag(a_om), 1]), tol)
    rep.compare("w-inverse-dagger-form", w_dag_inv,
                contract(apply_leg(H.antipode_inv, 1, apply_leg(St_inv_map, 3, phi_inv)),
                         [3, dag(b_om), 2, Sinv(beta), 1]), tol)

    central = commutator_residual(w) <= tol.threshold(max(w.max_norm(), 1.0))
    rep.flag("w-central-iff-star-compatible", central == is_star_compatible_antipode(H, st, tol))

    rep.compare("tilde-antipode-inverse", St_map.matrix @ H.antipode_inv.matrix,
                conjugation_matrix(w_inv, w), tol)
    rep.compare("antipode-tilde-inverse", H.antipode.matrix @ St_inv_map.matrix,
                conjugation_matrix(w, w_inv), tol)
    rep.compare("antipode-of-tilde-inverse-w", S(St_inv(w)), w, tol)
    rep.compare("tilde-of-antipode-inverse-w", St(Sinv(w)), w, tol)
    rep.compare("antipode-inverse-w-dagger", dag(Sinv(w)), S(w_dag), tol)
    rep.compare("antipode-inverse-w-tilde", Sinv(w), St_inv(w), tol)
    rep.compare("antipode-inverse-w-inverse-dagger", dag(Sinv(w_inv)), S(w_dag_inv), tol)
    rep.compare("antipode-inverse-w-inverse-tilde", Sinv(w_inv), St_inv(w_inv), tol)
    for label, a in _basis(H):
        rhs1 = Sinv(w) * St_inv(a) * Sinv(w_inv)
        rhs2 = St_inv(w) * St_inv(a) * St_inv(w_inv)
        rep.compare(f"antipode-inverse-split[{label}]", Sinv(a), rhs1, tol)
        rep.compare(f"antipode-inverse-split-tilde[{label}]", Sinv(a), rhs2, tol)
    for j, z in enumerate(center_basis(H, tol)):
        rep.compare(f"central-inverse-antipodes[{j}]", Sinv(z), St_inv(z), tol)

    rep.compare("c-both-orders", c, wb * w_inv, tol)
    rep.compare("c-central", *_commutator_sides(c), tol)

    rep.compare("alpha-omega-dagger", dag(a_om), Sinv(beta) * Sinv(wb), tol)
    rep.compare("beta-omega-dagger", dag(b_om), Sinv(wb_inv) * Sinv(alpha), tol)
    rep.compare("alpha-omega-bar-dagger", dag(a_omd), Sinv(beta) * Sinv(w), tol)
    rep.compare("beta-omega-bar-dagger", dag(b_omd), Sinv(w_inv) * Sinv(alpha), tol)

    rep.compare("w-dagger", w_dag, Sinv(wb), tol)
    rep.compare("w-bar-dagger", dag(wb), Sinv(w), tol)
    rep.compare("c-dagger", dag(c), Sinv(invert(c)), tol)
    rep.compare("w-bar-form", wb,
                contract(apply_leg(H.antipode.compose(St_inv_map), 1, apply_leg(H.antipode, 2, phi_inv)),
                         [1, S(dag(a_om)), 2, alpha, 3]), tol)
    rep.compare("w-bar-inverse-form", wb_inv,
                contract(apply_leg(H.antipode.compose(St_inv_map), 3, apply_leg(H.antipode, 2, phi_inv)),
                         [1, beta, 2, S(dag(b_om)), 3]), tol)

    rng = np.random.default_rng(seed)
    F = random_twist(H, rng)
    G = TwistData(dag(F.inverse) * om.element, om.inverse * dag(F.element))
    cop_F = twisted_coproduct(H, F)
    cop_G = twisted_coproduct(H, G)
    D = st.dagger.matrix
    # Δ_F(a)† = Δ_G(a†) as matrices: kron(D, D) conj(Δ_F) = Δ_G D
    rep.compare("twisted-coproduct-dagger", np.kron(D, D) @ np.conj(cop_F), cop_G @ D, tol)
    rep.compare("twisted-coassociator-dagger", dag(invert(twisted_coassociator(H, F))),
                twisted_coassociator(H, G), tol)
    rep.compare("twisted-alpha-dagger", dag(twisted_alpha(H, F)),
                Sinv(twisted_beta(H, G)) * Sinv(w), tol)
    rep.compare("twisted-beta-dagger", dag(twisted_beta(H, F)),
                Sinv(w_inv) * Sinv(twisted_alpha(H, G)), tol)

    HF = twist_structure(H, F)
    stF = star_twist(H, st, F)
    wF, _ = compute_w(HF, stF, tol)
    rep.compare("w-twist-invariant", wF, w, tol)

    zs = center_basis(H, tol)
    z = H.one() + H.el(sum(0.3 * (rng.normal() + 1j * rng.normal()) * b.coeffs for b in zs))
    C = central_compatible_twist(H, z)
    # the central element with α_C = zC α, β_C = zC^{-1} β
    try:
        zC = antipode_equivalence_v(H, H.antipode, twisted_alpha(H, C), twisted_beta(H, C), tol)
        wC, _ = compute_w(H, StarData(st.dagger, om * C), tol)
        rep.compare("w-compatible-rescaling", wC, zC * w, tol)
    except StructureError:
        rep.flag("w-compatible-rescaling", False)
    return rep


__all__ = [
    "FormulaMismatch",
    "OperatorSet",
    "center_basis",
    "compute_operators",
    "compute_w",
    "compute_w_bar",
    "verify_operator_ledger",
]
