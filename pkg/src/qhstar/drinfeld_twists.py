"""The Drinfeld twist ``F_δ``, the second twist ``F_0``, and how they behave under † and twisting.

Twisting by ``F_δ`` turns ``Δ`` into the antipode-conjugated coproduct
``Δ'(a) = (S⊗S)Δ^T(S^{-1}(a))``; ``F_0`` does the same with ``S`` and ``S^{-1}``
exchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qha_structures import (
    CheckReport,
    QuasiHopfData,
    antipode_equivalence_v,
    StructureError,
    check_antipode,
    check_qba,
    flip_matrix,
    kron_maps,
)
from .tensor_core import (
    DEFAULT_TOL,
    LinearMapData,
    TensorElement,
    ToleranceConfig,
    contract,
    embed_legs,
    mchain,
    outer,
    permute_legs,
)
from .twist_calculus import TwistData, random_twist, twist_structure, structure_report


class VariantMismatch(StructureError):
    """Two displayed expressions for the same object disagree."""


class NotInverse(StructureError):
    """The closed-form inverse of ``F_δ`` is not its inverse."""


# -- the primed and zero structures ---------------------------------------------

def _swapped_coproduct(H: QuasiHopfData, outer_map: LinearMapData, inner_map: LinearMapData) -> LinearMapData:
    """``(f⊗f)Δ^T(g(a))``."""
    n = H.dim
    return LinearMapData(kron_maps(outer_map, outer_map).matrix @ flip_matrix(n)
                         @ H.coproduct.matrix @ inner_map.matrix)


def primed_coproduct(H: QuasiHopfData) -> QuasiHopfData:
    """``(Δ', ε, (S⊗S⊗S)Φ_{321}, S, S(β), S(α))``."""
    return H.replace(
        coproduct=_swapped_coproduct(H, H.antipode, H.antipode_inv),
        coassociator=H.S(permute_legs(H.coassociator, (3, 2, 1))),
        alpha=H.S(H.beta),
        beta=H.S(H.alpha),
    )


def zero_coproduct(H: QuasiHopfData) -> QuasiHopfData:
    """``(Δ_0, ε, (S^{-1}⊗S^{-1}⊗S^{-1})Φ_{321}, S, S^{-1}(β), S^{-1}(α))``."""
    return H.replace(
        coproduct=_swapped_coproduct(H, H.antipode_inv, H.antipode),
        coassociator=H.Sinv(permute_legs(H.coassociator, (3, 2, 1))),
        alpha=H.Sinv(H.beta),
        beta=H.Sinv(H.alpha),
    )


def _ss_coproduct_op(H: QuasiHopfData) -> LinearMapData:
    """``a -> (S⊗S)Δ^T(a)``."""
    n = H.dim
    return LinearMapData(kron_maps(H.antipode, H.antipode).matrix @ flip_matrix(n) @ H.coproduct.matrix)


# -- γ and γ̄ -----------------------------------------------------------------

def gamma_ingredients(H: QuasiHopfData) -> tuple[TensorElement, TensorElement]:
    """The two four-leg tensors from which ``γ`` is built."""
    phi, phi_inv = H.coassociator, H.phi_inv
    return (embed_legs(phi_inv, [1, 2, 3], 4) * H.delta(phi, 1),
            embed_legs(phi, [2, 3, 4], 4) * H.delta(phi_inv, 3))


def gamma_bar_ingredients(H: QuasiHopfData) -> tuple[TensorElement, TensorElement]:
    phi, phi_inv = H.coassociator, H.phi_inv
    return (H.delta(phi_inv, 1) * embed_legs(phi, [1, 2, 3], 4),
            H.delta(phi, 3) * embed_legs(phi_inv, [2, 3, 4], 4))


def _gamma_from(H: QuasiHopfData, t: TensorElement) -> TensorElement:
    """``S(B)αC ⊗ S(A)αD`` for ``t = A⊗B⊗C⊗D``."""
    return contract(H.S(H.S(t, 1), 2), [2, H.alpha, 3], [1, H.alpha, 4])


def _gamma_bar_from(H: QuasiHopfData, t: TensorElement) -> TensorElement:
    """``Āβ S(D̄) ⊗ B̄β S(C̄)``."""
    return contract(H.S(H.S(t, 3), 4), [1, H.beta, 4], [2, H.beta, 3])


def gamma_report(H: QuasiHopfData, tol: ToleranceConfig = DEFAULT_TOL
                 ) -> tuple[TensorElement, TensorElement, CheckReport]:
    rep = CheckReport("gamma")
    g1, g2 = (_gamma_from(H, t) for t in gamma_ingredients(H))
    b1, b2 = (_gamma_bar_from(H, t) for t in gamma_bar_ingredients(H))
    rep.compare("gamma-variants", g1, g2, tol)
    rep.compare("gamma-bar-variants", b1, b2, tol)
    return g1, b1, rep


def compute_gamma(H: QuasiHopfData, tol: ToleranceConfig = DEFAULT_TOL) -> TensorElement:
    g, _, rep = gamma_report(H, tol)
    if not rep["gamma-variants"].passed:
        raise VariantMismatch("the two ingredient tensors give different γ", rep)
    return g


def compute_gamma_bar(H: QuasiHopfData, tol: ToleranceConfig = DEFAULT_TOL) -> TensorElement:
    _, gb, rep = gamma_report(H, tol)
    if not rep["gamma-bar-variants"].passed:
        raise VariantMismatch("the two ingredient tensors give different γ̄", rep)
    return gb


# -- F_δ and F_0 -----------------------------------------------------------------

def _twist_forms(H: QuasiHopfData, gamma: TensorElement, gamma_bar: TensorElement
                 ) -> dict[str, TensorElement]:
    phi, phi_inv = H.coassociator, H.phi_inv
    D = H.coproduct
    Dp = primed_coproduct(H).coproduct
    SSD = _ss_coproduct_op(H)
    alpha, beta = H.alpha, H.beta
    return {
        "F": mchain(contract(H.S(phi, 3), [1], [2, beta, 3]), (1, SSD), gamma, (2, D)),
        "F-second": mchain(contract(H.S(phi_inv, 2), [1, beta, 2], [3]), (1, Dp), gamma, (2, D)),
        "F-inv": mchain(contract(H.S(phi_inv, 2), [1], [2, alpha, 3]), (1, D), gamma_bar, (2, Dp)),
        "F-inv-second": mchain(contract(H.S(phi, 1), [1, alpha, 2], [3]), (1, D), gamma_bar, (2, SSD)),
    }


@dataclass(frozen=True, eq=False)
class DrinfeldSet:
    gamma: TensorElement
    gamma_bar: TensorElement
    F_delta: TwistData
    F_zero: TwistData


def second_from_first(H: QuasiHopfData, F: TwistData) -> TwistData:
    """``F_0 = (S^{-1}⊗S^{-1})F_δ^T`` together with its inverse."""
    return TwistData(H.Sinv(F.element.T), H.Sinv(F.inverse.T))


def drinfeld_checks(H: QuasiHopfData, tol: ToleranceConfig = DEFAULT_TOL
                    ) -> tuple[DrinfeldSet, CheckReport]:
    """Compute ``γ, γ̄, F_δ, F_0`` and every self-consistency entry."""
    gamma, gamma_bar, rep = gamma_report(H, tol)
    forms = _twist_forms(H, gamma, gamma_bar)
    F, F_inv = forms["F"], forms["F-inv"]
    rep.compare("twist-forms", forms["F-second"], F, tol)
    rep.compare("twist-inverse-forms", forms["F-inv-second"], F_inv, tol)
    rep.compare("twist-times-inverse", F * F_inv, H.one(2), tol)
    rep.compare("inverse-times-twist", F_inv * F, H.one(2), tol)
    # (ε⊗id)F_δ = ε(α)·1, so the twist is normalised only when ε(α) = 1
    rep.compare("twist-counital", H.eps(F, 1), H.one(), tol)
    Fd = TwistData(F, F_inv)
    rep.extend(structure_report(twist_structure(H, Fd), primed_coproduct(H), tol), "primed-")
    F0 = second_from_first(H, Fd)
    rep.extend(structure_report(twist_structure(H, F0), zero_coproduct(H), tol), "zero-")
    return DrinfeldSet(gamma, gamma_bar, Fd, F0), rep


def _raise_on(rep: CheckReport, names: tuple[str, ...], exc: type, what: str) -> None:
    bad = [e.name for e in rep.failed() if e.name in names or any(e.name.startswith(p) for p in names)]
    if bad:
        raise exc(f"{what}: " + ", ".join(bad), rep)


def drinfeld_set(H: QuasiHopfData, tol: ToleranceConfig = DEFAULT_TOL) -> DrinfeldSet:
    """All Drinfeld data; raises VariantMismatch or NotInverse on inconsistency."""
    ds, rep = drinfeld_checks(H, tol)
    _raise_on(rep, ("gamma-variants", "gamma-bar-variants", "twist-forms", "twist-inverse-forms"),
              VariantMismatch, "displayed forms disagree")
    _raise_on(rep, ("twist-times-inverse", "inverse-times-twist"), NotInverse, "F_δ and its inverse")
    _raise_on(rep, ("twist-counital", "primed-", "zero-"), VariantMismatch, "twisting does not reproduce the target")
    return ds


def drinfeld_twist(H: QuasiHopfData, tol: ToleranceConfig = DEFAULT_TOL) -> TwistData:
    return drinfeld_set(H, tol).F_delta


def second_drinfeld_twist(H: QuasiHopfData, tol: ToleranceConfig = DEFAULT_TOL) -> TwistData:
    return drinfeld_set(H, tol).F_zero


# -- behaviour under twisting ------------------------------------------------------

def verify_twist_law(H: QuasiHopfData, G: TwistData | TensorElement,
                     ds: DrinfeldSet | None = None, tol: ToleranceConfig = DEFAULT_TOL) -> CheckReport:
    """``(F_δ^{-1})_G = G F_δ^{-1} (S⊗S)G^T`` and the matching law for ``γ̄``."""
    G = TwistData.of(G, tol)
    if ds is None:
        ds = drinfeld_set(H, tol)
    HG = twist_structure(H, G)
    dsG, _ = drinfeld_checks(HG, tol)
    rep = CheckReport("twist-law")
    rep.compare("inverse-twist-law", dsG.F_delta.inverse,
                G.element * ds.F_delta.inverse * H.S(G.element.T), tol)
    gb = mchain(G.element, (1, H.coproduct), ds.gamma_bar, (2, _ss_coproduct_op(H)))
    rep.compare("gamma-bar-twist-law", dsG.gamma_bar, G.element * gb * H.S(G.element.T), tol)
    return rep


# -- conjugation ---------------------------------------------------------------------

def _conjugation_entries(H: QuasiHopfData, st, w: TensorElement, w_inv: TensorElement,
                         ds: DrinfeldSet, rep: CheckReport, prefix: str,
                         tol: ToleranceConfig) -> None:
    dag = st.dag
    om = st.omega
    Sinv, S = H.Sinv, H.S
    sw, sw_inv = Sinv(w), Sinv(w_inv)
    W, W_inv = outer(sw, sw), outer(sw_inv, sw_inv)
    Fd, F0 = ds.F_delta, ds.F_zero
    SinvD_op = LinearMapData(kron_maps(H.antipode_inv, H.antipode_inv).matrix
                             @ flip_matrix(H.dim) @ H.coproduct.matrix)

    gamma_dag = dag(ds.gamma)
    x = Sinv(ds.gamma_bar.T)
    core = mchain(om.element, (2, H.coproduct), x, (1, SinvD_op))
    rep.compare(prefix + "gamma-dagger", gamma_dag, om.element * core * Sinv(om.element.T) * W, tol)
    HO = twist_structure(H, om)
    gb_om = compute_gamma_bar(HO, tol)
    rep.compare(prefix + "gamma-dagger-twisted", gamma_dag, Sinv(gb_om.T) * W, tol)
    gb_law = mchain(om.element, (1, H.coproduct), ds.gamma_bar, (2, _ss_coproduct_op(H)))
    rep.compare(prefix + "gamma-bar-twisted", gb_om, om.element * gb_law * S(om.element.T), tol)

    Fd_dag = dag(Fd.element)
    rep.compare(prefix + "twist-dagger", Fd_dag,
                om.element * H.delta(sw_inv) * F0.inverse * Sinv(om.element.T) * W, tol)
    rep.compare(prefix + "second-twist-dagger", dag(F0.element),
                om.element * H.delta(w_inv) * Fd.inverse * S(om.element.T) * outer(w, w), tol)
    rep.compare(prefix + "commuting-operator",
                om.inverse * Fd_dag * W_inv * Sinv(om.inverse.T) * F0.element * H.delta(sw), H.one(2), tol)

    omega_p = dag(Fd.inverse) * om.element * Fd.inverse
    rep.compare(prefix + "primed-canonical",
                omega_p, W_inv * Sinv(om.inverse.T) * F0.element * H.delta(sw) * Fd.inverse, tol)
    omega_0 = dag(F0.inverse) * om.element * F0.inverse
    rep.compare(prefix + "zero-canonical",
                omega_0, outer(w_inv, w_inv) * S(om.inverse.T) * Fd.element * H.delta(w) * F0.inverse, tol)


def verify_conjugation_ledger(H: QuasiHopfData, st, ops, ds: DrinfeldSet | None = None,
                              tol: ToleranceConfig = DEFAULT_TOL) -> CheckReport:
    """Conjugation identities for ``γ``, ``F_δ``, ``F_0`` and the new canonical elements.

    Every entry is evaluated with ``(Ω, w)`` and again, prefixed ``conj:``,
    with ``(Ω†, w̄)``.
    """
    from .star_structures import StarData, check_star_qha

    if ds is None:
        ds = drinfeld_set(H, tol)
    rep = CheckReport("drinfeld-star")
    _conjugation_entries(H, st, ops.w, ops.w_inv, ds, rep, "", tol)
    st_bar = StarData(st.dagger, st.omega_dag)
    _conjugation_entries(H, st_bar, ops.w_bar, ops.w_bar_inv, ds, rep, "conj:", tol)

    dag = st.dag
    om, omd = st.omega, st.omega_dag
    Fd = ds.F_delta
    c_inv = ops.w_bar_inv * ops.w
    lhs = om.inverse * omd.element * H.delta(ops.w_bar_inv) * Fd.inverse * H.S(dag(om.element.T))
    rhs = H.delta(ops.w_inv) * Fd.inverse * H.S(om.element.T) * outer(c_inv, c_inv)
    rep.compare("canonical-ratio-relation", lhs, rhs, tol)
    q = om.inverse * omd.element
    rep.compare("canonical-ratio-cocycle", q * Fd.inverse * H.S(q.T) * Fd.element,
                outer(c_inv, c_inv) * H.delta(ops.c), tol)

    # the twisted structures are *-quasi-Hopf with the new canonical elements
    Hp = twist_structure(H, Fd)
    omega_p = TwistData(dag(Fd.inverse) * om.element * Fd.inverse, Fd.element * om.inverse * dag(Fd.element))
    rep.extend(check_star_qha(Hp, StarData(st.dagger, omega_p), tol), "primed-")
    return rep


@dataclass(frozen=True)
class PlacementVerdict:
    """Residuals of the commuting operator with ``W^{-1}`` and with ``W``."""

    residual_inverse: float
    residual_direct: float
    threshold: float

    @property
    def verdict(self) -> str:
        inv_ok = self.residual_inverse <= self.threshold
        dir_ok = self.residual_direct <= self.threshold
        if inv_ok and dir_ok:
            return "both"
        if inv_ok:
            return "W^-1"
        if dir_ok:
            return "W"
        return "neither"

    def line(self) -> str:
        return (f"placement W^-1 residual={self.residual_inverse:.3e} "
                f"W residual={self.residual_direct:.3e} threshold={self.threshold:.3e} "
                f"verdict={self.verdict}")


def w_placement_verdict(H: QuasiHopfData, st, ops, ds: DrinfeldSet | None = None,
                        tol: ToleranceConfig = DEFAULT_TOL) -> PlacementVerdict:
    """Evaluate ``Ω^{-1}F_δ† X (S^{-1}⊗S^{-1})(Ω^T)^{-1} F_0 Δ(S^{-1}(w))`` for X = W^{-1} and X = W."""
    if ds is None:
        ds = drinfeld_set(H, tol)
    om = st.omega
    head = om.inverse * st.dag(ds.F_delta.element)
    tail = H.Sinv(om.inverse.T) * ds.F_zero.element * H.delta(H.Sinv(ops.w))
    one = H.one(2)
    r_inv, thr, _ = tol.compare(head * ops.W_inv * tail, one)
    r_dir, _, _ = tol.compare(head * ops.W * tail, one)
    return PlacementVerdict(r_inv, r_dir, thr)


def primed_canonical_variants(H: QuasiHopfData, st, ops, ds: DrinfeldSet | None = None,
                              tol: ToleranceConfig = DEFAULT_TOL) -> dict[str, float]:
    """Residuals of the two closed forms of ``(F_δ†)^{-1}ΩF_δ^{-1}`` (prefactor W and W^{-1})."""
    if ds is None:
        ds = drinfeld_set(H, tol)
    om = st.omega
    Fd, F0 = ds.F_delta, ds.F_zero
    direct = st.dag(Fd.inverse) * om.element * Fd.inverse
    body = H.Sinv(om.inverse.T) * F0.element * H.delta(H.Sinv(ops.w)) * Fd.inverse
    return {
        "W^-1": tol.compare(direct, ops.W_inv * body)[0],
        "W": tol.compare(direct, ops.W * body)[0],
    }


def gamma_dagger_variants(H: QuasiHopfData, st, ops, ds: DrinfeldSet | None = None,
                          tol: ToleranceConfig = DEFAULT_TOL) -> dict[str, float]:
    """Residuals of ``γ†`` against the sum with ``Δ`` fed the second leg of Ω and with ``Δ`` fed the first."""
    if ds is None:
        ds = drinfeld_set(H, tol)
    om = st.omega.element
    sw = H.Sinv(ops.w)
    W = outer(sw, sw)
    x = H.Sinv(ds.gamma_bar.T)
    op = LinearMapData(kron_maps(H.antipode_inv, H.antipode_inv).matrix
                       @ flip_matrix(H.dim) @ H.coproduct.matrix)
    target = st.dag(ds.gamma)
    tail = H.Sinv(om.T) * W
    return {
        "second-leg": tol.compare(target, om * mchain(om, (2, H.coproduct), x, (1, op)) * tail)[0],
        "first-leg": tol.compare(target, om * mchain(om, (1, H.coproduct), x, (2, op)) * tail)[0],
    }


def primed_mediating_element(H: QuasiHopfData, ds: DrinfeldSet | None = None,
                             tol: ToleranceConfig = DEFAULT_TOL) -> TensorElement:
    """The ``v`` with ``α_{F_δ} = v S(β)`` and ``β_{F_δ} = S(α) v^{-1}``.

    It is the unit when ``ε(α) = 1``; otherwise it measures how far the
    twisted antipode triple is from the primed one.
    """
    if ds is None:
        ds, _ = drinfeld_checks(H, tol)
    HF = twist_structure(H, ds.F_delta)
    return antipode_equivalence_v(primed_coproduct(H), HF.antipode, HF.alpha, HF.beta, tol)


def random_twist_laws(H: QuasiHopfData, count: int, seed: int = 0,
                      tol: ToleranceConfig = DEFAULT_TOL) -> list[CheckReport]:
    rng = np.random.default_rng(seed)
    ds = drinfeld_set(H, tol)
    return [verify_twist_law(H, random_twist(H, rng), ds, tol) for _ in range(count)]


def drinfeld_structures_pass(H: QuasiHopfData, tol: ToleranceConfig = DEFAULT_TOL) -> CheckReport:
    """Axiom suites on the primed and zero structures."""
    rep = CheckReport("drinfeld-structures")
    for label, K in (("primed", primed_coproduct(H)), ("zero", zero_coproduct(H))):
        rep.extend(check_qba(K, tol), f"{label}.")
        rep.extend(check_antipode(K, tol), f"{label}.")
    return rep


__all__ = [
    "DrinfeldSet",
    "NotInverse",
    "PlacementVerdict",
    "VariantMismatch",
    "compute_gamma",
    "compute_gamma_bar",
    "drinfeld_checks",
    "drinfeld_set",
    "drinfeld_structures_pass",
    "drinfeld_twist",
    "gamma_dagger_variants",
    "primed_canonical_variants",
    "primed_mediating_element",
    "primed_coproduct",
    "random_twist_laws",
    "second_drinfeld_twist",
    "verify_conjugation_ledger",
    "verify_twist_law",
    "w_placement_verdict",
    "zero_coproduct",
]
