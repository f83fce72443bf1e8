"""Conjugations, *-quasi-Hopf axioms, the *-canonical element, and the tilde structure."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qha_structures import CheckReport, QuasiHopfData, StructureError, kron_maps
from .tensor_core import (
    DEFAULT_TOL,
    LinearMapData,
    TensorElement,
    ToleranceConfig,
    apply_each,
    commutator_residual,
    invert,
)
from .twist_calculus import (
    TwistData,
    is_compatible_twist,
    twist_structure,
    twisted_alpha,
    twisted_beta,
    twisted_coassociator,
    twisted_coproduct,
)


class NotCanonical(StructureError):
    """A candidate element is not a *-canonical element."""


@dataclass(frozen=True, eq=False)
class StarData:
    """Antilinear conjugation ``a -> D·conj(a)`` and the *-canonical element Ω."""

    dagger: LinearMapData
    omega: TwistData

    def __post_init__(self):
        if not self.dagger.antilinear:
            raise StructureError("the conjugation must be antilinear")

    def dag(self, a: TensorElement) -> TensorElement:
        """``a†``, with ``(a⊗b)† = a†⊗b†`` on tensors."""
        return apply_each(self.dagger, a)

    def with_omega(self, omega: "TwistData | TensorElement") -> "StarData":
        return StarData(self.dagger, TwistData.of(omega))

    @property
    def omega_dag(self) -> TwistData:
        """``Ω†`` with its inverse."""
        return TwistData(self.dag(self.omega.element), self.dag(self.omega.inverse))


def dagger_coproduct(H: QuasiHopfData, st: StarData) -> np.ndarray:
    """Matrix of ``a -> Δ(a†)†``."""
    D = st.dagger.matrix
    return np.kron(D, D) @ np.conj(H.coproduct.matrix) @ np.conj(D)


def tilde_antipode(H: QuasiHopfData, st: StarData) -> LinearMapData:
    """``S̃(a) = S^{-1}(a†)†`` as a linear map."""
    D = st.dagger.matrix
    return LinearMapData(D @ np.conj(H.antipode_inv.matrix) @ np.conj(D))


def _is_trivial(st: StarData, H: QuasiHopfData, tol: ToleranceConfig) -> bool:
    return tol.compare(st.omega.element, H.one(2))[2]


def check_star_algebra(H: QuasiHopfData, st: StarData, tol: ToleranceConfig = DEFAULT_TOL) -> CheckReport:
    """Conjugation axioms; the coproduct condition applies only when Ω is trivial."""
    rep = CheckReport("star")
    n = H.dim
    D = st.dagger.matrix
    m = H.algebra.mult
    rep.compare("involution", D @ np.conj(D), np.eye(n), tol)
    # (e_i e_j)† = e_j† e_i†
    lhs = np.einsum("ijk,xk->ijx", np.conj(m), D)
    rhs = np.einsum("pj,qi,pqx->ijx", D, D, m)
    rep.compare("anti-homomorphism", lhs, rhs, tol)
    e = H.counit.matrix[0]
    rep.compare("counit-conjugate", e @ D, np.conj(e), tol)
    if _is_trivial(st, H, tol):
        rep.compare("coproduct-conjugate", dagger_coproduct(H, st), H.coproduct.matrix, tol)
    return rep


def check_star_qha(H: QuasiHopfData, st: StarData, tol: ToleranceConfig = DEFAULT_TOL) -> CheckReport:
    """*-QHA conditions for Ω plus quasi-self-adjointness of ``Ω^{-1}Ω†``."""
    rep = CheckReport("star")
    core = check_star_algebra(H, st, tol)
    for e in core.entries:
        if e.name != "coproduct-conjugate":
            rep.entries.append(e)
    n = H.dim
    om = st.omega
    twisted = twisted_coproduct(H, om).reshape(n, n, n)
    tilde = dagger_coproduct(H, st).reshape(n, n, n)
    for i in range(n):
        label = H.algebra.basis_labels[i]
        rep.compare(f"coproduct-conjugate[{label}]", tilde[:, :, i], twisted[:, :, i], tol)
    lhs = st.dag(H.phi_inv)
    rhs = twisted_coassociator(H, om)
    rep.compare("coassociator-conjugate", lhs, rhs, tol)
    q = om.inverse * st.dag(om.element)
    qi = invert(q)
    for i in range(n):
        label = H.algebra.basis_labels[i]
        da = H.delta(H.basis(i))
        rep.compare(f"quasi-self-adjoint[{label}]", q * da * qi, da, tol)
    return rep


def tilde_structure(H: QuasiHopfData, st: StarData) -> QuasiHopfData:
    """``(Δ̃, ε, (Φ†)^{-1}, S̃, S^{-1}(β)†, S^{-1}(α)†)`` with ``Δ̃(a) = Δ(a†)†``."""
    return H.replace(
        coproduct=LinearMapData(dagger_coproduct(H, st)),
        coassociator=st.dag(H.phi_inv),
        antipode=tilde_antipode(H, st),
        alpha=st.dag(H.Sinv(H.beta)),
        beta=st.dag(H.Sinv(H.alpha)),
    )


def tilde_star(st: StarData) -> StarData:
    """The conjugation data for the tilde structure: same †, canonical element ``Ω^{-1}``."""
    return StarData(st.dagger, st.omega.inv())


def star_twist(H: QuasiHopfData, st: StarData, F: "TwistData | TensorElement",
               verify: bool = False, tol: ToleranceConfig = DEFAULT_TOL) -> StarData:
    """Canonical element ``(F†)^{-1} Ω F^{-1}`` for the structure twisted by ``F``."""
    F = TwistData.of(F, tol)
    Fd = st.dag(F.element)
    Fd_inv = st.dag(F.inverse)
    om = st.omega
    new = StarData(st.dagger, TwistData(Fd_inv * om.element * F.inverse, F.element * om.inverse * Fd))
    if verify:
        rep = check_star_qha(twist_structure(H, F), new, tol)
        if not rep.overall:
            raise NotCanonical("twisted canonical element fails: "
                               + ", ".join(e.name for e in rep.failed()))
    return new


def opposite_star(H: QuasiHopfData, st: StarData) -> StarData:
    """Canonical element ``Ω^T`` for the co-opposite structure."""
    return StarData(st.dagger, st.omega.T)


def canonical_element_factor(H: QuasiHopfData, st: StarData, gamma: "TwistData | TensorElement",
                             tol: ToleranceConfig = DEFAULT_TOL) -> TwistData:
    """The compatible twist ``C = Ω^{-1}Γ``; raises NotCanonical when it is not compatible.

    Also confirms that ``Ω^{-1}Ω†`` is compatible, i.e. that ``Ω†`` is canonical too.
    """
    gamma = TwistData.of(gamma, tol)
    om = st.omega
    C = TwistData(om.inverse * gamma.element, gamma.inverse * om.element)
    ok, rep = is_compatible_twist(C, H, tol)
    if not ok:
        raise NotCanonical("Ω^{-1}Γ is not a compatible twist (residuals "
                           + ", ".join(f"{e.name}={e.residual:.2e}" for e in rep.failed()) + ")")
    conj = TwistData(om.inverse * st.dag(om.element), st.dag(om.inverse) * om.element)
    ok, rep = is_compatible_twist(conj, H, tol)
    if not ok:
        raise NotCanonical("Ω^{-1}Ω† is not compatible; the input is not a *-QHA")
    return C


def star_compatibility_residual(H: QuasiHopfData, st: StarData) -> tuple[float, float]:
    """Residual of ``S(a)† = S^{-1}(a†)`` over the basis, and the scale it is measured at."""
    D = st.dagger.matrix
    lhs = D @ np.conj(H.antipode.matrix)
    rhs = H.antipode_inv.matrix @ D
    return float(np.max(np.abs(lhs - rhs))), float(max(np.max(np.abs(lhs)), np.max(np.abs(rhs))))


def is_star_compatible_antipode(H: QuasiHopfData, st: StarData, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    res, scale = star_compatibility_residual(H, st)
    return res <= tol.threshold(scale)


def twisted_canonicals(H: QuasiHopfData, F: TwistData) -> tuple[TensorElement, TensorElement]:
    return twisted_alpha(H, F), twisted_beta(H, F)


def is_self_conjugate(st: StarData, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    return tol.compare(st.omega.element, st.dag(st.omega.element))[2]


def central_residual(z: TensorElement) -> float:
    return commutator_residual(z)


__all__ = [
    "NotCanonical",
    "StarData",
    "canonical_element_factor",
    "check_star_algebra",
    "check_star_qha",
    "dagger_coproduct",
    "is_self_conjugate",
    "is_star_compatible_antipode",
    "kron_maps",
    "opposite_star",
    "star_compatibility_residual",
    "star_twist",
    "tilde_antipode",
    "tilde_star",
    "tilde_structure",
    "twisted_canonicals",
]
