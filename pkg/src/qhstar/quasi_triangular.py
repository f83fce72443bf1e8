"""R-matrices: axioms, the element ``u``, conjugated R-matrices and the type I/II classification."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING

import numpy as np

from .qha_structures import (
    CheckReport,
    QuasiHopfData,
    StructureError,
    check_antipode,
    check_qba,
    conjugation_matrix,
    opposite,
)
from .tensor_core import (
    DEFAULT_TOL,
    TensorElement,
    ToleranceConfig,
    apply_leg,
    commutator_residual,
    contract,
    embed_legs,
    invert,
    permute_legs,
)
from .twist_calculus import (
    TwistData,
    central_compatible_twist,
    is_compatible_twist,
    twist_structure,
    twisted_alpha,
    twisted_beta,
)

if TYPE_CHECKING:
    from .canonical_operators import OperatorSet
    from .star_structures import StarData


class VariantMismatch(StructureError):
    """Two closed forms that must agree do not."""


class RMatrixData(TwistData):
    """An invertible order-2 element ``R`` stored with ``R^{-1}``."""

    @classmethod
    def of(cls, R, tol: ToleranceConfig = DEFAULT_TOL) -> "RMatrixData":
        if isinstance(R, TwistData):
            return cls(R.element, R.inverse)
        return cls(R, invert(R, tol))

    @property
    def r(self) -> TensorElement:
        return self.element

    @property
    def r_inverse(self) -> TensorElement:
        return self.inverse

    @property
    def T(self) -> "RMatrixData":
        return RMatrixData(self.element.T, self.inverse.T)


# -- leg permutations ---------------------------------------------------------
#
# "slot": factor number k of Φ = X_1 ⊗ X_2 ⊗ X_3 lands in slot s.  Two readings
# of a subscript σ = (σ1 σ2 σ3) exist; the quasi-YBE consistency check decides.

def _inverse_perm(sigma: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(sigma)
    for s, t in enumerate(sigma, start=1):
        inv[t - 1] = s
    return tuple(inv)


def leg_permutation(a: TensorElement, sigma: tuple[int, ...], convention: str = "slot") -> TensorElement:
    """``a_σ``: with ``"slot"`` slot s holds factor σ(s); with ``"factor"`` factor s goes to slot σ(s)."""
    if convention == "slot":
        return permute_legs(a, sigma)
    if convention == "factor":
        return permute_legs(a, _inverse_perm(sigma))
    raise ValueError(f"unknown convention {convention!r}")


DEFAULT_CONVENTION = "slot"


def hexagon_sides(H: QuasiHopfData, R: RMatrixData, convention: str = DEFAULT_CONVENTION
                  ) -> dict[str, tuple[TensorElement, TensorElement]]:
    phi, phi_inv = H.coassociator, H.phi_inv
    P = lambda a, s: leg_permutation(a, s, convention)  # noqa: E731
    R12 = embed_legs(R.element, [1, 2], 3)
    R13 = embed_legs(R.element, [1, 3], 3)
    R23 = embed_legs(R.element, [2, 3], 3)
    left = P(phi_inv, (2, 3, 1)) * R13 * P(phi, (1, 3, 2)) * R23 * phi_inv
    right = P(phi, (3, 1, 2)) * R13 * P(phi_inv, (2, 1, 3)) * R12 * phi
    return {
        "hexagon-left": (H.delta(R.element, 1), left),
        "hexagon-right": (H.delta(R.element, 2), right),
    }


def quasi_ybe_sides(H: QuasiHopfData, R: RMatrixData, convention: str = DEFAULT_CONVENTION
                    ) -> dict[str, tuple[TensorElement, TensorElement]]:
    """Intertwining applied to the hexagon right-hand sides.

    ``R_12 (Δ⊗1)R = (Δ^T⊗1)R R_12``; substituting the hexagon expression on
    both sides gives a relation between R and Φ alone.
    """
    sides = hexagon_sides(H, R, convention)
    left = sides["hexagon-left"][1]
    right = sides["hexagon-right"][1]
    R12 = embed_legs(R.element, [1, 2], 3)
    R23 = embed_legs(R.element, [2, 3], 3)
    return {
        "quasi-ybe-left": (R12 * left, permute_legs(left, (2, 1, 3)) * R12),
        "quasi-ybe-right": (R23 * right, permute_legs(right, (1, 3, 2)) * R23),
    }


def check_quasi_triangular(H: QuasiHopfData, R: RMatrixData, tol: ToleranceConfig = DEFAULT_TOL,
                           convention: str = DEFAULT_CONVENTION) -> CheckReport:
    rep = CheckReport("qt")
    rep.compare("inverse", R.element * R.inverse, H.one(2), tol)
    Rt = R.element
    for i in range(H.dim):
        a = H.basis(i)
        rep.compare(f"intertwining[{H.algebra.basis_labels[i]}]",
                    H.delta_op(a) * Rt, Rt * H.delta(a), tol)
    for name, (lhs, rhs) in hexagon_sides(H, R, convention).items():
        rep.compare(name, lhs, rhs, tol)
    rep.compare("counit-left", H.eps(Rt, 1), H.one(), tol)
    rep.compare("counit-right", H.eps(Rt, 2), H.one(), tol)
    for name, (lhs, rhs) in quasi_ybe_sides(H, R, convention).items():
        rep.compare(name, lhs, rhs, tol)
    return rep


@dataclass(frozen=True)
class ConventionVerdict:
    chosen: str
    residuals: dict[str, float]


def permutation_convention_verdict(H: QuasiHopfData, R: RMatrixData,
                                   tol: ToleranceConfig = DEFAULT_TOL) -> ConventionVerdict:
    """Evaluate the hexagons and quasi-YBE under both subscript readings."""
    residuals = {}
    passing = []
    for conv in ("slot", "factor"):
        rep = CheckReport("qt")
        for name, (lhs, rhs) in {**hexagon_sides(H, R, conv), **quasi_ybe_sides(H, R, conv)}.items():
            rep.compare(name, lhs, rhs, tol)
        residuals[conv] = rep.max_residual()
        if rep.overall:
            passing.append(conv)
    chosen = passing[0] if len(passing) == 1 else ("both" if passing else "neither")
    return ConventionVerdict(chosen, residuals)


# -- the element u --------------------------------------------------------------

def _u_forms(H: QuasiHopfData, R: RMatrixData) -> dict[str, TensorElement]:
    phi, phi_inv = H.coassociator, H.phi_inv
    S, Sinv = H.antipode, H.antipode_inv
    S2 = S.compose(S)
    a_R, b_R = twisted_alpha(H, R), twisted_beta(H, R)
    return {
        "u": contract(apply_leg(S, 2, apply_leg(S2, 3, phi)), [3, H.S(H.beta), 2, a_R, 1]),
        "u-second": contract(apply_leg(S, 3, apply_leg(Sinv, 1, phi_inv)),
                             [3, a_R, 2, H.Sinv(H.beta), 1]),
        "u-inv": contract(apply_leg(S, 2, apply_leg(S2, 1, phi)), [3, b_R, 2, H.S(H.alpha), 1]),
        "u-inv-second": contract(apply_leg(Sinv, 3, apply_leg(S, 1, phi_inv)),
                                 [3, H.Sinv(H.alpha), 2, b_R, 1]),
    }


def u_report(H: QuasiHopfData, R: RMatrixData, tol: ToleranceConfig = DEFAULT_TOL
             ) -> tuple[TensorElement, TensorElement, CheckReport]:
    f = _u_forms(H, R)
    u, u_inv = f["u"], f["u-inv"]
    rep = CheckReport("u")
    rep.compare("u-forms", f["u-second"], u, tol)
    rep.compare("u-inverse-forms", f["u-inv-second"], u_inv, tol)
    rep.compare("u-times-inverse", u * u_inv, H.one(), tol)
    rep.compare("u-alpha", u * H.Sinv(H.alpha), twisted_alpha(H, R), tol)
    rep.compare("beta-u", twisted_beta(H, R) * u, H.Sinv(H.beta), tol)
    S = H.antipode.matrix
    rep.compare("antipode-squared", S @ S, conjugation_matrix(u, u_inv), tol)
    return u, u_inv, rep


def compute_u(H: QuasiHopfData, R: RMatrixData, tol: ToleranceConfig = DEFAULT_TOL
              ) -> tuple[TensorElement, TensorElement]:
    """``(u, u^{-1})`` with ``S²(a) = u a u^{-1}``; raises VariantMismatch on disagreement."""
    u, u_inv, rep = u_report(H, R, tol)
    if not rep.overall:
        raise VariantMismatch("u fails: " + ", ".join(e.name for e in rep.failed()), rep)
    return u, u_inv


def z_u(H: QuasiHopfData, u: TensorElement) -> TensorElement:
    return u * H.S(u)


# -- conjugation ---------------------------------------------------------------

def r_bar(H: QuasiHopfData, st: "StarData", R: RMatrixData, verify: bool = True,
          tol: ToleranceConfig = DEFAULT_TOL) -> RMatrixData:
    """``(Ω^T)^{-1} (R†)^{-1} Ω``, again an R-matrix for the same structure."""
    om = st.omega
    Rb = RMatrixData(om.inverse.T * st.dag(R.inverse) * om.element,
                     om.inverse * st.dag(R.element) * om.element.T)
    if verify:
        rep = check_quasi_triangular(H, Rb, tol)
        if not rep.overall:
            raise StructureError("conjugated R-matrix fails: "
                                 + ", ".join(e.name for e in rep.failed()), rep)
    return Rb


class QtKind(str, Enum):
    TYPE_I = "TypeI"
    TYPE_II = "TypeII"
    BOTH = "Both"
    NEITHER = "Neither"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class QtClassification:
    kind: QtKind
    residual_I: float
    residual_II: float
    threshold_I: float
    threshold_II: float

    @property
    def ratio(self) -> float:
        """Competing residual over winning residual (inf when the winner is exact)."""
        lo, hi = sorted((self.residual_I, self.residual_II))
        return np.inf if lo == 0 else hi / lo

    def line(self) -> str:
        return (f"{self.kind} residual_I={self.residual_I:.3e} residual_II={self.residual_II:.3e} "
                f"threshold={max(self.threshold_I, self.threshold_II):.3e}")


SEPARATION = 1e3


def classify_star_qt(H: QuasiHopfData, st: "StarData", R: RMatrixData,
                     tol: ToleranceConfig = DEFAULT_TOL) -> QtClassification:
    """Compare ``(R†)^{-1}`` with ``Ω^T R Ω^{-1}`` (type I) and ``Ω^T (R^T)^{-1} Ω^{-1}`` (type II)."""
    om = st.omega
    lhs = st.dag(R.inverse)
    res1, thr1, ok1 = tol.compare(lhs, om.element.T * R.element * om.inverse)
    res2, thr2, ok2 = tol.compare(lhs, om.element.T * R.inverse.T * om.inverse)
    scale = max(lhs.max_norm(), 1.0)
    floor = np.finfo(float).eps * scale
    if ok1 and ok2:
        kind = QtKind.BOTH
    elif ok1 and res2 >= SEPARATION * max(res1, floor):
        kind = QtKind.TYPE_I
    elif ok2 and res1 >= SEPARATION * max(res2, floor):
        kind = QtKind.TYPE_II
    else:
        kind = QtKind.NEITHER
    return QtClassification(kind, res1, res2, thr1, thr2)


def is_qt_compatible(C: TwistData, R: RMatrixData, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """``C^T R C^{-1} = R``."""
    return tol.compare(C.element.T * R.element * C.inverse, R.element)[2]


def verify_qt_star_ledger(H: QuasiHopfData, st: "StarData", R: RMatrixData,
                          ops: "OperatorSet | None" = None, seed: int = 0,
                          tol: ToleranceConfig = DEFAULT_TOL) -> CheckReport:
    """One entry per identity linking ``u``, ``ū``, ``z_u`` with ``w`` and the conjugation."""
    from .canonical_operators import center_basis, compute_operators
    from .star_structures import (
        StarData,
        canonical_element_factor,
        check_star_qha,
        opposite_star,
        tilde_structure,
    )

    kind = classify_star_qt(H, st, R, tol).kind
    if ops is None:
        ops = compute_operators(H, st, tol)
    rep = CheckReport("qt-star")
    dag = st.dag
    om = st.omega
    w, w_inv = ops.w, ops.w_inv
    S, Sinv = H.S, H.Sinv
    u, u_inv = compute_u(H, R, tol)
    Rb = r_bar(H, st, R, True, tol)
    ub, ub_inv = compute_u(H, Rb, tol)
    St_inv_map = tilde_structure(H, st).antipode.inverse()
    St_map = tilde_structure(H, st).antipode

    zu = z_u(H, u)
    rep.compare("z-u-orders", zu, H.S(u) * u, tol)
    rep.compare("z-u-central", np.array([commutator_residual(zu)]), np.zeros(1), tol)
    rep.compare("antipode-u-inverse", S(u_inv), Sinv(u_inv), tol)

    a_Rb, b_Rb = twisted_alpha(H, Rb), twisted_beta(H, Rb)
    lhs1 = contract(apply_leg(St_inv_map, 1, om.element), [1, dag(twisted_beta(H, R)), 2])
    rep.compare("beta-r-dagger", lhs1, Sinv(w_inv) * Sinv(a_Rb), tol)
    lhs2 = contract(apply_leg(St_inv_map, 2, om.inverse), [1, dag(twisted_alpha(H, R)), 2])
    rep.compare("alpha-r-dagger", lhs2, Sinv(b_Rb) * Sinv(w), tol)

    u_dag = dag(u)
    rep.compare("u-dagger", u_dag, w_inv * S(w) * Sinv(ub_inv), tol)
    for i in range(H.dim):
        a = H.basis(i)
        lbl = H.algebra.basis_labels[i]
        rep.compare(f"antipode-from-u-bar[{lbl}]", Sinv(ub_inv) * Sinv(a) * Sinv(ub), S(a), tol)

    if kind in (QtKind.TYPE_I, QtKind.BOTH):
        rep.compare("u-bar-type-I", ub, u, tol)
        rep.compare("u-dagger-type-I", u_dag, w_inv * S(w) * S(u_inv), tol)
        rep.compare("u-dagger-type-I-z", u_dag, w_inv * S(w) * invert(zu) * u, tol)
        rep.compare("z-u-dagger-type-I", dag(zu), invert(zu), tol)
    if kind in (QtKind.TYPE_II, QtKind.BOTH):
        rep.compare("u-bar-type-II", ub, S(u_inv), tol)
        rep.compare("u-dagger-type-II", u_dag, w_inv * S(w) * u, tol)
        rep.compare("u-dagger-type-II-z", u_dag, w_inv * S(w) * zu * S(u_inv), tol)
        rep.compare("z-u-dagger-type-II", dag(zu), zu, tol)

    v = w_inv * S(w) * u
    St2 = St_map.matrix @ St_map.matrix
    rep.compare("tilde-antipode-from-v", St2, conjugation_matrix(v, invert(v)), tol)
    rep.compare("tilde-antipode-from-u-dagger", St2, conjugation_matrix(u_dag, invert(u_dag)), tol)

    Hop, stop = opposite(H), opposite_star(H, st)
    Rop = R.T
    rep.extend(check_quasi_triangular(Hop, Rop, tol), "opposite.")
    rep.extend(check_star_qha(Hop, stop, tol), "opposite.")
    rep.flag("opposite-classification", classify_star_qt(Hop, stop, Rop, tol).kind == kind)

    rng = np.random.default_rng(seed)
    zs = center_basis(H, tol)
    z = H.one() + H.el(sum(0.3 * (rng.normal() + 1j * rng.normal()) * b.coeffs for b in zs))
    C = central_compatible_twist(H, z)
    rep.flag("qt-compatible-central", is_qt_compatible(C, R, tol))
    try:
        canonical_element_factor(H, st, om * C, tol)
        rep.flag("canonical-from-qt-compatible", True)
    except StructureError:
        rep.flag("canonical-from-qt-compatible", False)
    Rtw = TwistData(R.element, R.inverse)
    if is_compatible_twist(Rtw, H, tol)[0]:
        # compatible but not qt-compatible unless R is symmetric
        symmetric = tol.compare(R.element.T, R.element)[2]
        rep.flag("qt-compatible-detects-r", is_qt_compatible(Rtw, R, tol) == symmetric)

    q = TwistData(om.inverse * st.omega_dag.element, st.omega_dag.inverse * om.element)
    rep.flag("omega-conjugate-compatible", is_compatible_twist(q, H, tol)[0])
    rep.flag("omega-conjugate-qt-compatible", is_qt_compatible(q, R, tol))
    std = StarData(st.dagger, st.omega_dag)
    rep.flag("omega-dagger-same-type", classify_star_qt(H, std, R, tol).kind == kind)
    return rep


def twist_qt_star(H: QuasiHopfData, st: "StarData", R: RMatrixData, F: TwistData | TensorElement,
                  verify: bool = True, tol: ToleranceConfig = DEFAULT_TOL
                  ) -> tuple[QuasiHopfData, "StarData", RMatrixData]:
    """Twist the full *-quasi-triangular structure; ``R_F = F^T R F^{-1}``.

    With ``verify`` the twisted data is re-checked and must classify as before.
    """
    from .star_structures import check_star_qha, star_twist

    F = TwistData.of(F, tol)
    HF = twist_structure(H, F)
    stF = star_twist(H, st, F)
    RF = RMatrixData(F.element.T * R.element * F.inverse, F.element * R.inverse * F.inverse.T)
    if verify:
        before = classify_star_qt(H, st, R, tol).kind
        after = classify_star_qt(HF, stF, RF, tol).kind
        rep = CheckReport("twisted-qt")
        rep.extend(check_qba(HF, tol), "qba.")
        rep.extend(check_antipode(HF, tol), "antipode.")
        rep.extend(check_star_qha(HF, stF, tol), "star.")
        rep.extend(check_quasi_triangular(HF, RF, tol), "qt.")
        rep.flag("classification-preserved", before == after)
        if not rep.overall:
            raise StructureError("twisted quasi-triangular data fails: "
                                 + ", ".join(e.name for e in rep.failed()), rep)
    return HF, stF, RF
