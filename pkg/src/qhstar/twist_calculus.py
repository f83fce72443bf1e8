"""Twists (gauge transformations), twisted structures, composition and compatibility."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qha_structures import (
    CheckReport,
    QuasiHopfData,
    StructureError,
    check_antipode,
    check_qba,
)
from .tensor_core import (
    DEFAULT_TOL,
    SingularElement,
    TensorElement,
    ToleranceConfig,
    contract,
    embed_legs,
    invert,
    outer,
    regular_matrix,
)


@dataclass(frozen=True, eq=False)
class TwistData:
    """An invertible order-2 element stored with its inverse."""

    element: TensorElement
    inverse: TensorElement

    @classmethod
    def of(cls, F: "TensorElement | TwistData", tol: ToleranceConfig = DEFAULT_TOL) -> "TwistData":
        if isinstance(F, TwistData):
            return F
        if F.order != 2:
            raise StructureError(f"a twist has order 2, got {F.order}")
        return cls(F, invert(F, tol))

    @classmethod
    def identity(cls, H: QuasiHopfData) -> "TwistData":
        one = H.one(2)
        return cls(one, one)

    @property
    def T(self) -> "TwistData":
        return TwistData(self.element.T, self.inverse.T)

    def inv(self) -> "TwistData":
        return TwistData(self.inverse, self.element)

    def __mul__(self, other: "TwistData") -> "TwistData":
        return TwistData(self.element * other.element, other.inverse * self.inverse)


def is_twist(F: TensorElement, H: QuasiHopfData,
             tol: ToleranceConfig = DEFAULT_TOL) -> tuple[bool, CheckReport]:
    """Invertibility plus the counit property."""
    rep = CheckReport("twist")
    if F.order != 2:
        rep.flag("order-two", False)
        return False, rep
    try:
        Finv = invert(F, tol)
        rep.flag("invertible", True)
        rep.compare("inverse-right", F * Finv, H.one(2), tol)
    except ArithmeticError:
        rep.flag("invertible", False)
    rep.compare("counit-left", H.eps(F, 1), H.one(), tol)
    rep.compare("counit-right", H.eps(F, 2), H.one(), tol)
    return rep.overall, rep


def twisted_coproduct(H: QuasiHopfData, F: TwistData) -> np.ndarray:
    """Matrix of ``a -> F Δ(a) F^{-1}``."""
    return regular_matrix(F.element) @ regular_matrix(F.inverse, "right") @ H.coproduct.matrix


def twisted_coassociator(H: QuasiHopfData, F: TwistData) -> TensorElement:
    Fe, Fi = F.element, F.inverse
    return (embed_legs(Fe, [1, 2], 3) * H.delta(Fe, 1) * H.coassociator
            * H.delta(Fi, 2) * embed_legs(Fi, [2, 3], 3))


def twisted_alpha(H: QuasiHopfData, F: TwistData) -> TensorElement:
    """``Σ S(f̄_i) α f̄^i`` for ``F^{-1} = f̄_i ⊗ f̄^i``."""
    return contract(H.S(F.inverse, 1), [1, H.alpha, 2])


def twisted_beta(H: QuasiHopfData, F: TwistData) -> TensorElement:
    """``Σ f_i β S(f^i)`` for ``F = f_i ⊗ f^i``."""
    return contract(H.S(F.element, 2), [1, H.beta, 2])


class TwistCheckFailed(StructureError):
    """A twisted structure fails the axiom suites."""


def twist_structure(H: QuasiHopfData, F: "TwistData | TensorElement", verify: bool = False,
                    tol: ToleranceConfig = DEFAULT_TOL) -> QuasiHopfData:
    """``H_F``: same counit and antipode, twisted coproduct, coassociator and α, β.

    With ``verify`` the result is run through both axiom suites.
    """
    from .tensor_core import LinearMapData

    F = TwistData.of(F, tol)
    HF = H.replace(
        coproduct=LinearMapData(twisted_coproduct(H, F)),
        coassociator=twisted_coassociator(H, F),
        alpha=twisted_alpha(H, F),
        beta=twisted_beta(H, F),
    )
    if verify:
        rep = CheckReport("twisted")
        rep.extend(check_qba(HF, tol), "qba.")
        rep.extend(check_antipode(HF, tol), "antipode.")
        if not rep.overall:
            raise TwistCheckFailed("twisted structure fails: "
                                   + ", ".join(e.name for e in rep.failed()), rep)
    return HF


def structure_report(H1: QuasiHopfData, H2: QuasiHopfData, tol: ToleranceConfig = DEFAULT_TOL,
                     suite: str = "structure") -> CheckReport:
    """Entrywise comparison of (Δ, Φ, α, β)."""
    rep = CheckReport(suite)
    rep.compare("coproduct", H1.coproduct.matrix, H2.coproduct.matrix, tol)
    rep.compare("coassociator", H1.coassociator, H2.coassociator, tol)
    rep.compare("alpha", H1.alpha, H2.alpha, tol)
    rep.compare("beta", H1.beta, H2.beta, tol)
    return rep


def compose_twists(F: TwistData, G: TwistData, H: QuasiHopfData, verify: bool = True,
                   tol: ToleranceConfig = DEFAULT_TOL) -> TwistData:
    """The composite twist ``FG``: twisting by ``G`` then by ``F``.

    The element is the product ``F·G``; with ``verify`` the defining property
    ``X_{FG} = (X_G)_F`` is checked for X in {Δ, Φ, α, β}.
    """
    FG = F * G
    if verify:
        lhs = twist_structure(H, FG)
        rhs = twist_structure(twist_structure(H, G), F)
        rep = structure_report(lhs, rhs, tol, "compose")
        if not rep.overall:
            raise TwistCheckFailed("composite twist fails the defining property", rep)
    return FG


def is_compatible_twist(C: "TwistData | TensorElement", H: QuasiHopfData,
                        tol: ToleranceConfig = DEFAULT_TOL) -> tuple[bool, CheckReport]:
    """True iff twisting by ``C`` leaves Δ and Φ unchanged."""
    rep = CheckReport("compatible")
    try:
        C = TwistData.of(C, tol)
    except (SingularElement, ArithmeticError):
        rep.flag("invertible", False)
        return False, rep
    rep.compare("coproduct", twisted_coproduct(H, C), H.coproduct.matrix, tol)
    rep.compare("coassociator", twisted_coassociator(H, C), H.coassociator, tol)
    return rep.overall, rep


def counit_projector(H: QuasiHopfData) -> np.ndarray:
    """Matrix of ``a -> a - ε(a) 1``; its image is the kernel of ε."""
    return np.eye(H.dim) - np.outer(H.algebra.unit, H.counit.matrix[0])


def random_twist(H: QuasiHopfData, rng: np.random.Generator, scale: float = 0.3) -> TwistData:
    """``1⊗1 + t·(P⊗P)X`` with ``P`` the projector onto ker ε and ``X`` random.

    The counit property holds by construction; ``scale`` keeps it invertible.
    """
    n = H.dim
    P = counit_projector(H)
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    X = P @ X @ P.T
    X *= scale / max(np.max(np.abs(X)), 1e-300)
    return TwistData.of(H.one(2) + TensorElement(H.algebra, X))


def central_compatible_twist(H: QuasiHopfData, z: TensorElement) -> TwistData:
    """``Δ(z)(z^{-1}⊗z^{-1})`` for a central invertible ``z``."""
    zi = invert(z)
    return TwistData.of(H.delta(z) * outer(zi, zi))
