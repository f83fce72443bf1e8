"""Quasi-Hopf structure container, its axiom suites, and the opposite structure."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

import numpy as np

from .tensor_core import (
    DEFAULT_TOL,
    AlgebraData,
    AlgebraError,
    LinearMapData,
    TensorElement,
    ToleranceConfig,
    apply_each,
    apply_leg,
    apply_on_legs,
    contract,
    embed_legs,
    invert,
    permute_legs,
    regular_matrix,
    unit_tensor,
)


class StructureError(ValueError):
    """Structure data has the wrong shape or fails a required check."""

    def __init__(self, message: str, report: "CheckReport | None" = None):
        super().__init__(message)
        self.report = report


class CandidateNotAntipode(StructureError):
    """A supplied (S, α, β) triple does not satisfy the antipode axioms."""


class InconsistentV(StructureError):
    """The two explicit expressions for the mediating element disagree."""


@dataclass(frozen=True)
class CheckEntry:
    name: str
    residual: float
    threshold: float
    passed: bool

    def line(self, suite: str = "") -> str:
        prefix = f"{suite}." if suite else ""
        verdict = "PASS" if self.passed else "FAIL"
        return f"{prefix}{self.name} residual={self.residual:.3e} threshold={self.threshold:.3e} {verdict}"

    def record(self, suite: str = "") -> dict:
        name = f"{suite}.{self.name}" if suite else self.name
        return {"name": name, "residual": self.residual, "threshold": self.threshold, "pass": self.passed}


@dataclass
class CheckReport:
    """Ordered list of identity checks; ``overall`` is their conjunction."""

    suite: str = ""
    entries: list[CheckEntry] = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(e.passed for e in self.entries)

    def __bool__(self) -> bool:
        return self.overall

    def __iter__(self) -> Iterator[CheckEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, name: str) -> CheckEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(e.name == name for e in self.entries)

    def names(self) -> list[str]:
        return [e.name for e in self.entries]

    def failed(self) -> list[CheckEntry]:
        return [e for e in self.entries if not e.passed]

    def max_residual(self) -> float:
        return max((e.residual for e in self.entries), default=0.0)

    def compare(self, name: str, lhs, rhs, tol: ToleranceConfig = DEFAULT_TOL) -> CheckEntry:
        res, thr, ok = tol.compare(lhs, rhs)
        entry = CheckEntry(name, res, thr, ok)
        self.entries.append(entry)
        return entry

    def flag(self, name: str, ok: bool) -> CheckEntry:
        """Record a yes/no fact (residual 0 when it holds, 1 otherwise)."""
        entry = CheckEntry(name, 0.0 if ok else 1.0, 0.5, bool(ok))
        self.entries.append(entry)
        return entry

    def extend(self, other: "CheckReport", prefix: str = "") -> None:
        for e in other.entries:
            self.entries.append(dataclasses.replace(e, name=prefix + e.name))

    def lines(self) -> list[str]:
        return [e.line(self.suite) for e in self.entries]

    def records(self) -> list[dict]:
        return [e.record(self.suite) for e in self.entries]

    def __str__(self) -> str:
        return "\n".join(self.lines())


def flip_matrix(n: int) -> np.ndarray:
    """Permutation matrix of ``a⊗b -> b⊗a`` on the flattened ``H⊗H``."""
    P = np.zeros((n * n, n * n))
    for i in range(n):
        for j in range(n):
            P[j * n + i, i * n + j] = 1.0
    return P


def kron_maps(*maps: LinearMapData) -> LinearMapData:
    """``f1 ⊗ f2 ⊗ ...`` for linear maps."""
    m = maps[0].matrix
    for f in maps[1:]:
        m = np.kron(m, f.matrix)
    if any(f.antilinear for f in maps):
        raise AlgebraError("tensor products of antilinear maps are not supported")
    return LinearMapData(m)


@dataclass(frozen=True, eq=False)
class QuasiHopfData:
    """The data ``(Δ, ε, Φ, S, α, β)`` over an ``AlgebraData``.

    The coproduct matrix has shape ``(n², n)``, the counit ``(1, n)`` and the
    antipode ``(n, n)``.
    """

    algebra: AlgebraData
    coproduct: LinearMapData
    counit: LinearMapData
    coassociator: TensorElement
    antipode: LinearMapData
    alpha: TensorElement
    beta: TensorElement

    def __post_init__(self):
        n = self.algebra.dim
        if self.coproduct.matrix.shape != (n * n, n) or self.coproduct.antilinear:
            raise StructureError(f"coproduct must be a linear ({n * n}, {n}) matrix")
        if self.counit.matrix.shape != (1, n) or self.counit.antilinear:
            raise StructureError(f"counit must be a linear (1, {n}) matrix")
        if self.antipode.matrix.shape != (n, n) or self.antipode.antilinear:
            raise StructureError(f"antipode must be a linear ({n}, {n}) matrix")
        if self.coassociator.order != 3 or self.coassociator.algebra.dim != n:
            raise StructureError("coassociator must be an order-3 tensor over the algebra")
        for name in ("alpha", "beta"):
            el = getattr(self, name)
            if el.order != 1 or el.algebra.dim != n:
                raise StructureError(f"{name} must be an element of the algebra")

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def replace(self, **changes) -> "QuasiHopfData":
        return dataclasses.replace(self, **changes)

    @cached_property
    def phi_inv(self) -> TensorElement:
        return invert(self.coassociator)

    @cached_property
    def antipode_inv(self) -> LinearMapData:
        return self.antipode.inverse()

    @cached_property
    def coproduct_op(self) -> LinearMapData:
        """``Δ^T``."""
        return LinearMapData(flip_matrix(self.dim) @ self.coproduct.matrix)

    def one(self, order: int = 1) -> TensorElement:
        return unit_tensor(self.algebra, order)

    def el(self, coeffs) -> TensorElement:
        return TensorElement(self.algebra, coeffs)

    def basis(self, i: int) -> TensorElement:
        return self.algebra.basis(i)

    def delta(self, a: TensorElement, leg: int = 1) -> TensorElement:
        """Coproduct applied on one leg; the image occupies ``leg, leg+1``."""
        return apply_on_legs(self.coproduct, [leg], a)

    def delta_op(self, a: TensorElement, leg: int = 1) -> TensorElement:
        return apply_on_legs(self.coproduct_op, [leg], a)

    def eps(self, a: TensorElement, leg: int = 1) -> TensorElement | complex:
        if a.order == 1:
            return complex((self.counit.matrix @ a.coeffs)[0])
        return apply_on_legs(self.counit, [leg], a)

    def S(self, a: TensorElement, leg: int | None = None) -> TensorElement:
        """Antipode on one leg, or on every leg when ``leg`` is None."""
        return apply_each(self.antipode, a) if leg is None else apply_leg(self.antipode, leg, a)

    def Sinv(self, a: TensorElement, leg: int | None = None) -> TensorElement:
        return apply_each(self.antipode_inv, a) if leg is None else apply_leg(self.antipode_inv, leg, a)


def _basis_iter(H: QuasiHopfData):
    for i in range(H.dim):
        yield H.algebra.basis_labels[i], H.basis(i)


def _mult_map(alg: AlgebraData) -> np.ndarray:
    """Matrix ``(n, n²)`` of the product ``a⊗b -> ab``."""
    n = alg.dim
    return alg.mult.reshape(n * n, n).T


def pentagon_sides(H: QuasiHopfData) -> tuple[TensorElement, TensorElement]:
    phi = H.coassociator
    lhs = H.delta(phi, 1) * H.delta(phi, 3)
    rhs = embed_legs(phi, [1, 2, 3], 4) * H.delta(phi, 2) * embed_legs(phi, [2, 3, 4], 4)
    return lhs, rhs


def check_qba(H: QuasiHopfData, tol: ToleranceConfig = DEFAULT_TOL) -> CheckReport:
    """Quasi-bialgebra axioms, with per-basis quasi-coassociativity entries."""
    rep = CheckReport("qba")
    n = H.dim
    alg = H.algebra
    rep.compare("associativity", alg.associativity_residual(), 0.0, tol)
    rep.compare("unit", alg.unit_residual(), 0.0, tol)

    D = H.coproduct.matrix.reshape(n, n, n)
    # Δ(e_i e_j) = Δ(e_i) Δ(e_j)
    lhs = np.einsum("ijk,pqk->ijpq", alg.mult, D)
    rhs = np.einsum("pqi,rsj,prx,qsy->ijxy", D, D, alg.mult, alg.mult)
    rep.compare("coproduct-multiplicative", lhs, rhs, tol)
    rep.compare("coproduct-unit", H.delta(H.one()), H.one(2), tol)
    e = H.counit.matrix[0]
    rep.compare("counit-multiplicative", np.einsum("ijk,k->ij", alg.mult, e), np.outer(e, e), tol)
    rep.compare("counit-unit", e @ alg.unit, 1.0, tol)

    eye = np.eye(n)
    rep.compare("counit-left", np.einsum("p,pqi->qi", e, D), eye, tol)
    rep.compare("counit-right", np.einsum("q,pqi->pi", e, D), eye, tol)

    try:
        phi_inv = H.phi_inv
        rep.flag("coassociator-invertible", True)
    except ArithmeticError:
        rep.flag("coassociator-invertible", False)
        return rep
    phi = H.coassociator
    for label, a in _basis_iter(H):
        da = H.delta(a)
        lhs = H.delta(da, 2)
        rhs = phi_inv * H.delta(da, 1) * phi
        rep.compare(f"quasi-coassociativity[{label}]", lhs, rhs, tol)

    lhs, rhs = pentagon_sides(H)
    rep.compare("pentagon", lhs, rhs, tol)
    rep.compare("epsilon-phi", H.eps(phi, 2), H.one(2), tol)
    rep.compare("epsilon-phi-left", H.eps(phi, 1), H.one(2), tol)
    rep.compare("epsilon-phi-right", H.eps(phi, 3), H.one(2), tol)
    return rep


def check_antipode(H: QuasiHopfData, tol: ToleranceConfig = DEFAULT_TOL) -> CheckReport:
    """Antipode axioms and their counit consequences."""
    rep = CheckReport("antipode")
    n = H.dim
    alg = H.algebra
    S = H.antipode.matrix
    if np.linalg.matrix_rank(S) < n:
        rep.flag("antipode-bijective", False)
        return rep
    rep.flag("antipode-bijective", True)
    # S(e_i e_j) = S(e_j) S(e_i)
    lhs = np.einsum("ijk,xk->ijx", alg.mult, S)
    rhs = np.einsum("pj,qi,pqx->ijx", S, S, alg.mult)
    rep.compare("antipode-antihomomorphism", lhs, rhs, tol)

    alpha, beta = H.alpha, H.beta
    phi = H.coassociator
    left = contract(H.S(H.S(phi, 1), 3), [1, alpha, 2, beta, 3])
    rep.compare("phi-antipode-left", left, H.one(), tol)
    right = contract(apply_leg(H.antipode, 2, H.phi_inv), [1, beta, 2, alpha, 3])
    rep.compare("phi-antipode-right", right, H.one(), tol)

    for label, a in _basis_iter(H):
        da = H.delta(a)
        ea = H.eps(a)
        rep.compare(f"alpha-law[{label}]", contract(H.S(da, 1), [1, alpha, 2]), alpha * ea, tol)
        rep.compare(f"beta-law[{label}]", contract(H.S(da, 2), [1, beta, 2]), beta * ea, tol)

    rep.compare("counit-alpha-beta", H.eps(alpha) * H.eps(beta), 1.0, tol)
    e = H.counit.matrix[0]
    rep.compare("counit-antipode", e @ S, e, tol)
    rep.compare("counit-antipode-inverse", e @ H.antipode_inv.matrix, e, tol)
    return rep


def opposite(H: QuasiHopfData) -> QuasiHopfData:
    """The co-opposite structure ``(Δ^T, ε, Φ_{321}^{-1}, S^{-1}, S^{-1}(α), S^{-1}(β))``."""
    Sinv = H.antipode_inv
    return QuasiHopfData(
        algebra=H.algebra,
        coproduct=H.coproduct_op,
        counit=H.counit,
        coassociator=permute_legs(H.phi_inv, (3, 2, 1)),
        antipode=Sinv,
        alpha=H.Sinv(H.alpha),
        beta=H.Sinv(H.beta),
    )


def conjugation_matrix(x: TensorElement, y: TensorElement | None = None) -> np.ndarray:
    """Matrix of ``a -> x a y`` (``y`` defaults to ``x^{-1}``)."""
    if y is None:
        y = invert(x)
    alg = x.algebra
    L = regular_matrix(x)
    R = np.einsum("j,ijk->ki", y.coeffs, alg.mult)
    return L @ R


def antipode_equivalence_v(H: QuasiHopfData, S2: LinearMapData, alpha2: TensorElement,
                           beta2: TensorElement, tol: ToleranceConfig = DEFAULT_TOL) -> TensorElement:
    """The unique invertible ``v`` relating the antipode triple of ``H`` to ``(S2, α2, β2)``.

    ``v α = α2``, ``β2 v = β`` and ``S2(a) = v S(a) v^{-1}``.
    """
    v, rep = antipode_equivalence_report(H, S2, alpha2, beta2, tol)
    if not rep.overall:
        raise InconsistentV("mediating element fails: " + ", ".join(e.name for e in rep.failed()), rep)
    return v


def antipode_equivalence_report(H: QuasiHopfData, S2: LinearMapData, alpha2: TensorElement,
                                beta2: TensorElement, tol: ToleranceConfig = DEFAULT_TOL
                                ) -> tuple[TensorElement, CheckReport]:
    H2 = H.replace(antipode=S2, alpha=alpha2, beta=beta2)
    cand = check_antipode(H2, tol)
    if not cand.overall:
        raise CandidateNotAntipode(
            "candidate triple fails " + ", ".join(e.name for e in cand.failed()), cand)
    phi, phi_inv = H.coassociator, H.phi_inv
    S, Sinv = H.antipode, H.antipode_inv
    v = contract(apply_leg(S, 3, apply_leg(S2, 1, phi)), [1, alpha2, 2, H.beta, 3])
    s2_sinv = S2.compose(Sinv)
    v_alt = contract(apply_leg(s2_sinv, 1, apply_leg(S2, 2, phi_inv)),
                     [1, TensorElement(H.algebra, s2_sinv(H.beta.coeffs)), 2, alpha2, 3])
    v_inv = contract(apply_leg(S2, 3, apply_leg(S, 1, phi)), [1, H.alpha, 2, beta2, 3])
    v_inv_alt = contract(apply_leg(s2_sinv, 3, apply_leg(S2, 2, phi_inv)),
                         [1, beta2, 2, TensorElement(H.algebra, s2_sinv(H.alpha.coeffs)), 3])
    rep = CheckReport("equivalence")
    rep.compare("v-forms", v, v_alt, tol)
    rep.compare("v-inverse-forms", v_inv, v_inv_alt, tol)
    rep.compare("v-times-inverse", v * v_inv, H.one(), tol)
    rep.compare("inverse-times-v", v_inv * v, H.one(), tol)
    rep.compare("v-alpha", v * H.alpha, alpha2, tol)
    rep.compare("beta-v", beta2 * v, H.beta, tol)
    rep.compare("antipode-conjugation", S2.matrix, conjugation_matrix(v, v_inv) @ S.matrix, tol)
    return v, rep
