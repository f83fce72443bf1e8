"""Built-in example structures.

Every builder returns a ``Structure`` whose tensors are exact up to floating
point; the suites in the other modules are expected to pass on all of them
except ``perturbed_cocycle``, which fails the pentagon on purpose.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .qha_structures import QuasiHopfData, StructureError, conjugation_matrix
from .quasi_triangular import RMatrixData
from .star_structures import StarData
from .tensor_core import (
    DEFAULT_TOL,
    AlgebraData,
    LinearMapData,
    TensorElement,
    ToleranceConfig,
    invert,
    outer,
)
from .twist_calculus import (
    TwistData,
    central_compatible_twist,
    random_twist,
    twist_structure,
)
from .star_structures import star_twist


class UnknownExample(StructureError):
    pass


@dataclass(frozen=True, eq=False)
class Structure:
    """A quasi-Hopf algebra with optional conjugation and R-matrix."""

    qha: QuasiHopfData
    star: StarData | None = None
    r_matrix: RMatrixData | None = None
    tolerance: ToleranceConfig = DEFAULT_TOL
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def algebra(self) -> AlgebraData:
        return self.qha.algebra

    def twisted(self, F: TwistData | TensorElement, label: str = "twist") -> "Structure":
        """Twist every part of the structure by ``F``."""
        F = TwistData.of(F, self.tolerance)
        H = twist_structure(self.qha, F)
        st = star_twist(self.qha, self.star, F) if self.star is not None else None
        R = None
        if self.r_matrix is not None:
            R = RMatrixData(F.element.T * self.r_matrix.element * F.inverse,
                            F.element * self.r_matrix.inverse * F.inverse.T)
        meta = dict(self.meta)
        meta["twists"] = list(meta.get("twists", [])) + [label]
        return Structure(H, st, R, self.tolerance, meta)


# -- group algebras ----------------------------------------------------------

def _group_structure(table: np.ndarray, inverse: np.ndarray, labels: list[str],
                     dagger_perm: np.ndarray | None = None) -> tuple[QuasiHopfData, StarData]:
    """``ℂ[G]`` with ``Δ(g) = g⊗g``, ``S(g) = g^{-1}`` and ``g† = g^{-1}`` unless overridden."""
    n = len(labels)
    mult = np.zeros((n, n, n))
    for i, j in itertools.product(range(n), repeat=2):
        mult[i, j, table[i, j]] = 1.0
    unit = np.zeros(n)
    unit[next(e for e in range(n) if np.array_equal(table[e], np.arange(n)))] = 1.0
    alg = AlgebraData(mult, unit, labels)
    cop = np.zeros((n * n, n))
    for g in range(n):
        cop[g * n + g, g] = 1.0
    S = np.zeros((n, n))
    S[inverse, np.arange(n)] = 1.0
    H = QuasiHopfData(
        algebra=alg,
        coproduct=LinearMapData(cop),
        counit=LinearMapData(np.ones((1, n))),
        coassociator=alg.one(3),
        antipode=LinearMapData(S),
        alpha=alg.one(),
        beta=alg.one(),
    )
    perm = inverse if dagger_perm is None else dagger_perm
    D = np.zeros((n, n))
    D[perm, np.arange(n)] = 1.0
    one2 = alg.one(2)
    return H, StarData(LinearMapData(D, antilinear=True), TwistData(one2, one2))


def _cyclic_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    idx = np.arange(n)
    return (idx[:, None] + idx[None, :]) % n, (-idx) % n


def _check_n(n: int, minimum: int = 2) -> int:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < minimum:
        raise StructureError(f"group order must be an integer >= {minimum}, got {n!r}")
    return int(n)


def character_idempotents(alg: AlgebraData, n: int) -> list[TensorElement]:
    """``p_j = (1/n) Σ_k ζ^{-jk} g^k`` in ``ℂ[Z_n]`` with ``ζ = exp(2πi/n)``."""
    zeta = np.exp(2j * np.pi / n)
    k = np.arange(n)
    return [TensorElement(alg, zeta ** (-j * k) / n) for j in range(n)]


def _diagonal(alg: AlgebraData, idem: list[TensorElement], values: np.ndarray) -> TensorElement:
    """``Σ_{a,b} values[a, b] p_a ⊗ p_b``."""
    P = np.array([p.coeffs for p in idem])
    return TensorElement(alg, np.einsum("ab,ai,bj->ij", values, P, P))


def group_hopf_star(n: int) -> Structure:
    """``ℂ[Z_n]`` with ``g† = g^{-1}``; trivial coassociator and canonical element."""
    n = _check_n(n, 1)
    table, inv = _cyclic_table(n)
    H, st = _group_structure(table, inv, [f"g{k}" for k in range(n)])
    return Structure(H, st, meta={"name": "group_hopf_star", "params": [n]})


def _omega_3cocycle(n: int) -> np.ndarray:
    a = np.arange(n)
    A, B, C = np.meshgrid(a, a, a, indexing="ij")
    carry = B + C - (B + C) % n
    return np.exp(2j * np.pi * A * carry / n ** 2)


def _function_algebra(n: int, phases: np.ndarray) -> tuple[QuasiHopfData, StarData]:
    mult = np.zeros((n, n, n))
    for a in range(n):
        mult[a, a, a] = 1.0
    alg = AlgebraData(mult, np.ones(n), [f"d{a}" for a in range(n)])
    cop = np.zeros((n * n, n))
    for b, c in itertools.product(range(n), repeat=2):
        cop[b * n + c, (b + c) % n] = 1.0
    counit = np.zeros((1, n))
    counit[0, 0] = 1.0
    S = np.zeros((n, n))
    S[(-np.arange(n)) % n, np.arange(n)] = 1.0
    # From the antipode law S(X)αYβS(Z) = 1 with α = 1: β(a) = Φ(a, -a, a).
    a = np.arange(n)
    beta = phases[a, (-a) % n, a]
    H = QuasiHopfData(
        algebra=alg,
        coproduct=LinearMapData(cop),
        counit=LinearMapData(counit),
        coassociator=TensorElement(alg, phases),
        antipode=LinearMapData(S),
        alpha=alg.one(),
        beta=TensorElement(alg, beta),
    )
    one2 = alg.one(2)
    return H, StarData(LinearMapData(np.eye(n), antilinear=True), TwistData(one2, one2))


def dual_group_cocycle(n: int) -> Structure:
    """Functions on ``Z_n`` with the coassociator from the standard 3-cocycle."""
    n = _check_n(n)
    H, st = _function_algebra(n, _omega_3cocycle(n))
    return Structure(H, st, meta={"name": "dual_group_cocycle", "params": [n]})


def perturbed_cocycle(n: int = 3, seed: int = 0) -> Structure:
    """The cocycle example with random phases on generic triples; only the pentagon breaks.

    Triples with a zero entry keep the normalisation, and the triples
    ``(x, -x, x)`` and ``(-x, x, -x)`` keep their value so the antipode data stays valid.
    """
    n = _check_n(n, 3)
    rng = np.random.default_rng(seed)
    phases = _omega_3cocycle(n)
    for a, b, c in itertools.product(range(1, n), repeat=3):
        if b == (-a) % n and c == a:
            continue
        phases[a, b, c] *= np.exp(2j * np.pi * rng.uniform(0.05, 0.95))
    H, st = _function_algebra(n, phases)
    return Structure(H, st, meta={"name": "perturbed_cocycle", "params": [n], "seed": seed})


def _random_phase_diagonal(rng: np.random.Generator, n: int) -> np.ndarray:
    vals = rng.uniform(0.5, 2.0, size=(n, n)) * np.exp(2j * np.pi * rng.uniform(size=(n, n)))
    vals[0, :] = 1.0
    vals[:, 0] = 1.0
    return vals


def char_twisted_star(n: int, seed: int = 0, gauge: bool = True) -> Structure:
    """``ℂ[Z_n]`` twisted by a random diagonal twist ``F = Σ f(a,b) p_a⊗p_b``.

    The canonical element is ``Ω = (FF†)^{-1}``. With ``gauge`` the antipode
    triple is replaced by ``(S, vα, βv^{-1})`` for a random central ``v`` with ``ε(v) = 1``,
    which makes the operator ``w`` nontrivial.
    """
    n = _check_n(n)
    rng = np.random.default_rng(seed)
    base = group_hopf_star(n)
    alg = base.algebra
    idem = character_idempotents(alg, n)
    F = _diagonal(alg, idem, _random_phase_diagonal(rng, n))
    out = base.twisted(F, "diagonal")
    st = out.star
    Fd = st.dag(F)
    omega = TwistData.of(invert(F * Fd))
    out = Structure(out.qha, StarData(st.dagger, omega), None, out.tolerance,
                    {"name": "char_twisted_star", "params": [n], "seed": seed})
    if gauge:
        vals = rng.uniform(0.5, 2.0, size=n) * np.exp(2j * np.pi * rng.uniform(size=n))
        # ε(v) = 1 keeps ε(α) = 1, which the Drinfeld twist needs to be counital
        vals[0] = 1.0
        v = TensorElement(alg, sum(c * p.coeffs for c, p in zip(vals, idem)))
        H = out.qha
        out = Structure(H.replace(alpha=v * H.alpha, beta=H.beta * invert(v)),
                        out.star, None, out.tolerance, out.meta)
    return out


def z2_triangular() -> Structure:
    """``ℂ[Z_2]`` with the triangular R-matrix ``1⊗1 - 2 p_-⊗p_-``."""
    base = group_hopf_star(2)
    alg = base.algebra
    p_minus = TensorElement(alg, [0.5, -0.5])
    R = alg.one(2) - 2.0 * outer(p_minus, p_minus)
    # R is an involution
    return Structure(base.qha, base.star, RMatrixData(R, R), base.tolerance,
                     {"name": "z2_triangular", "params": []})


def bicharacter_qt(n: int, k: int = 1) -> Structure:
    """``ℂ[Z_n]`` with ``R = Σ exp(2πi·k·ab/n) p_a⊗p_b``."""
    n = _check_n(n)
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
        raise StructureError(f"bicharacter exponent must be an integer, got {k!r}")
    base = group_hopf_star(n)
    alg = base.algebra
    idem = character_idempotents(alg, n)
    a = np.arange(n)
    phase = np.exp(2j * np.pi * k * np.outer(a, a) / n)
    R = RMatrixData(_diagonal(alg, idem, phase), _diagonal(alg, idem, np.conj(phase)))
    return Structure(base.qha, base.star, R, base.tolerance,
                     {"name": "bicharacter_qt", "params": [n, int(k)]})


def real_bicharacter_qt(n: int = 3) -> Structure:
    """``ℂ[Z_n×Z_n]`` with a symmetric bicharacter R and ``g† = σ(g)^{-1}``.

    ``σ`` negates the first coordinate, so ``R† = R^T``: a type II example.
    """
    n = _check_n(n)
    N = n * n
    elems = [(x, y) for x in range(n) for y in range(n)]
    index = {g: i for i, g in enumerate(elems)}
    table = np.array([[index[((g[0] + h[0]) % n, (g[1] + h[1]) % n)] for h in elems] for g in elems])
    inv = np.array([index[((-g[0]) % n, (-g[1]) % n)] for g in elems])
    dag = np.array([index[(g[0], (-g[1]) % n)] for g in elems])
    H, st = _group_structure(table, inv, [f"g{x}{y}" for x, y in elems], dag)
    alg = H.algebra
    zeta = np.exp(2j * np.pi / n)
    chars = np.array([[zeta ** (-(a[0] * g[0] + a[1] * g[1])) for g in elems] for a in elems]) / N
    idem = [TensorElement(alg, row) for row in chars]
    phase = np.array([[zeta ** (a[0] * b[1] + a[1] * b[0]) for b in elems] for a in elems])
    R = RMatrixData(_diagonal(alg, idem, phase), _diagonal(alg, idem, np.conj(phase)))
    return Structure(H, st, R, DEFAULT_TOL, {"name": "real_bicharacter_qt", "params": [n]})


_S3 = [(0, 1, 2), (1, 0, 2), (0, 2, 1), (2, 1, 0), (1, 2, 0), (2, 0, 1)]


def symmetric_group_star(twist_seed: int | None = None, compatible_seed: int | None = None,
                         gauge_seed: int | None = None) -> Structure:
    """``ℂ[S_3]`` with ``g† = g^{-1}``, optionally twisted and gauged.

    ``twist_seed`` applies a generic random twist, ``compatible_seed`` then
    multiplies Ω by a compatible twist so that Ω is no longer self-adjoint,
    and ``gauge_seed`` replaces the antipode triple by ``(vSv^{-1}, vα, βv^{-1})``
    for a random non-central ``v`` scaled so that ``ε(α) = 1``.
    """
    index = {p: i for i, p in enumerate(_S3)}
    table = np.array([[index[tuple(p[q[i]] for i in range(3))] for q in _S3] for p in _S3])
    inv = np.array([index[tuple(int(np.argsort(p)[i]) for i in range(3))] for p in _S3])
    H, st = _group_structure(table, inv, ["e", "s01", "s12", "s02", "c012", "c021"])
    out = Structure(H, st, meta={"name": "symmetric_group_star", "params": []})
    alg = H.algebra
    if twist_seed is not None:
        F = random_twist(H, np.random.default_rng(twist_seed), 0.3)
        out = out.twisted(F, f"random:{twist_seed}")
    if compatible_seed is not None:
        rng = np.random.default_rng(compatible_seed)
        # central element: a combination of the class sums
        classes = [[0], [1, 2, 3], [4, 5]]
        coeffs = np.zeros(6, dtype=complex)
        for cls in classes:
            coeffs[cls] = 1.0 + 0.3 * (rng.normal() + 1j * rng.normal())
        coeffs[0] += 1.0
        # ε(z) = 1 keeps the compatible twist, and so Ω, counital
        coeffs /= coeffs.sum()
        C = central_compatible_twist(out.qha, TensorElement(alg, coeffs))
        om = out.star.omega
        out = Structure(out.qha, StarData(out.star.dagger, om * C), None, out.tolerance, out.meta)
    if gauge_seed is not None:
        rng = np.random.default_rng(gauge_seed)
        v = alg.one() + TensorElement(alg, 0.2 * (rng.normal(size=6) + 1j * rng.normal(size=6)))
        Hq = out.qha
        # keep ε(α) = 1 so the Drinfeld twist stays counital
        v = v * (1.0 / (Hq.eps(v) * Hq.eps(Hq.alpha)))
        vi = invert(v)
        Hq = Hq.replace(antipode=LinearMapData(conjugation_matrix(v, vi) @ Hq.antipode.matrix),
                        alpha=v * Hq.alpha, beta=Hq.beta * vi)
        out = Structure(Hq, out.star, None, out.tolerance, out.meta)
    meta = dict(out.meta)
    meta.update(twist_seed=twist_seed, compatible_seed=compatible_seed, gauge_seed=gauge_seed)
    return Structure(out.qha, out.star, out.r_matrix, out.tolerance, meta)


BUILTINS: dict[str, Callable[..., Structure]] = {
    "group_hopf_star": group_hopf_star,
    "dual_group_cocycle": dual_group_cocycle,
    "char_twisted_star": char_twisted_star,
    "z2_triangular": z2_triangular,
    "bicharacter_qt": bicharacter_qt,
    "real_bicharacter_qt": real_bicharacter_qt,
    "perturbed_cocycle": perturbed_cocycle,
    "symmetric_group_star": symmetric_group_star,
}


def example(name: str, *params) -> Structure:
    """Build a named example; raises UnknownExample or StructureError on bad input."""
    try:
        builder = BUILTINS[name]
    except KeyError:
        raise UnknownExample(f"unknown example {name!r}; choose from {', '.join(BUILTINS)}") from None
    try:
        return builder(*params)
    except TypeError as exc:
        raise StructureError(f"invalid parameters for {name}: {exc}") from None
