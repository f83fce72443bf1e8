"""Arithmetic kernel for finite-dimensional algebras given by structure constants.

Elements of ``H^{⊗k}`` are dense complex arrays of shape ``(n,) * k``.  The
flattened (row-major) view puts leg 1 in the most significant position, which
is also the layout used by the on-disk format.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np

_LETTERS = string.ascii_letters


class AlgebraError(ValueError):
    """Malformed algebra data or incompatible operands."""


class SingularElement(ArithmeticError):
    """The element has no inverse (its regular representation is rank deficient)."""


class RightInverseMismatch(ArithmeticError):
    """A solved one-sided inverse fails the opposite-side identity."""


@dataclass(frozen=True)
class ToleranceConfig:
    atol: float = 1e-9
    rtol: float = 1e-9

    def __post_init__(self):
        if self.atol < 0 or self.rtol < 0:
            raise ValueError("tolerances must be non-negative")

    def threshold(self, scale: float) -> float:
        return self.atol + self.rtol * scale

    def compare(self, lhs, rhs) -> tuple[float, float, bool]:
        """Max-norm residual of ``lhs - rhs`` and the threshold it is judged against."""
        lhs = _coeffs(lhs)
        rhs = _coeffs(rhs)
        residual = float(np.max(np.abs(lhs - rhs), initial=0.0))
        scale = max(float(np.max(np.abs(lhs), initial=0.0)), float(np.max(np.abs(rhs), initial=0.0)))
        thr = self.threshold(scale)
        return residual, thr, residual <= thr


DEFAULT_TOL = ToleranceConfig()


def _coeffs(x) -> np.ndarray:
    if isinstance(x, TensorElement):
        return x.coeffs
    return np.asarray(x, dtype=complex)


class AlgebraData:
    """Unital associative algebra: ``e_i e_j = sum_k mult[i, j, k] e_k``."""

    def __init__(self, mult, unit, basis_labels: Sequence[str] | None = None):
        mult = np.array(mult, dtype=complex)
        unit = np.array(unit, dtype=complex)
        if mult.ndim != 3 or not (mult.shape[0] == mult.shape[1] == mult.shape[2]):
            raise AlgebraError(f"mult must have shape (n, n, n), got {mult.shape}")
        n = mult.shape[0]
        if n < 1:
            raise AlgebraError("dimension must be positive")
        if unit.shape != (n,):
            raise AlgebraError(f"unit must have length {n}, got shape {unit.shape}")
        if basis_labels is None:
            basis_labels = [f"e{i}" for i in range(n)]
        if len(basis_labels) != n:
            raise AlgebraError(f"expected {n} basis labels, got {len(basis_labels)}")
        mult.flags.writeable = False
        unit.flags.writeable = False
        self.mult = mult
        self.unit = unit
        self.basis_labels = list(basis_labels)

    @property
    def dim(self) -> int:
        return self.mult.shape[0]

    def __repr__(self):
        return f"AlgebraData(dim={self.dim})"

    def same_as(self, other: "AlgebraData") -> bool:
        return self is other or (
            self.dim == other.dim
            and np.array_equal(self.mult, other.mult)
            and np.array_equal(self.unit, other.unit)
        )

    def element(self, coeffs) -> "TensorElement":
        return TensorElement(self, coeffs)

    def basis(self, i: int) -> "TensorElement":
        c = np.zeros(self.dim, dtype=complex)
        c[i] = 1.0
        return TensorElement(self, c)

    def one(self, order: int = 1) -> "TensorElement":
        return unit_tensor(self, order)

    def zero(self, order: int = 1) -> "TensorElement":
        return TensorElement(self, np.zeros((self.dim,) * order, dtype=complex))

    def associativity_residual(self) -> float:
        lhs = np.einsum("ijp,pkq->ijkq", self.mult, self.mult)
        rhs = np.einsum("jkp,ipq->ijkq", self.mult, self.mult)
        return float(np.max(np.abs(lhs - rhs)))

    def unit_residual(self) -> float:
        eye = np.eye(self.dim)
        left = np.einsum("i,ijk->jk", self.unit, self.mult)
        right = np.einsum("i,jik->jk", self.unit, self.mult)
        return float(max(np.max(np.abs(left - eye)), np.max(np.abs(right - eye))))

    def left_regular(self, a: np.ndarray) -> np.ndarray:
        """Matrix of ``x -> a x`` on H."""
        return np.einsum("i,ijk->kj", a, self.mult)

    def is_central(self, z: "TensorElement", tol: ToleranceConfig = DEFAULT_TOL) -> bool:
        return commutator_residual(z) <= tol.threshold(z.max_norm())


class TensorElement:
    """An element of ``H^{⊗order}``; immutable."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: AlgebraData, coeffs):
        c = np.array(coeffs, dtype=complex)
        n = algebra.dim
        if c.ndim == 1 and c.size != n and c.size > 0:
            order = round(np.log(c.size) / np.log(n)) if n > 1 else None
            if order is None or n ** order != c.size:
                raise AlgebraError(f"coefficient length {c.size} is not a power of dim {n}")
            c = c.reshape((n,) * order)
        if c.ndim < 1 or any(s != n for s in c.shape):
            raise AlgebraError(f"coefficient shape {c.shape} incompatible with dim {n}")
        c.flags.writeable = False
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "coeffs", c)

    def __setattr__(self, name, value):
        raise AttributeError("TensorElement is immutable")

    @property
    def order(self) -> int:
        return self.coeffs.ndim

    @property
    def flat(self) -> np.ndarray:
        return self.coeffs.reshape(-1)

    def max_norm(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def __repr__(self):
        return f"TensorElement(order={self.order}, dim={self.algebra.dim})"

    def _check(self, other: "TensorElement"):
        if not isinstance(other, TensorElement):
            raise TypeError(f"expected TensorElement, got {type(other).__name__}")
        if self.order != other.order:
            raise AlgebraError(f"order mismatch: {self.order} vs {other.order}")
        if self.algebra.dim != other.algebra.dim:
            raise AlgebraError(f"dimension mismatch: {self.algebra.dim} vs {other.algebra.dim}")

    def __add__(self, other):
        self._check(other)
        return TensorElement(self.algebra, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return TensorElement(self.algebra, self.coeffs - other.coeffs)

    def __neg__(self):
        return TensorElement(self.algebra, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, TensorElement):
            return tensor_mul(self, other)
        return TensorElement(self.algebra, self.coeffs * complex(other))

    def __rmul__(self, other):
        return TensorElement(self.algebra, self.coeffs * complex(other))

    def __truediv__(self, other):
        return TensorElement(self.algebra, self.coeffs / complex(other))

    def inv(self, tol: ToleranceConfig = DEFAULT_TOL) -> "TensorElement":
        return invert(self, tol)

    @property
    def T(self) -> "TensorElement":
        """Reversed legs; for order 2 this is the flip ``a⊗b -> b⊗a``."""
        return TensorElement(self.algebra, self.coeffs.transpose(tuple(reversed(range(self.order)))))

    def allclose(self, other: "TensorElement", tol: ToleranceConfig = DEFAULT_TOL) -> bool:
        self._check(other)
        return tol.compare(self, other)[2]


@dataclass(frozen=True)
class LinearMapData:
    """Matrix of a (possibly antilinear) map ``H^{⊗j} -> H^{⊗k}``.

    Antilinear maps act as ``x -> matrix @ conj(x)``.
    """

    matrix: np.ndarray
    antilinear: bool = False
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2:
            raise AlgebraError("map matrix must be 2-dimensional")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    def legs(self, n: int) -> tuple[int, int]:
        """(output legs, input legs) for an algebra of dimension ``n``."""
        return _log_n(self.rows, n), _log_n(self.cols, n)

    def __call__(self, x):
        """Apply to a single element of H (order 1) and return the image tensor."""
        if isinstance(x, TensorElement):
            return apply_on_legs(self, range(1, x.order + 1), x)
        v = np.asarray(x, dtype=complex)
        return self.matrix @ (np.conj(v) if self.antilinear else v)

    def compose(self, other: "LinearMapData") -> "LinearMapData":
        """``self ∘ other``."""
        b = np.conj(other.matrix) if self.antilinear else other.matrix
        return LinearMapData(self.matrix @ b, self.antilinear != other.antilinear)

    def inverse(self) -> "LinearMapData":
        if "inverse" not in self._cache:
            if self.rows != self.cols:
                raise AlgebraError("only square maps can be inverted")
            if np.linalg.matrix_rank(self.matrix) < self.rows:
                raise SingularElement("map matrix is singular")
            inv = np.linalg.inv(self.matrix)
            if self.antilinear:
                # (M conj)^{-1} = conj(M^{-1}) conj
                inv = np.conj(inv)
            self._cache["inverse"] = LinearMapData(inv, self.antilinear)
        return self._cache["inverse"]


def _log_n(size: int, n: int) -> int:
    if size == 1:
        return 0
    if n == 1:
        raise AlgebraError("cannot infer leg count for dim 1")
    k = round(np.log(size) / np.log(n))
    if n ** k != size:
        raise AlgebraError(f"{size} is not a power of {n}")
    return k


@lru_cache(maxsize=None)
def _path(subscripts: str, shapes: tuple) -> list:
    ops = [np.empty(s, dtype=complex) for s in shapes]
    return np.einsum_path(subscripts, *ops, optimize="greedy")[0]


def einsum(subscripts: str, *operands):
    """``np.einsum`` with a contraction path cached per signature."""
    path = _path(subscripts, tuple(op.shape for op in operands))
    return np.einsum(subscripts, *operands, optimize=path)


def _mul_subscripts(k: int) -> str:
    a = _LETTERS[:k]
    b = _LETTERS[k:2 * k]
    q = _LETTERS[2 * k:3 * k]
    terms = [a, b] + [a[i] + b[i] + q[i] for i in range(k)]
    return ",".join(terms) + "->" + q


def tensor_mul(a: TensorElement, b: TensorElement) -> TensorElement:
    """Componentwise product in ``H^{⊗k}``."""
    a._check(b)
    k = a.order
    n = a.algebra.dim
    m = a.algebra.mult
    if k <= 2:
        return TensorElement(a.algebra, einsum(_mul_subscripts(k), a.coeffs, b.coeffs, *([m] * k)))
    # Leg by leg keeps the intermediates at n^(2k-1) entries.
    # T axes: done legs q_1..q_t, then remaining a legs, then remaining b legs
    t = np.tensordot(m, a.coeffs, axes=([0], [0]))              # b1 q1 A'
    t = np.tensordot(t, b.coeffs, axes=([0], [0]))              # q1 A' B'
    m2 = m.reshape(n * n, n)
    for leg in range(1, k):
        done, rest = leg, k - leg
        t = t.reshape((n ** done, n, n ** (rest - 1), n, n ** (rest - 1)))
        t = np.moveaxis(t, 3, 2)                                # q.. a_t b_t A'' B''
        t = t.reshape(n ** done, n * n, -1)
        t = np.matmul(m2.T, t)
    return TensorElement(a.algebra, t.reshape((n,) * k))


def product(*factors: TensorElement) -> TensorElement:
    out = factors[0]
    for f in factors[1:]:
        out = tensor_mul(out, f)
    return out


def regular_matrix(a: TensorElement, side: str = "left") -> np.ndarray:
    """Matrix of left (or right) multiplication by ``a`` on ``H^{⊗k}``."""
    k = a.order
    n = a.algebra.dim
    i = _LETTERS[:k]
    j = _LETTERS[k:2 * k]
    q = _LETTERS[2 * k:3 * k]
    if side == "left":
        legs = [i[t] + j[t] + q[t] for t in range(k)]
    elif side == "right":
        legs = [j[t] + i[t] + q[t] for t in range(k)]
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    subs = ",".join([i] + legs) + "->" + q + j
    L = einsum(subs, a.coeffs, *([a.algebra.mult] * k))
    return L.reshape(n ** k, n ** k)


def unit_tensor(algebra: AlgebraData, order: int = 1) -> TensorElement:
    return outer(*([TensorElement(algebra, algebra.unit)] * order))


def outer(*factors: TensorElement) -> TensorElement:
    """The tensor product ``f1 ⊗ f2 ⊗ ...`` as a single element."""
    c = factors[0].coeffs
    for f in factors[1:]:
        c = np.multiply.outer(c, f.coeffs)
    return TensorElement(factors[0].algebra, c)


def invert(a: TensorElement, tol: ToleranceConfig = DEFAULT_TOL) -> TensorElement:
    """Two-sided inverse of ``a`` via a solve in the left regular representation."""
    L = regular_matrix(a)
    N = L.shape[0]
    s = np.linalg.svd(L, compute_uv=False)
    if s[-1] <= max(N, 1) * np.finfo(float).eps * max(s[0], 1.0) * 16:
        raise SingularElement(
            f"element of order {a.order} is not invertible (smallest singular value {s[-1]:.3e})")
    one = unit_tensor(a.algebra, a.order)
    x = TensorElement(a.algebra, np.linalg.solve(L, one.flat).reshape(a.coeffs.shape))
    # loose floor: the solve itself is only as good as the conditioning of L
    check = ToleranceConfig(atol=max(tol.atol, 1e3 * np.finfo(float).eps * s[0] / s[-1]), rtol=tol.rtol)
    res, thr, ok = check.compare(tensor_mul(x, a), one)
    if not ok:
        raise RightInverseMismatch(f"x·a differs from the unit by {res:.3e} (threshold {thr:.3e})")
    return x


def _check_perm(sigma: Sequence[int], k: int) -> tuple[int, ...]:
    sigma = tuple(int(s) for s in sigma)
    if sorted(sigma) != list(range(1, k + 1)):
        raise AlgebraError(f"{sigma} is not a permutation of 1..{k}")
    return sigma


def permute_legs(a: TensorElement, sigma: Sequence[int]) -> TensorElement:
    """``a_{σ}``: slot ``s`` of the result carries factor ``σ[s]`` of ``a``.

    With ``Φ = X⊗Y⊗Z`` this gives ``Φ_{312} = Z⊗X⊗Y`` and ``Φ_{321} = Z⊗Y⊗X``.
    """
    sigma = _check_perm(sigma, a.order)
    return TensorElement(a.algebra, a.coeffs.transpose([s - 1 for s in sigma]))


def embed_legs(a: TensorElement, slots: Sequence[int], target_order: int) -> TensorElement:
    """Place factor ``j`` of ``a`` in slot ``slots[j]`` and the unit elsewhere.

    ``embed_legs(R, [1, 3], 3)`` is ``R_{13}``; ``embed_legs(R, [2, 1], 2)`` is ``R^T``.
    """
    slots = [int(s) for s in slots]
    if len(slots) != a.order:
        raise AlgebraError(f"need {a.order} slots, got {len(slots)}")
    if len(set(slots)) != len(slots):
        raise AlgebraError(f"duplicate slots in {slots}")
    if any(s < 1 or s > target_order for s in slots):
        raise AlgebraError(f"slots {slots} out of range 1..{target_order}")
    one = TensorElement(a.algebra, a.algebra.unit)
    full = outer(a, *([one] * (target_order - a.order)))
    rest = iter(range(a.order + 1, target_order + 1))
    where = {s: j + 1 for j, s in enumerate(slots)}
    sigma = [where[s] if s in where else next(rest) for s in range(1, target_order + 1)]
    return permute_legs(full, sigma)


def apply_on_legs(f: LinearMapData, legs: Iterable[int], a: TensorElement) -> TensorElement:
    """Apply ``f`` to the listed (1-based) legs of ``a``.

    The image legs replace the consumed ones, starting at the first listed leg;
    the other legs keep their relative order.  An antilinear ``f`` must act on
    every leg at once, since conjugation touches the single global coefficient.
    """
    legs = [int(leg) for leg in legs]
    n = a.algebra.dim
    k = a.order
    if len(set(legs)) != len(legs) or any(leg < 1 or leg > k for leg in legs):
        raise AlgebraError(f"invalid legs {legs} for order {k}")
    p, q = f.legs(n)
    if q != len(legs):
        raise AlgebraError(f"map consumes {q} legs but {len(legs)} were selected")
    c = a.coeffs
    if f.antilinear:
        if len(legs) != k:
            raise AlgebraError("antilinear maps must be applied to every leg simultaneously")
        c = np.conj(c)
    if p + k - q == 0:
        raise AlgebraError("the result would have no legs")
    M = f.matrix.reshape((n,) * (p + q)) if p + q > 0 else f.matrix
    src = [leg - 1 for leg in legs]
    rest = [i for i in range(k) if i not in src]
    moved = np.transpose(c, src + rest)
    out = np.tensordot(M.reshape((n,) * p + (n ** q,)) if p else M.reshape(n ** q),
                       moved.reshape((n ** q,) + moved.shape[q:]), axes=([p], [0]) if p else ([0], [0]))
    # out axes: p image legs, then the untouched legs in original order
    insert_at = min(src)
    before = sum(1 for r in rest if r < insert_at)
    order = list(range(p, p + before)) + list(range(p)) + list(range(p + before, p + len(rest)))
    return TensorElement(a.algebra, np.transpose(out, order))


def apply_each(f: LinearMapData, a: TensorElement) -> TensorElement:
    """``(f ⊗ f ⊗ ... ⊗ f) a`` for a one-leg map ``f``."""
    # an antilinear map conjugates the shared coefficient array once
    c = np.conj(a.coeffs) if f.antilinear else a.coeffs
    for leg in range(a.order):
        c = np.moveaxis(np.tensordot(f.matrix, c, axes=([1], [leg])), 0, leg)
    return TensorElement(a.algebra, c)


def apply_leg(f: LinearMapData, leg: int, a: TensorElement) -> TensorElement:
    """One-leg linear map on a single leg (e.g. ``(1⊗S⊗1)Φ``)."""
    if f.antilinear:
        raise AlgebraError("antilinear maps must be applied to every leg simultaneously")
    c = np.moveaxis(np.tensordot(f.matrix, a.coeffs, axes=([1], [leg - 1])), 0, leg - 1)
    return TensorElement(a.algebra, c)


Item = Union[int, TensorElement]


def contract(a: TensorElement, *groups: Sequence[Item]) -> TensorElement:
    """Multiply legs of ``a`` together, interleaved with fixed elements.

    Each group is an ordered product; an ``int`` item is a 1-based leg of
    ``a`` and a ``TensorElement`` item is an order-1 element inserted as is.
    Every leg must be used exactly once.  The result has one leg per group.
    Example: ``contract(Φ', [1, α, 2, β, 3])`` is ``Σ X' α Y' β Z'``.
    """
    k = a.order
    used = [it for g in groups for it in g if isinstance(it, int)]
    if sorted(used) != list(range(1, k + 1)):
        raise AlgebraError(f"legs {used} do not cover 1..{k} exactly once")
    letters = iter(_LETTERS)
    leg_idx = [next(letters) for _ in range(k)]
    terms = ["".join(leg_idx)]
    operands = [a.coeffs]
    mult = a.algebra.mult
    out = []
    for group in groups:
        running = None
        for it in group:
            if isinstance(it, int):
                idx = leg_idx[it - 1]
            else:
                if it.order != 1:
                    raise AlgebraError("inserted elements must have order 1")
                idx = next(letters)
                terms.append(idx)
                operands.append(it.coeffs)
            if running is None:
                running = idx
            else:
                new = next(letters)
                terms.append(running + idx + new)
                operands.append(mult)
                running = new
        out.append(running)
    return TensorElement(a.algebra, einsum(",".join(terms) + "->" + "".join(out), *operands))


def expand(a: TensorElement, f) -> TensorElement:
    """``Σ_I a[I] f(e_{i1}, ..., e_{ik})`` for a multilinear ``f`` of basis elements."""
    alg = a.algebra
    basis = [alg.basis(i) for i in range(alg.dim)]
    total = None
    for idx in itertools.product(range(alg.dim), repeat=a.order):
        c = a.coeffs[idx]
        if c == 0:
            continue
        term = f(*(basis[i] for i in idx)) * c
        total = term if total is None else total + term
    if total is None:
        raise AlgebraError("cannot expand the zero tensor")
    return total


def commutator_residual(z: TensorElement) -> float:
    """max over basis ``e_i`` of ``|z e_i - e_i z|`` (order-1 ``z``)."""
    m = z.algebra.mult
    left = np.einsum("i,ijk->jk", z.coeffs, m)
    right = np.einsum("i,jik->jk", z.coeffs, m)
    return float(np.max(np.abs(left - right)))


Factor = Union[TensorElement, tuple]


def mchain(t: TensorElement, *items: Factor) -> TensorElement:
    """Ordered product in ``H^{⊗k}`` of images of the legs of ``t``, summed over ``t``.

    Items are fixed ``TensorElement`` factors of order ``k`` or pairs
    ``(leg, f)`` where ``f`` maps ``H -> H^{⊗k}`` and is fed leg ``leg`` of
    ``t``.  Every leg of ``t`` is consumed exactly once.  Example, with
    ``t = Σ a_ν ⊗ b_ν``: ``mchain(t, (1, Δ'), γ, (2, Δ))`` is ``Σ Δ'(a_ν) γ Δ(b_ν)``.
    """
    alg = t.algebra
    n = alg.dim
    k = None
    for it in items:
        ko = it.order if isinstance(it, TensorElement) else it[1].legs(n)[0]
        if k is None:
            k = ko
        elif ko != k:
            raise AlgebraError("all factors of a product must have the same order")
    used = sorted(it[0] for it in items if not isinstance(it, TensorElement))
    if used != list(range(1, t.order + 1)):
        raise AlgebraError(f"legs {used} do not cover 1..{t.order} exactly once")
    N = n ** k
    # one partial product per multi-index of t, stored as rows of length N
    P = np.empty(t.coeffs.shape + (N,), dtype=complex)
    P[...] = unit_tensor(alg, k).coeffs.reshape(N)
    for it in items:
        if isinstance(it, TensorElement):
            P = P @ regular_matrix(it, "right").T
            continue
        leg, f = it
        if f.antilinear or f.cols != n:
            raise AlgebraError("factor maps must be linear maps out of H")
        right = np.stack([regular_matrix(TensorElement(alg, f.matrix[:, j].reshape((n,) * k)), "right").T
                          for j in range(n)])
        moved = np.moveaxis(P, leg - 1, 0)
        rest = moved.shape
        moved = np.matmul(moved.reshape(n, -1, N), right).reshape(rest)
        P = np.moveaxis(moved, 0, leg - 1)
    out = np.tensordot(t.coeffs, P, axes=t.order)
    return TensorElement(alg, out.reshape((n,) * k))
