"""Reading and writing structure files.

A structure file is one JSON document holding every tensor of a quasi-Hopf
algebra. Complex numbers are ``[re, im]`` pairs and tensors are flattened
row-major with leg 1 most significant. Matrices are stored row by row, except
the coproduct which is stored per basis element: ``coproduct[i]`` is the
flattened ``Δ(e_i)``.

Floats are written with Python's shortest round-trip repr, so reading a
written file gives back bit-identical arrays.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np
from jsonschema import Draft202012Validator

from .examples import Structure
from .qha_structures import QuasiHopfData, StructureError
from .quasi_triangular import RMatrixData
from .star_structures import StarData
from .tensor_core import AlgebraData, LinearMapData, TensorElement, ToleranceConfig
from .twist_calculus import TwistData

FORMAT_VERSION = "1.0"


class FormatError(ValueError):
    """A structure file is malformed; ``field`` names the offending entry."""

    def __init__(self, message: str, field: str = "", line: int | None = None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field {field}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


@lru_cache(maxsize=1)
def _validator() -> Draft202012Validator:
    text = resources.files("qhstar").joinpath("algebra.schema.json").read_text(encoding="utf-8")
    return Draft202012Validator(json.loads(text))


def _path(parts) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "<root>"


# -- encoding -------------------------------------------------------------------

def _encode(arr: np.ndarray) -> list:
    arr = np.asarray(arr, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise FormatError("non-finite value cannot be written")
    if arr.ndim == 0:
        return [float(arr.real), float(arr.imag)]
    return [_encode(a) for a in arr]


def structure_to_dict(S: Structure) -> dict[str, Any]:
    H = S.qha
    n = H.dim
    doc: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "dim": n,
        "basis_labels": list(H.algebra.basis_labels),
        "unit": _encode(H.algebra.unit),
        "mult": _encode(H.algebra.mult),
        "coproduct": _encode(H.coproduct.matrix.T),
        "counit": _encode(H.counit.matrix[0]),
        "coassociator": _encode(H.coassociator.coeffs.reshape(-1)),
        "antipode": _encode(H.antipode.matrix),
        "alpha": _encode(H.alpha.coeffs),
        "beta": _encode(H.beta.coeffs),
    }
    if S.star is not None:
        doc["dagger"] = _encode(S.star.dagger.matrix)
        doc["omega"] = _encode(S.star.omega.element.coeffs.reshape(-1))
    if S.r_matrix is not None:
        doc["r_matrix"] = _encode(S.r_matrix.element.coeffs.reshape(-1))
    doc["tolerance"] = {"atol": S.tolerance.atol, "rtol": S.tolerance.rtol}
    if "seed" in S.meta:
        doc["seed"] = S.meta["seed"]
    meta = {k: v for k, v in S.meta.items() if k != "seed"}
    if meta:
        doc["meta"] = meta
    return doc


def dumps(S: Structure) -> str:
    return json.dumps(structure_to_dict(S), indent=1, allow_nan=False) + "\n"


def write_structure(S: Structure, path: str | Path) -> None:
    Path(path).write_text(dumps(S), encoding="utf-8")


# -- decoding -------------------------------------------------------------------

def _decode(doc: dict, name: str, shape: tuple[int, ...]) -> np.ndarray:
    """Array of the declared shape from nested ``[re, im]`` lists."""

    def walk(node, depth: int, where: list):
        if depth == len(shape):
            return complex(node[0], node[1])
        if len(node) != shape[depth]:
            raise FormatError(f"expected {shape[depth]} entries, got {len(node)}", _path(where))
        return [walk(x, depth + 1, where + [i]) for i, x in enumerate(node)]

    return np.array(walk(doc[name], 0, [name]), dtype=complex).reshape(shape)


def structure_from_dict(doc: Any) -> Structure:
    errors = sorted(_validator().iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise FormatError(e.message, _path(e.absolute_path))
    n = doc["dim"]
    if len(doc["basis_labels"]) != n:
        raise FormatError(f"expected {n} labels, got {len(doc['basis_labels'])}", "basis_labels")
    try:
        alg = AlgebraData(_decode(doc, "mult", (n, n, n)), _decode(doc, "unit", (n,)), doc["basis_labels"])
        H = QuasiHopfData(
            algebra=alg,
            coproduct=LinearMapData(_decode(doc, "coproduct", (n, n * n)).T),
            counit=LinearMapData(_decode(doc, "counit", (n,)).reshape(1, n)),
            coassociator=TensorElement(alg, _decode(doc, "coassociator", (n ** 3,)).reshape(n, n, n)),
            antipode=LinearMapData(_decode(doc, "antipode", (n, n))),
            alpha=TensorElement(alg, _decode(doc, "alpha", (n,))),
            beta=TensorElement(alg, _decode(doc, "beta", (n,))),
        )
        tol = ToleranceConfig(**doc["tolerance"]) if "tolerance" in doc else ToleranceConfig()
        star = None
        if "dagger" in doc:
            D = LinearMapData(_decode(doc, "dagger", (n, n)), antilinear=True)
            if "omega" in doc:
                om = TensorElement(alg, _decode(doc, "omega", (n * n,)).reshape(n, n))
                omega = _invertible(lambda: TwistData.of(om, tol), "omega")
            else:
                omega = TwistData.identity(H)
            star = StarData(D, omega)
        elif "omega" in doc:
            raise FormatError("omega given without dagger", "omega")
        R = None
        if "r_matrix" in doc:
            r = TensorElement(alg, _decode(doc, "r_matrix", (n * n,)).reshape(n, n))
            R = _invertible(lambda: RMatrixData.of(r, tol), "r_matrix")
    except FormatError:
        raise
    except (StructureError, ValueError) as exc:
        raise FormatError(str(exc)) from exc
    meta = dict(doc.get("meta", {}))
    if "seed" in doc:
        meta["seed"] = doc["seed"]
    return Structure(H, star, R, tol, meta)


def _invertible(make, field: str):
    try:
        return make()
    except ArithmeticError as exc:
        raise FormatError(f"not invertible ({exc})", field) from exc


def loads(text: str) -> Structure:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, line=exc.lineno) from exc
    return structure_from_dict(doc)


def read_structure(path: str | Path) -> Structure:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from exc
    return loads(text)


def twist_to_dict(F: TwistData, report: list[dict] | None = None, name: str = "twist") -> dict:
    n = F.element.algebra.dim
    doc: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "dim": n,
        name: _encode(F.element.coeffs.reshape(-1)),
        name + "_inverse": _encode(F.inverse.coeffs.reshape(-1)),
    }
    if report is not None:
        doc["report"] = report
    return doc


def twist_from_dict(doc: Any, alg: AlgebraData, name: str = "twist") -> TwistData:
    if not isinstance(doc, dict) or name not in doc:
        raise FormatError(f"missing '{name}' entry", name)
    if doc.get("dim") != alg.dim:
        raise FormatError(f"dimension {doc.get('dim')} does not match {alg.dim}", "dim")
    n = alg.dim
    try:
        F = TensorElement(alg, _decode(doc, name, (n * n,)).reshape(n, n))
    except (TypeError, IndexError, KeyError) as exc:
        raise FormatError("expected [re, im] pairs", name) from exc
    return _invertible(lambda: TwistData.of(F), name)


__all__ = [
    "FORMAT_VERSION",
    "FormatError",
    "dumps",
    "loads",
    "read_structure",
    "structure_from_dict",
    "structure_to_dict",
    "twist_from_dict",
    "twist_to_dict",
    "write_structure",
]
