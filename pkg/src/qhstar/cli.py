"""Command-line front end: ``qhstar check|twist|drinfeld|operators|classify|example``.

Exit status is 0 when every reported identity holds, 1 when any fails and 2
when the input cannot be used.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from .canonical_operators import compute_operators, verify_operator_ledger
from .drinfeld_twists import drinfeld_checks
from .examples import BUILTINS, Structure, UnknownExample, example
from .fileformat import FormatError, read_structure, twist_from_dict, twist_to_dict, write_structure
from .qha_structures import CheckReport, StructureError, check_antipode, check_qba
from .quasi_triangular import check_quasi_triangular, classify_star_qt, u_report, z_u
from .star_structures import check_star_qha
from .tensor_core import ToleranceConfig
from .twist_calculus import TwistData, random_twist

SUITES = ("qba", "antipode", "star", "qt", "all")


class InputError(Exception):
    """Unusable command-line input; reported with exit status 2."""


def _load(path: str, tol: float | None) -> Structure:
    S = read_structure(path)
    if tol is not None:
        S = Structure(S.qha, S.star, S.r_matrix, ToleranceConfig(tol, tol), S.meta)
    return S


def _emit(reports: list[CheckReport], as_json: bool) -> int:
    if as_json:
        print(json.dumps([r for rep in reports for r in rep.records()], indent=1))
    else:
        for rep in reports:
            for line in rep.lines():
                print(line)
    return 0 if all(rep.overall for rep in reports) else 1


def _fmt(x) -> str:
    c = np.asarray(x.coeffs).reshape(-1)
    return "[" + ", ".join(f"{v.real:.6g}{v.imag:+.6g}j" for v in c) + "]"


def cmd_check(args) -> int:
    S = _load(args.file, args.tol)
    H, tol = S.qha, S.tolerance
    wanted = SUITES[:-1] if args.suite == "all" else (args.suite,)
    reports = []
    for suite in wanted:
        if suite == "qba":
            reports.append(check_qba(H, tol))
        elif suite == "antipode":
            reports.append(check_antipode(H, tol))
        elif suite == "star":
            if S.star is None:
                if args.suite == "all":
                    continue
                raise FormatError("required by --suite star", "dagger")
            reports.append(check_star_qha(H, S.star, tol))
        elif suite == "qt":
            if S.r_matrix is None:
                if args.suite == "all":
                    continue
                raise FormatError("required by --suite qt", "r_matrix")
            reports.append(check_quasi_triangular(H, S.r_matrix, tol))
    return _emit(reports, args.json)


def _builtin_twist(text: str, S: Structure) -> TwistData:
    kind, _, rest = text.partition(":")
    if kind == "identity" and not rest:
        return TwistData.identity(S.qha)
    if kind == "random":
        parts = rest.split(":") if rest else ["0"]
        try:
            seed = int(parts[0])
            scale = float(parts[1]) if len(parts) > 1 else 0.3
        except ValueError:
            raise InputError(f"bad random twist {text!r}; expected random:SEED[:SCALE]") from None
        return random_twist(S.qha, np.random.default_rng(seed), scale)
    raise InputError(f"unknown twist {text!r}; give a file, 'identity' or 'random:SEED[:SCALE]'")


def cmd_twist(args) -> int:
    S = _load(args.file, None)
    path = Path(args.twist)
    if path.suffix == ".json" or path.exists():
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise FormatError(f"cannot read {path}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise FormatError(exc.msg, line=exc.lineno) from exc
        F = twist_from_dict(doc, S.algebra)
        label = str(path)
    else:
        F = _builtin_twist(args.twist, S)
        label = args.twist
    out = S.twisted(F, label)
    write_structure(out, args.output)
    print(f"wrote {args.output}")
    return 0


def cmd_drinfeld(args) -> int:
    S = _load(args.file, args.tol)
    ds, rep = drinfeld_checks(S.qha, S.tolerance)
    F = ds.F_zero if args.second else ds.F_delta
    doc = twist_to_dict(F, rep.records())
    doc["kind"] = "F_zero" if args.second else "F_delta"
    Path(args.output).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
    code = _emit([rep], args.json)
    if not args.json:
        print(f"wrote {args.output}")
    return code


def cmd_operators(args) -> int:
    S = _load(args.file, args.tol)
    if S.star is None:
        raise FormatError("required by operators", "dagger")
    H, tol = S.qha, S.tolerance
    reports = []
    try:
        ops = compute_operators(H, S.star, tol)
    except StructureError as exc:
        print(f"operators failed: {exc}")
        if exc.report is not None:
            _emit([exc.report], False)
        return 1
    print(f"w = {_fmt(ops.w)}")
    print(f"w_bar = {_fmt(ops.w_bar)}")
    print(f"c = {_fmt(ops.c)}")
    reports.append(verify_operator_ledger(H, S.star, ops, tol=tol))
    if S.r_matrix is not None:
        u, _, urep = u_report(H, S.r_matrix, tol)
        print(f"u = {_fmt(u)}")
        print(f"z_u = {_fmt(z_u(H, u))}")
        reports.append(urep)
    return _emit(reports, False)


def cmd_classify(args) -> int:
    S = _load(args.file, args.tol)
    if S.star is None:
        raise FormatError("required by classify", "dagger")
    if S.r_matrix is None:
        raise FormatError("required by classify", "r_matrix")
    cls = classify_star_qt(S.qha, S.star, S.r_matrix, S.tolerance)
    print(cls.line())
    return 0


def _param(text: str):
    if text.lower() in ("none", "-"):
        return None
    try:
        return int(text)
    except ValueError:
        pass
    if text.lower() in ("true", "false"):
        return text.lower() == "true"
    raise InputError(f"parameter {text!r} is not an integer")


def cmd_example(args) -> int:
    params = [_param(p) for p in args.params]
    S = example(args.name, *params)
    write_structure(S, args.output)
    print(f"wrote {args.output}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qhstar", description="Check and transform quasi-Hopf *-algebras")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_tol(p):
        p.add_argument("--tol", type=float, default=None, help="absolute and relative tolerance")
        return p

    p = with_tol(sub.add_parser("check", help="run axiom suites"))
    p.add_argument("file")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--json", action="store_true", help="emit records as a JSON array")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("twist", help="twist a structure and write the result")
    p.add_argument("file")
    p.add_argument("--twist", required=True, help="twist file, 'identity' or 'random:SEED[:SCALE]'")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_twist)

    p = with_tol(sub.add_parser("drinfeld", help="compute the Drinfeld twist"))
    p.add_argument("file")
    p.add_argument("--second", action="store_true", help="write F_0 instead of F_delta")
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_drinfeld)

    p = with_tol(sub.add_parser("operators", help="compute w, w_bar, c, u, z_u"))
    p.add_argument("file")
    p.set_defaults(func=cmd_operators)

    p = with_tol(sub.add_parser("classify", help="type I / type II classification"))
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("example", help="write a builtin example")
    p.add_argument("name", choices=sorted(BUILTINS))
    p.add_argument("params", nargs="*")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_example)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, InputError, UnknownExample) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except StructureError as exc:
        # construction-time failures of builtins are bad parameters
        if args.command == "example":
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(f"failed: {exc}", file=sys.stderr)
        if exc.report is not None:
            _emit([exc.report], False)
        return 1


if __name__ == "__main__":
    sys.exit(main())
