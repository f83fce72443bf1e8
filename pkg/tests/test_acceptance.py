"""The eleven acceptance criteria, one test each.

Every test appends a single PASS/FAIL line to the acceptance log, which is
printed in the terminal summary of the run.
"""

import json
import time

import numpy as np

from conftest import ACCEPTANCE_LOG
from qhstar import (
    QtKind,
    check_antipode,
    check_qba,
    check_star_qha,
    classify_star_qt,
    compute_operators,
    compute_u,
    example,
    random_twist,
    verify_operator_ledger,
    z_u,
)
from qhstar.cli import main
from qhstar.drinfeld_twists import (
    drinfeld_checks,
    primed_canonical_variants,
    verify_conjugation_ledger,
    verify_twist_law,
    w_placement_verdict,
)
from qhstar.fileformat import read_structure, write_structure
from qhstar.quasi_triangular import u_report

LIMIT = 1e-9


def log(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LOG.append(line)
    print(line)


def worst(entries) -> float:
    return max((e.residual for e in entries), default=0.0)


def test_criterion_01_hopf_star_bootstrap():
    start = time.perf_counter()
    res = 0.0
    failed = []
    for n in (2, 3, 4, 6):
        for seed in range(20):
            S = example("char_twisted_star", n, seed, False)
            for rep in (check_qba(S.qha), check_antipode(S.qha), check_star_qha(S.qha, S.star)):
                res = max(res, rep.max_residual())
                failed += [f"n={n} seed={seed} {rep.suite}.{e.name}" for e in rep.failed()]
    elapsed = time.perf_counter() - start
    ok = not failed and res < LIMIT and elapsed < 5.0
    log(1, ok, f"80 twisted Z_n structures, max residual {res:.2e}, {elapsed:.2f}s")
    assert ok, failed[:5]


def test_criterion_02_pentagon_oracle():
    start = time.perf_counter()
    good = check_qba(example("dual_group_cocycle", 3).qha)
    bad = check_qba(example("perturbed_cocycle", 3).qha)
    elapsed = time.perf_counter() - start
    bad_names = [e.name for e in bad.failed()]
    ok = good.overall and bad_names == ["pentagon"] and elapsed < 1.0
    log(2, ok, f"cocycle passes, perturbed fails {bad_names}, {elapsed:.2f}s")
    assert ok


def test_criterion_03_drinfeld_self_consistency():
    start = time.perf_counter()
    wanted = ("gamma-variants", "gamma-bar-variants", "twist-forms", "twist-inverse-forms",
              "twist-times-inverse", "inverse-times-twist", "primed-coproduct", "primed-coassociator",
              "primed-alpha", "primed-beta")
    res = 0.0
    for S in (example("dual_group_cocycle", 3), example("char_twisted_star", 4)):
        _, rep = drinfeld_checks(S.qha)
        res = max(res, worst(rep[name] for name in wanted))
    elapsed = time.perf_counter() - start
    ok = res < LIMIT and elapsed < 10.0
    log(3, ok, f"both forms of γ, γ̄, F and F^-1 agree, twisting gives the primed data, "
               f"max residual {res:.2e}, {elapsed:.2f}s")
    assert ok


def test_criterion_04_twist_law():
    res = 0.0
    for S in (example("dual_group_cocycle", 3), example("char_twisted_star", 4)):
        rng = np.random.default_rng(4)
        for _ in range(10):
            rep = verify_twist_law(S.qha, random_twist(S.qha, rng))
            res = max(res, rep["inverse-twist-law"].residual)
    ok = res < LIMIT
    log(4, ok, f"20 random twists, max residual {res:.2e}")
    assert ok


def test_criterion_05_operator_ledger():
    S = example("char_twisted_star", 4)
    rep = verify_operator_ledger(S.qha, S.star)
    res = rep.max_residual()
    hopf = [example("group_hopf_star", n) for n in (2, 3, 4, 6)]
    hopf += [example("z2_triangular"), example("bicharacter_qt", 3, 1), example("real_bicharacter_qt", 3),
             example("symmetric_group_star")]
    trivial = 0.0
    for T in hopf:
        ops = compute_operators(T.qha, T.star)
        one = T.qha.one().coeffs
        trivial = max(trivial, *(np.max(np.abs(x.coeffs - one)) for x in (ops.w, ops.w_bar, ops.c)))
    ok = rep.overall and res < LIMIT and trivial < 1e-12
    log(5, ok, f"{len(rep)} ledger entries, max residual {res:.2e}; "
               f"Hopf-* |w-1|,|w̄-1|,|c-1| <= {trivial:.1e}")
    assert ok, rep.failed()


def test_criterion_06_conjugated_twists():
    S = example("char_twisted_star", 4)
    ops = compute_operators(S.qha, S.star)
    rep = verify_conjugation_ledger(S.qha, S.star, ops)
    names = ("twist-dagger", "second-twist-dagger", "primed-canonical", "zero-canonical")
    res = worst(rep[name] for name in names)
    variants = primed_canonical_variants(S.qha, S.star, ops)
    ok = res < LIMIT and rep.overall
    log(6, ok, f"F_δ†, F_0†, Ω', Ω_0 max residual {res:.2e}; Ω' with prefactor W "
               f"has residual {variants['W']:.2e} (with W^-1: {variants['W^-1']:.2e})")
    assert ok, rep.failed()


def test_criterion_07_w_placement():
    S = example("char_twisted_star", 4)
    ops = compute_operators(S.qha, S.star)
    v = w_placement_verdict(S.qha, S.star, ops)
    ok = v.verdict in ("W^-1", "W")
    log(7, ok, v.line())
    assert ok


def test_criterion_08_quasi_triangular():
    bic, z2, real = example("bicharacter_qt", 3, 1), example("z2_triangular"), example("real_bicharacter_qt", 3)
    c = classify_star_qt(bic.qha, bic.star, bic.r_matrix)
    u, _ = compute_u(bic.qha, bic.r_matrix)
    z = z_u(bic.qha, u)
    unitary = np.max(np.abs(bic.star.dag(z).coeffs - z.inv().coeffs))
    both = classify_star_qt(z2.qha, z2.star, z2.r_matrix).kind
    ur, _ = compute_u(real.qha, real.r_matrix)
    zr = z_u(real.qha, ur)
    selfadj = np.max(np.abs(real.star.dag(zr).coeffs - zr.coeffs))
    s2 = max(u_report(T.qha, T.r_matrix)[2]["antipode-squared"].residual for T in (bic, z2, real))
    ok = (c.kind is QtKind.TYPE_I and c.ratio > 1e3 and unitary < LIMIT and both is QtKind.BOTH
          and selfadj < LIMIT and s2 < LIMIT)
    log(8, ok, f"bic(3,1) {c.kind} ratio {c.ratio:.1e}, z_u† = z_u^-1 to {unitary:.1e}; z2 {both}; "
               f"real R z_u† = z_u to {selfadj:.1e}; S²(a) = u a u^-1 to {s2:.1e}")
    assert ok


def test_criterion_09_classification_invariance():
    S = example("bicharacter_qt", 3, 1)
    kinds = set()
    for seed in range(20):
        T = S.twisted(random_twist(S.qha, np.random.default_rng(seed)))
        kinds.add(classify_star_qt(T.qha, T.star, T.r_matrix).kind)
    ok = kinds == {QtKind.TYPE_I}
    log(9, ok, f"classes after 20 twists: {sorted(map(str, kinds))}")
    assert ok


def test_criterion_10_w_universal():
    S = example("char_twisted_star", 4)
    w = compute_operators(S.qha, S.star).w
    rng = np.random.default_rng(10)
    res = 0.0
    for _ in range(10):
        T = S.twisted(random_twist(S.qha, rng))
        res = max(res, np.max(np.abs(compute_operators(T.qha, T.star).w.coeffs - w.coeffs)))
    ok = res < LIMIT
    log(10, ok, f"max |w_F - w| over 10 twists {res:.2e}")
    assert ok


def test_criterion_11_cli(tmp_path, capsys):
    z2, bic, broken = tmp_path / "example-z2.json", tmp_path / "bicharacter-z3.json", tmp_path / "broken-pentagon.json"
    write_structure(example("z2_triangular"), z2)
    write_structure(example("bicharacter_qt", 3, 1), bic)
    write_structure(example("perturbed_cocycle", 3), broken)
    capsys.readouterr()
    code_z2 = main(["check", str(z2)])
    capsys.readouterr()
    code_bic = main(["classify", str(bic)])
    kind = capsys.readouterr().out.split()[0]
    code_broken = main(["check", str(broken), "--json"])
    failing = [r["name"] for r in json.loads(capsys.readouterr().out) if not r["pass"]]
    S = example("char_twisted_star", 4)
    path = tmp_path / "rt.json"
    write_structure(S, path)
    S2 = read_structure(path)
    exact = all(a.tobytes() == b.tobytes() for a, b in (
        (S.qha.coassociator.coeffs, S2.qha.coassociator.coeffs),
        (S.qha.coproduct.matrix, S2.qha.coproduct.matrix),
        (S.qha.alpha.coeffs, S2.qha.alpha.coeffs),
        (S.star.omega.element.coeffs, S2.star.omega.element.coeffs)))
    ok = (code_z2 == 0 and code_bic == 0 and kind == "TypeI" and code_broken == 1
          and failing == ["qba.pentagon"] and exact)
    log(11, ok, f"check z2 -> {code_z2}, classify -> {kind}, broken -> {code_broken} {failing}, "
                f"round trip bit-exact {exact}")
    assert ok

