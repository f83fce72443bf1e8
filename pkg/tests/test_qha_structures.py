import numpy as np
import pytest

from oracles import cocycle_defect, z3_cocycle
from qhstar import check_antipode, check_qba, example
from qhstar.qha_structures import (
    StructureError,
    antipode_equivalence_v,
    opposite,
    pentagon_sides,
)
from qhstar.tensor_core import LinearMapData, TensorElement


@pytest.mark.parametrize("n", [2, 3, 5])
def test_group_algebra_coproduct_oracle(n):
    H = example("group_hopf_star", n).qha
    for g in range(n):
        expected = np.zeros((n, n))
        expected[g, g] = 1.0
        np.testing.assert_array_equal(H.delta(H.basis(g)).coeffs, expected)
    assert check_qba(H).overall and check_antipode(H).overall


def test_z3_cocycle_oracle(dual3):
    phases = dual3.qha.coassociator.coeffs
    for a, b, c in np.ndindex(3, 3, 3):
        assert abs(phases[a, b, c] - z3_cocycle(3, a, b, c)) < 1e-15
    assert cocycle_defect(3, lambda a, b, c: z3_cocycle(3, a, b, c)) < 1e-12


def test_dual_cocycle_passes(dual3):
    assert check_qba(dual3.qha).overall
    assert check_antipode(dual3.qha).overall
    lhs, rhs = pentagon_sides(dual3.qha)
    assert np.max(np.abs(lhs.coeffs - rhs.coeffs)) < 1e-12


def test_perturbed_cocycle_fails_only_pentagon():
    H = example("perturbed_cocycle", 3).qha
    phases = H.coassociator.coeffs
    assert cocycle_defect(3, lambda a, b, c: phases[a, b, c]) > 1e-3
    rep = check_qba(H)
    assert [e.name for e in rep.failed()] == ["pentagon"]
    assert check_antipode(H).overall


def test_wrong_alpha_is_caught(dual3):
    H = dual3.qha
    bad = H.replace(alpha=H.alpha * 2.0)
    failed = {e.name for e in check_antipode(bad).failed()}
    assert "phi-antipode-left" in failed


def test_wrong_coproduct_is_caught(hopf3):
    H = hopf3.qha
    n = H.dim
    cop = np.zeros((n * n, n))
    for g in range(n):
        cop[g * n + 0, g] = 1.0  # Δ(g) = g⊗1 is not multiplicative-compatible with ε
    bad = H.replace(coproduct=LinearMapData(cop))
    assert not check_qba(bad).overall


def test_opposite_structure_passes(s3_full):
    H = opposite(s3_full.qha)
    assert check_qba(H).overall and check_antipode(H).overall


def test_antipode_equivalence_of_gauge(char4, char4_plain):
    # the gauged structure differs from the plain one by (S, vα, βv⁻¹)
    H, H0 = char4.qha, char4_plain.qha
    v = antipode_equivalence_v(H0, H.antipode, H.alpha, H.beta)
    np.testing.assert_allclose((v * H0.alpha).coeffs, H.alpha.coeffs, atol=1e-12)


def test_shape_validation(hopf3):
    H = hopf3.qha
    with pytest.raises(StructureError):
        H.replace(antipode=LinearMapData(np.eye(2)))
    with pytest.raises(StructureError):
        H.replace(alpha=TensorElement(H.algebra, np.zeros((3, 3))))


def test_report_lines_format(dual3):
    rep = check_qba(dual3.qha)
    line = rep.lines()[0]
    assert line.startswith("qba.associativity residual=") and line.endswith("PASS")
    rec = rep.records()[0]
    assert set(rec) == {"name", "residual", "threshold", "pass"}
