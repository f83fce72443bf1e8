import json

import numpy as np
import pytest

from qhstar import example, random_twist
from qhstar.fileformat import (
    FormatError,
    dumps,
    loads,
    read_structure,
    structure_to_dict,
    twist_from_dict,
    twist_to_dict,
    write_structure,
)


def arrays(S):
    out = [S.qha.algebra.mult, S.qha.algebra.unit, S.qha.coproduct.matrix, S.qha.counit.matrix,
           S.qha.coassociator.coeffs, S.qha.antipode.matrix, S.qha.alpha.coeffs, S.qha.beta.coeffs]
    if S.star is not None:
        out += [S.star.dagger.matrix, S.star.omega.element.coeffs]
    if S.r_matrix is not None:
        out.append(S.r_matrix.element.coeffs)
    return out


@pytest.mark.parametrize("name,params", [("z2_triangular", ()), ("char_twisted_star", (4, 3)),
                                         ("symmetric_group_star", (1, 2, 3)), ("perturbed_cocycle", (3,))])
def test_round_trip_is_bit_exact(tmp_path, name, params):
    S = example(name, *params)
    path = tmp_path / "s.json"
    write_structure(S, path)
    S2 = read_structure(path)
    for a, b in zip(arrays(S), arrays(S2), strict=True):
        assert a.shape == b.shape and np.array_equal(a, b)
        assert a.tobytes() == b.tobytes()
    assert S2.tolerance == S.tolerance
    assert dumps(S2) == path.read_text()


def test_seed_is_recorded():
    doc = structure_to_dict(example("char_twisted_star", 4, 17))
    assert doc["seed"] == 17


def test_optional_sections_gate(hopf3):
    doc = structure_to_dict(hopf3)
    del doc["dagger"], doc["omega"]
    S = loads(json.dumps(doc))
    assert S.star is None and S.r_matrix is None


def mutate(path, value):
    doc = structure_to_dict(example("z2_triangular"))
    node = doc
    for key in path[:-1]:
        node = node[key]
    node[path[-1]] = value
    return json.dumps(doc)


@pytest.mark.parametrize("path,value,field", [
    (["unit"], [[1, 0]], "unit"),
    (["mult", 1, 0], [[1, 0]], "mult[1][0]"),
    (["alpha", 0], [1, 0, 0], "alpha[0]"),
    (["beta", 1], [1, "x"], "beta[1][1]"),
    (["coassociator"], [[1, 0]] * 7, "coassociator"),
    (["dim"], 0, "dim"),
    (["format_version"], "2.0", "format_version"),
    (["tolerance", "atol"], -1, "tolerance.atol"),
    (["extra"], 1, "<root>"),
])
def test_field_diagnostics(path, value, field):
    with pytest.raises(FormatError) as err:
        loads(mutate(path, value))
    assert err.value.field == field
    assert field in str(err.value)


def test_syntax_error_has_line():
    with pytest.raises(FormatError) as err:
        loads('{\n "dim": 2,\n}')
    assert err.value.line == 3


def test_singular_omega_reported():
    text = mutate(["omega"], [[0, 0]] * 4)
    with pytest.raises(FormatError) as err:
        loads(text)
    assert err.value.field == "omega"


def test_twist_round_trip(s3_full, rng):
    F = random_twist(s3_full.qha, rng)
    G = twist_from_dict(json.loads(json.dumps(twist_to_dict(F))), s3_full.algebra)
    assert np.array_equal(F.element.coeffs, G.element.coeffs)
    with pytest.raises(FormatError):
        twist_from_dict({"dim": 2, "twist": []}, s3_full.algebra)
