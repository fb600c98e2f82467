"""族の打ち切り・U 表・θ 塔のテスト。"""
import matplotlib

matplotlib.use("Agg")

import numpy as np  # noqa: E402
import pytest  # noqa: E402

from src.core.ambient import make_ambient  # noqa: E402
from src.core.errors import PrecisionExceeded, UnknownFamily, UnknownVariable  # noqa: E402
from src.exprparse.evaluator import parse_and_eval  # noqa: E402
from src.families.diagnostics import classify_row, family_diagnose, u_table  # noqa: E402
from src.families.families import (  # noqa: E402
    FAMILY_NAMES,
    family_equiexp,
    family_nonmodular_example,
    family_simple,
    family_theta,
    make_family,
    theta,
    theta_depth,
    theta_lemma_claims,
    theta_variables,
)
from src.families.visualization import save_u_table  # noqa: E402


def test_u_table_values():
    table = u_table([(1,), (2, 1)])
    np.testing.assert_array_equal(table, np.array([[0, 0], [1, 1], [1, 2]]))


@pytest.mark.parametrize(
    "row, expected",
    [
        ([0, 0, 0], "constant"),
        ([1, 2, 3], "increasing"),
        ([0, 1, 1], "mixed"),
        ([2], "constant"),
    ],
)
def test_classify_row(row, expected):
    assert classify_row(np.array(row)) == expected


def test_simple_family():
    diag = family_diagnose(family_simple("X"), 4)
    assert diag.precision == 4
    assert diag.truncation_degrees == (1, 2, 3, 4)
    assert diag.di_by_level == [1, 1, 1, 1]
    assert diag.degree_by_level == [(2, 1), (2, 2), (2, 3), (2, 4)]
    np.testing.assert_array_equal(diag.table[0], [0, 0, 0, 0])
    np.testing.assert_array_equal(diag.table[1], [1, 2, 3, 4])
    assert diag.row_classes == ("constant", "increasing")
    assert diag.monotone and diag.bounded
    assert diag.ilqm_candidate == 2
    assert diag.e_estimate == 0
    assert diag.all_claims_pass


def test_equiexp_family():
    diag = family_diagnose(family_equiexp(["X", "Y"]), 3)
    assert diag.p == 2
    assert [e for _, e in diag.degree_by_level] == [2, 4, 6]
    assert np.all(diag.table[:2] == 0)
    assert diag.ilqm_candidate == 3
    assert diag.all_claims_pass


def test_nonmodular_family():
    diag = family_diagnose(family_nonmodular_example(), 2)
    assert diag.truncation_degrees == (3, 3)
    assert [s.exponents for s in diag.slices] == [(1,), (2, 1)]
    np.testing.assert_array_equal(diag.table, np.array([[0, 0], [1, 1], [1, 2]]))
    assert diag.row_classes == ("constant", "constant", "increasing")
    assert diag.e_estimate == 1
    names = {c.name: c.passed for c in diag.claims}
    assert names["not-modular"] and names["exponents"] and names["relation"]


def test_precision_too_small():
    with pytest.raises(PrecisionExceeded) as info:
        family_diagnose(family_simple("X"), 3, precision=2)
    assert info.value.required == 3


def test_larger_precision_is_accepted():
    diag = family_diagnose(family_simple("X"), 2, precision=4)
    assert diag.precision == 4
    assert diag.truncation_degrees == (1, 2)


def test_make_family():
    assert {make_family(name).name for name in FAMILY_NAMES} == set(FAMILY_NAMES)
    assert make_family("equiexp", variables=["U", "V"]).variables == ("U", "V")
    assert make_family("theta", j=1).variables == ("X", "Z1")
    with pytest.raises(UnknownFamily):
        make_family("spiral")


@pytest.mark.parametrize("variables", [[], ["rt"], ["1X"]])
def test_bad_family_variables(variables):
    with pytest.raises(UnknownVariable):
        family_equiexp(variables)


def test_bad_levels():
    with pytest.raises(ValueError):
        family_theta(0)
    with pytest.raises(ValueError):
        family_simple("X").required_precision(0)


def test_theta_elements():
    assert theta_depth(1, 3) == 3
    assert theta_depth(2, 4) == 8
    assert theta_variables(2) == ("X", "Z1", "Z2")
    amb = make_ambient(2, theta_variables(2), 4)
    assert theta(amb, 1, 2) == amb.root("X", 2)
    assert theta(amb, 2, 1) == parse_and_eval("rt(Z1,1)*rt(X,2) + rt(Z2,1)", amb)
    assert theta(amb, 2, 2) == parse_and_eval("rt(Z1,1)*rt(X,4) + rt(rt(Z1,1)*rt(X,2) + rt(Z2,1), 1)", amb)
    with pytest.raises(ValueError):
        theta(amb, 0, 1)


def test_theta_one_stage_family():
    diag = family_diagnose(family_theta(1), 2)
    assert diag.precision == 3
    assert diag.all_claims_pass
    assert any("S_i" in note for note in diag.caveats())


@pytest.mark.slow
def test_theta_two_stage_claims():
    family = family_theta(2)
    claims = theta_lemma_claims(family.ambient(2), 2, 2)
    failed = [c.statement for c in claims if not c.passed]
    assert not failed
    assert {c.name for c in claims} == {"theta-exponent", "theta-field-equality", "root-exclusion"}


def test_diagnostics_to_dict():
    data = family_diagnose(family_simple("X"), 2).to_dict()
    assert data["family"] == {"name": "simple", "p": 2, "parameters": {"var": "X"}, "variables": ["X"]}
    assert data["u_table"]["values"] == [[0, 0], [1, 2]]
    assert data["u_table"]["rows"] == ["s=1", "s=2"]
    assert len(data["caveats"]) == 2


def test_save_u_table(tmp_path):
    diag = family_diagnose(family_simple("X"), 2)
    path = save_u_table(diag, str(tmp_path / "u.png"))
    assert (tmp_path / "u.png").exists()
    assert path.endswith("u.png")
