"""定義方程式・加群性判定・k_j の公式のテスト。"""
import pytest

from src.core.errors import NotModular, NotTensorRBase
from src.core.invariants import canonical_rbase
from src.core.modularity import (
    Verdict,
    composite_modularity_check,
    decide_modularity,
    defining_equations,
    equiexponential_structure_check,
    is_equiexponential,
    is_modular_criterion,
    is_modular_direct,
    is_tensor_rbase,
    kj_modular_formula,
    modularity_stability_suite,
    slice_lift_check,
    verify_defining_equations,
)
from src.core.tower import intersect_with_kpj, same_field


def test_defining_equation_of_nonmodular_example(nonmodular):
    amb = nonmodular.ambient
    eqs = defining_equations(nonmodular)
    assert len(eqs.equations) == 1
    eq = eqs.equations[0]
    assert eq.index == 2
    assert eq.exponent == 1
    assert eq.bounds == (amb.p,)
    assert dict(eq.coefficients) == {(0,): amb.base_variable("Z"), (1,): amb.base_variable("Y")}
    assert verify_defining_equations(nonmodular, eqs)


def test_defining_equation_of_tensor_tower(amb2, tower):
    K = tower(amb2, "rt(X,2)", "rt(Y,1)")
    eq = defining_equations(K).equations[0]
    assert dict(eq.coefficients) == {(0,): amb2.base_variable("Y")}
    assert eq.to_dict()["coefficients"] == {"0": "Y"}


def test_nonmodular_example_both_methods(nonmodular):
    by_criterion = is_modular_criterion(nonmodular)
    by_direct = is_modular_direct(nonmodular)
    assert by_criterion.verdict is Verdict.NOT_MODULAR
    assert by_direct.verdict is Verdict.NOT_MODULAR
    assert by_criterion.criterion_witness.j == 2
    assert by_criterion.criterion_witness.epsilon == (1,)
    assert by_criterion.criterion_witness.coefficient == "Y"
    assert by_direct.disjointness_witness.n == 1
    combined = decide_modularity(nonmodular)
    assert combined.methods_agree
    assert combined.criterion_witness is not None
    assert combined.disjointness_witness is not None
    assert combined.to_dict()["verdict"] == "not_modular"


@pytest.mark.parametrize(
    "gens",
    [
        ["rt(X,2)", "rt(Y,2)"],
        ["rt(X,2)", "rt(X,2)*rt(Y,1)"],
        ["rt(X,1)*rt(Y,1) + rt(Z,1)"],
        ["rt(X,3)", "rt(Y,1)"],
    ],
)
def test_modular_towers(amb2, tower, gens):
    K = tower(amb2, *gens)
    assert is_modular_criterion(K).modular
    assert is_modular_direct(K).modular
    assert decide_modularity(K).methods_agree


def test_equiexponential(amb2, tower, nonmodular):
    assert is_equiexponential(tower(amb2, "rt(X,2)", "rt(Y,2)"))
    assert not is_equiexponential(tower(amb2, "rt(X,2)", "rt(Y,1)"))
    assert not is_equiexponential(nonmodular)


def test_tensor_rbase(amb2, tower, el):
    K = tower(amb2, "rt(X,2)", "rt(X,2)*rt(Y,1)")
    assert is_tensor_rbase(K, [el("rt(X,2)", amb2), el("rt(Y,1)", amb2)])
    assert not is_tensor_rbase(K, list(K.generators))


def test_kj_formula(amb2, tower, el):
    K = tower(amb2, "rt(X,3)", "rt(Y,1)")
    rbase = list(K.generators)
    k1 = kj_modular_formula(K, rbase, 1)
    assert same_field(k1, tower(amb2, "rt(X,1)", "rt(Y,1)"))
    assert same_field(kj_modular_formula(K, rbase, 0), intersect_with_kpj(K, 0))
    assert same_field(kj_modular_formula(K, rbase, 2), intersect_with_kpj(K, 2))


def test_kj_formula_errors(amb2, tower, el, nonmodular):
    with pytest.raises(NotModular):
        kj_modular_formula(nonmodular, list(nonmodular.generators), 1)
    K = tower(amb2, "rt(X,2)", "rt(X,2)*rt(Y,1)")
    with pytest.raises(NotTensorRBase):
        kj_modular_formula(K, list(K.generators), 1)


def test_stability_suite(amb2, tower):
    K = tower(amb2, "rt(X,2)", "rt(Y,2)")
    report = modularity_stability_suite(K, powers=[1, 2])
    assert report["holds"]
    assert report["tensor_rbase"]
    assert report["di_constant"]
    assert report["power_subfield"]["observed"] == [1, 2]
    assert [lv["n"] for lv in report["levels"]] == [1, 2]


def test_stability_suite_rejects_nonmodular(nonmodular):
    with pytest.raises(NotModular):
        modularity_stability_suite(nonmodular)


def test_equiexponential_structure(amb2, tower):
    K = tower(amb2, "rt(X,2)", "rt(Y,2)")
    report = equiexponential_structure_check(K)
    assert report["exponent"] == 2
    assert report["holds"]
    with pytest.raises(ValueError):
        equiexponential_structure_check(tower(amb2, "rt(X,2)", "rt(Y,1)"))


def test_slice_lift(amb2, tower):
    report = slice_lift_check(tower(amb2, "rt(X,2)", "rt(Y,2)"))
    assert report["holds"]
    assert [d["degree"][1] for d in report["degrees"]] == [0, 2, 4]


def test_composite_modularity(amb2, tower, nonmodular):
    report = composite_modularity_check(tower(amb2, "rt(X,2)"), tower(amb2, "rt(Y,1)", "rt(Z,1)"))
    assert report["disjoint"]
    assert report["composite_modular"] is True
    assert report["holds"]


def test_canonical_rbase_is_used_by_default(nonmodular):
    crb = canonical_rbase(nonmodular)
    assert defining_equations(nonmodular, crb) == defining_equations(nonmodular)
