"""塔の組み立て・所属判定・部分体の演算のテスト。"""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.ambient import coords, make_ambient
from src.core.errors import NotMember, PrecisionExceeded
from src.core.tower import (
    Subspace,
    adjoin,
    build_extension,
    build_over_monomial,
    build_relative,
    contains,
    exponent_over,
    frobenius_subfield,
    intersect_with_kpj,
    is_subfield,
    kpj_by_class_filter,
    member,
    relative_basis,
    same_field,
    subspace_equal,
    subspace_intersect,
    subspace_sum,
    trivial_extension,
)
from src.exprparse.evaluator import parse_and_eval


def test_trivial_extension(amb2):
    k = trivial_extension(amb2)
    assert k.degree == (2, 0)
    assert k.is_trivial()
    assert contains(amb2.variable("X"), k)
    assert not contains(amb2.root("X", 1), k)


def test_degree_and_steps(amb2, tower):
    K = tower(amb2, "rt(X,2)", "rt(X,1)", "rt(Y,1)")
    assert K.step_exponents == (2, 0, 1)
    assert K.redundant == (False, True, False)
    assert K.degree == (2, 3)
    assert len(K.basis) == 8
    assert K.exponent == 2


def test_nonmodular_degree(nonmodular):
    assert nonmodular.step_exponents == (2, 1)
    assert nonmodular.degree_exponent == 3


def test_member_coefficients(amb2, tower, el):
    K = tower(amb2, "rt(X,1)", "rt(Y,1)")
    x = el("Y*rt(X,1)*rt(Y,1) + Z", amb2)
    coefficients = member(x, K)
    rebuilt = sum(
        (amb2.from_base(c) * b for c, b in zip(coefficients, K.basis)),
        amb2.zero(),
    )
    assert rebuilt == x


def test_member_rejects(amb2, tower, el):
    K = tower(amb2, "rt(X,1)")
    with pytest.raises(NotMember):
        member(el("rt(Y,1)", amb2), K)
    assert not contains(el("rt(X,2)", amb2), K)


@pytest.mark.parametrize(
    "gens, text, expected",
    [
        (["rt(X,1)"], "rt(X,3)", 2),
        (["rt(X,2)*rt(Y,1) + rt(Z,1)"], "rt(Z,1)", 1),
        (["rt(X,2)", "rt(X,2)*rt(Y,1) + rt(Z,1)"], "rt(Z,1)", 1),
        (["rt(X,2)", "rt(Y,1)"], "rt(X,1)*rt(Y,1)", 0),
    ],
)
def test_exponent_over(amb2, tower, el, gens, text, expected):
    assert exponent_over(el(text, amb2), tower(amb2, *gens)) == expected


def test_generator_order_gives_same_field(amb2, tower):
    K = tower(amb2, "rt(X,2)", "rt(X,2)*rt(Y,1) + rt(Z,1)")
    L = tower(amb2, "rt(X,2)*rt(Y,1) + rt(Z,1)", "rt(X,2)")
    assert same_field(K, L)
    assert K.degree_exponent == L.degree_exponent


def test_subfields(amb2, tower):
    K = tower(amb2, "rt(X,2)", "rt(Y,1)")
    L = tower(amb2, "rt(X,1)")
    assert is_subfield(L, K)
    assert not is_subfield(K, L)
    assert same_field(adjoin(L, K.generators), K)


def test_frobenius_subfield(amb2, tower):
    K = tower(amb2, "rt(X,2)", "rt(Y,1)")
    F = frobenius_subfield(K, 1)
    assert same_field(F, tower(amb2, "rt(X,1)"))
    assert frobenius_subfield(K, 2).is_trivial()
    assert frobenius_subfield(K, 0) is K


def test_relative_tower(amb2, tower):
    K = tower(amb2, "rt(X,2)", "rt(Y,1)")
    base = tower(amb2, "rt(X,1)")
    rel = build_relative(base, K.generators)
    assert rel.degree_exponent == 2
    assert len(relative_basis(K, base)) == 4
    with pytest.raises(NotMember):
        relative_basis(K, tower(amb2, "rt(Z,1)"))


def test_subspace_operations(amb2, tower):
    A = tower(amb2, "rt(X,1)").subspace
    B = tower(amb2, "rt(Y,1)").subspace
    assert subspace_intersect(A, B).dim == 1
    assert subspace_sum(A, B).dim == 3
    assert subspace_equal(subspace_sum(A, A), A)


_ELEMENTS = st.lists(
    st.lists(st.tuples(st.sampled_from("XYZ"), st.integers(0, 2), st.integers(1, 3)), min_size=1, max_size=3),
    min_size=0,
    max_size=3,
)


def _span(amb, elements):
    vectors = []
    for terms in elements:
        x = amb.zero()
        for name, depth, power in terms:
            x = x + amb.root(name, depth) ** power
        vectors.append(coords(x))
    return Subspace.span(amb, vectors)


@given(a=_ELEMENTS, b=_ELEMENTS)
@settings(max_examples=30, deadline=None)
def test_intersection_and_sum_dimensions(a, b):
    amb = make_ambient(2, ("X", "Y", "Z"), 2)
    A, B = _span(amb, a), _span(amb, b)
    meet, join = subspace_intersect(A, B), subspace_sum(A, B)
    assert meet.dim + join.dim == A.dim + B.dim
    for v in meet.vectors():
        assert A.contains(v) and B.contains(v)


@pytest.mark.parametrize(
    "left, right, meet",
    [
        (["rt(X,1)"], ["rt(Y,1)"], 1),
        (["rt(X,2)"], ["rt(X,1)", "rt(Y,1)"], 2),
        (["rt(X,2)*rt(Y,1) + rt(Z,1)"], ["rt(X,1)", "rt(Y,1)", "rt(Z,1)"], 2),
    ],
)
def test_field_intersection_dimensions(amb2, tower, left, right, meet):
    A = tower(amb2, *left).subspace
    B = tower(amb2, *right).subspace
    assert subspace_intersect(A, B).dim == meet
    assert subspace_intersect(A, B).dim + subspace_sum(A, B).dim == A.dim + B.dim


@pytest.mark.parametrize("j, expected", [(0, 0), (1, 1), (2, 3)])
def test_intersect_with_kpj(nonmodular, j, expected):
    kj = intersect_with_kpj(nonmodular, j)
    assert kj.degree_exponent == expected
    assert subspace_equal(kj.subspace, kpj_by_class_filter(nonmodular, j))


def test_k1_of_nonmodular_example(nonmodular):
    amb = nonmodular.ambient
    k1 = intersect_with_kpj(nonmodular, 1)
    assert same_field(k1, build_extension(amb, [parse_and_eval("rt(X,1)", amb)]))
    assert contains(parse_and_eval("rt(X,1)*Y + Z", amb), k1)
    assert not contains(parse_and_eval("rt(Y,1)", amb), k1)


def test_intersect_beyond_precision(amb2, tower):
    with pytest.raises(PrecisionExceeded):
        intersect_with_kpj(tower(amb2, "rt(X,1)"), 4)


def test_intersect_shortcut_returns_same_tower(amb2, tower):
    K = tower(amb2, "rt(X,1)", "rt(Y,1)")
    assert intersect_with_kpj(K, 1) is K


def test_monomial_tower(amb2, el):
    F = build_over_monomial(amb2, (1, 0, 0), [el("rt(X,2)*rt(Y,1) + rt(Z,1)", amb2)])
    assert F.depth == (1, 0, 0)
    assert F.degree_exponent == 1
    assert contains(el("rt(X,1)", amb2), F)
    assert contains(el("rt(X,2)*rt(Y,1) + rt(Z,1)", amb2), F)
    assert exponent_over(el("rt(X,3)", amb2), F) == 2
    G = build_over_monomial(amb2, (1, 0, 0), [el("rt(X,1)*Y + Z", amb2)])
    assert G.degree_exponent == 0
