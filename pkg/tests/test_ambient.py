"""作業体 Ω_N の元・座標・指数のテスト。"""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.ambient import (
    coords,
    embed,
    exponent,
    format_element,
    in_kpj,
    in_monomial_field,
    make_ambient,
    monomial_exponent,
)
from src.core.errors import (
    AmbientMismatch,
    DuplicateVariable,
    NoRoot,
    PrecisionExceeded,
    PrecisionLoss,
    UnknownVariable,
)
from src.exprparse.evaluator import parse_and_eval


def test_root_variables_and_degree(amb2):
    assert amb2.root_variables == ("X~", "Y~", "Z~")
    assert amb2.scale == 8
    assert amb2.degree_exponent == 9


def test_duplicate_and_unknown_variable():
    with pytest.raises(DuplicateVariable):
        make_ambient(2, ("X", "X"), 1)
    amb = make_ambient(2, ("X",), 1)
    with pytest.raises(UnknownVariable) as info:
        amb.variable("Y")
    assert "Y" in str(info.value)


def test_root_beyond_precision(amb2):
    with pytest.raises(PrecisionExceeded) as info:
        amb2.root("X", 4)
    assert info.value.required == 4


def test_root_powers_back(amb2):
    r = amb2.root("X", 3)
    assert r.pth_power(3) == amb2.variable("X")
    assert r.pth_power(1) == amb2.root("X", 2)


def test_pth_root_outside_ambient(amb2):
    with pytest.raises(NoRoot) as info:
        amb2.root("Y", 3).pth_root()
    assert info.value.required == 4
    assert not isinstance(info.value, PrecisionExceeded)


def test_pth_root_after_deeper_embedding(amb2):
    root = embed(amb2.root("Y", 3), 4).pth_root()
    assert root.ambient.precision == 4
    assert root == root.ambient.root("Y", 4)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("X", 0),
        ("X*Y + 1", 0),
        ("rt(X,1)", 1),
        ("rt(X,3)*rt(Y,1)", 3),
        ("rt(X,2)^2", 1),
        ("rt(X,1) + rt(X,1)", 0),
        ("1/(rt(X,2) + Y)", 2),
    ],
)
def test_exponent(amb2, text, expected):
    assert exponent(parse_and_eval(text, amb2)) == expected


@pytest.mark.parametrize("j, expected", [(0, False), (1, False), (2, True), (3, True)])
def test_in_kpj(amb2, j, expected):
    x = parse_and_eval("rt(X,2)*rt(Y,1) + Z", amb2)
    assert in_kpj(x, j) is expected


def test_in_kpj_beyond_precision(amb2):
    with pytest.raises(PrecisionExceeded):
        in_kpj(amb2.one(), 4)


def test_monomial_field_depth_per_variable(amb2):
    x = parse_and_eval("rt(X,3) + rt(Y,1)", amb2)
    assert in_monomial_field(x, (3, 1, 0))
    assert not in_monomial_field(x, (3, 0, 0))
    assert monomial_exponent(x, (1, 1, 0)) == 2


def test_from_base_and_to_base(amb2):
    c = amb2.base_variable("X") * amb2.base_variable("Y") + amb2.base_one()
    x = amb2.from_base(c, 2)
    assert x == parse_and_eval("rt(X,2)*rt(Y,2) + 1", amb2)
    assert amb2.to_base(x, 2) == c
    with pytest.raises(NoRoot):
        amb2.to_base(amb2.root("X", 1), 0)


def test_from_base_tuple_depth(amb2):
    c = amb2.base_variable("X") + amb2.base_variable("Z")
    assert amb2.from_base(c, (2, 0, 1)) == parse_and_eval("rt(X,2) + rt(Z,1)", amb2)


def test_coordinates_reconstruct(amb2):
    x = parse_and_eval("X*rt(X,1) + (Y + 1)*rt(Y,2)*rt(Z,1) + 1/(X + rt(Y,1))", amb2)
    for depth in (0, 1, (2, 0, 1)):
        assert coords(x, depth).reconstruct() == x


def test_coordinates_over_k(amb2):
    x = parse_and_eval("X*rt(X,1) + Y", amb2)
    c = coords(x)
    assert len(c.support()) == 2
    assert c.get((0, 0, 0)) == amb2.base_variable("Y")
    assert c.get((4, 0, 0)) == amb2.base_variable("X")


def test_embed(amb2):
    x = parse_and_eval("rt(X,2) + Y", amb2)
    big = embed(x, 5)
    assert big.ambient.precision == 5
    assert big == parse_and_eval("rt(X,2) + Y", amb2.with_precision(5))
    with pytest.raises(PrecisionLoss):
        embed(x, 2)


def test_mixing_ambients(amb2):
    with pytest.raises(AmbientMismatch):
        amb2.one() + amb2.with_precision(2).one()


@pytest.mark.parametrize(
    "text",
    ["rt(X,2)*rt(Y,1) + rt(Z,1)", "(X + rt(Y,3))/(rt(Z,1) + 1)", "2*rt(X,1)^3 + 1"],
)
def test_format_element_reads_back(amb3, text):
    amb = amb3.with_precision(3)
    x = parse_and_eval(text, amb)
    assert parse_and_eval(format_element(x), amb) == x


@given(
    a=st.integers(0, 1),
    b=st.integers(0, 1),
    d1=st.integers(0, 3),
    d2=st.integers(0, 3),
)
@settings(max_examples=30, deadline=None)
def test_frobenius_additive(a, b, d1, d2):
    amb2 = make_ambient(2, ("X", "Y", "Z"), 3)
    x = a * amb2.root("X", d1) + amb2.root("Y", d2)
    y = amb2.root("Z", d1) + b
    assert (x + y).pth_power() == x.pth_power() + y.pth_power()
    assert exponent(x * y) <= max(exponent(x), exponent(y))


# ---------------------------
# 性質（乱数の元）
# ---------------------------

_TERMS = st.lists(
    st.tuples(st.sampled_from("XYZ"), st.integers(0, 3), st.integers(1, 3)),
    min_size=1,
    max_size=4,
)


def _element(amb, terms):
    """Σ rt(V, d)^e の形の元。"""
    x = amb.zero()
    for name, depth, power in terms:
        x = x + amb.root(name, depth) ** power
    return x


_SCALARS = {
    "X": lambda amb: amb.base_variable("X"),
    "Y+1": lambda amb: amb.base_variable("Y") + amb.base_one(),
    "XZ": lambda amb: amb.base_variable("X") * amb.base_variable("Z"),
}


def _in_base_field(x):
    """座標が剰余類 0 だけにあれば k の元。"""
    return set(coords(x).support()) <= {(0, 0, 0)}


@given(terms=_TERMS, j=st.integers(0, 3))
@settings(max_examples=60, deadline=None)
def test_in_kpj_matches_iterated_power(terms, j):
    amb = make_ambient(2, ("X", "Y", "Z"), 3)
    x = _element(amb, terms)
    assert in_kpj(x, j) == _in_base_field(x.pth_power(j))


@given(terms=_TERMS, other=_TERMS, depth=st.integers(0, 1), a=st.sampled_from(sorted(_SCALARS)))
@settings(max_examples=30, deadline=None)
def test_coords_are_linear_over_coefficient_field(terms, other, depth, a):
    amb = make_ambient(2, ("X", "Y", "Z"), 3)
    x, y = _element(amb, terms), _element(amb, other)
    c = _SCALARS[a](amb)
    scalar = amb.from_base(c, depth)

    combined = coords(scalar * x + y, depth)
    cx, cy = coords(x, depth), coords(y, depth)
    for r in set(combined.support()) | set(cx.support()) | set(cy.support()):
        assert combined.get(r) == c * cx.get(r) + cy.get(r)


@given(terms=_TERMS, other=_TERMS, target=st.integers(3, 5))
@settings(max_examples=30, deadline=None)
def test_embed_commutes_with_arithmetic_and_coords(terms, other, target):
    amb = make_ambient(2, ("X", "Y", "Z"), 3)
    x, y = _element(amb, terms), _element(amb, other)
    assert embed(x * y + x, target) == embed(x, target) * embed(y, target) + embed(x, target)
    assert embed(x.pth_power(), target) == embed(x, target).pth_power()

    scale = 2 ** (target - 3)
    small, big = coords(x), coords(embed(x, target))
    assert len(big.support()) == len(small.support())
    for r, c in small:
        assert big.get(tuple(ri * scale for ri in r)) == c
