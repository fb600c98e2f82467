"""F_p 上の多項式・有理関数のテスト。"""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.errors import BadPrime, DivisionByZero, ModulusMismatch, NoRoot, VariableSetMismatch
from src.core.polyfield import MultiPoly, PrimeModulus, RationalFunction, poly_arith, poly_gcd, poly_lcm

VARS = ("X", "Y")


def poly_strategy(p: int):
    exponents = st.tuples(st.integers(0, 3), st.integers(0, 3))
    return st.dictionaries(exponents, st.integers(0, p - 1), max_size=4).map(
        lambda terms: MultiPoly(PrimeModulus(p), VARS, terms)
    )


def nonzero_poly_strategy(p: int):
    return poly_strategy(p).filter(lambda f: not f.is_zero())


def rational_strategy(p: int):
    return st.tuples(poly_strategy(p), nonzero_poly_strategy(p)).map(lambda t: RationalFunction(*t))


@pytest.fixture
def F2():
    return PrimeModulus(2)


@pytest.fixture
def X(F2):
    return MultiPoly.variable(F2, VARS, "X")


@pytest.fixture
def Y(F2):
    return MultiPoly.variable(F2, VARS, "Y")


@pytest.mark.parametrize("p", [0, 1, 4, 9, 101, "2"])
def test_bad_prime(p):
    with pytest.raises(BadPrime):
        PrimeModulus(p)


def test_coefficients_reduced_mod_p():
    f = MultiPoly(PrimeModulus(3), VARS, {(1, 0): 4, (0, 0): 3})
    assert f.terms == {(1, 0): 1}


def test_frobenius_is_additive_in_char_p(X, Y):
    assert (X + Y) ** 2 == X ** 2 + Y ** 2
    assert (X + Y).frobenius() == X ** 2 + Y ** 2


def test_pth_root(X, Y):
    assert (X ** 4 + Y ** 2).pth_root() == X ** 2 + Y
    with pytest.raises(NoRoot):
        (X ** 2 + Y).pth_root()


def test_divmod_exact(X, Y):
    f = (X + Y) * (X * Y + 1)
    q, r = f.divmod(X + Y)
    assert r.is_zero()
    assert q == X * Y + 1
    assert (X + Y).divides(f)


def test_division_by_zero(F2, X):
    with pytest.raises(DivisionByZero):
        X.divmod(MultiPoly.zero(F2, VARS))
    with pytest.raises(DivisionByZero):
        RationalFunction(X, MultiPoly.zero(F2, VARS))


def test_gcd_and_lcm(X, Y):
    a = (X + 1) * (X + Y)
    b = (X + 1) * Y
    assert poly_gcd(a, b) == X + 1
    assert poly_lcm(a, b) == ((X + 1) * (X + Y) * Y).monic()


def test_mismatched_operands(F2, X):
    with pytest.raises(ModulusMismatch):
        X + MultiPoly.variable(PrimeModulus(3), VARS, "X")
    with pytest.raises(VariableSetMismatch):
        X + MultiPoly.variable(F2, ("X", "Z"), "X")


def test_rational_function_normalized(X, Y):
    r = RationalFunction((X + Y) * X, (X + Y) * Y)
    assert r.numerator == X
    assert r.denominator == Y
    assert str(r) == "(X)/(Y)"


def test_rational_function_denominator_monic():
    F3 = PrimeModulus(3)
    X = MultiPoly.variable(F3, VARS, "X")
    r = RationalFunction(X, X.scale(2) + 1)
    _, lc = r.denominator.leading_term()
    assert lc == 1
    assert r * (X.scale(2) + 1) == RationalFunction.from_poly(X)


@pytest.mark.parametrize("op, expected", [("add", "X + Y"), ("mul", "X*Y"), ("div", "(X)/(Y)")])
def test_poly_arith(X, Y, op, expected):
    assert str(poly_arith(X, Y, op)) == expected


def test_poly_arith_unknown_op(X, Y):
    with pytest.raises(ValueError):
        poly_arith(X, Y, "pow")


# ---------------------------
# 性質
# ---------------------------

@given(a=poly_strategy(2), b=poly_strategy(2), c=poly_strategy(2))
@settings(max_examples=50, deadline=None)
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(a=poly_strategy(3), b=poly_strategy(3))
@settings(max_examples=50, deadline=None)
def test_frobenius_is_ring_homomorphism(a, b):
    assert (a + b).frobenius() == a.frobenius() + b.frobenius()
    assert (a * b).frobenius() == a.frobenius() * b.frobenius()
    assert a.frobenius().pth_root() == a


@given(a=nonzero_poly_strategy(2), b=nonzero_poly_strategy(2))
@settings(max_examples=40, deadline=None)
def test_gcd_divides_both(a, b):
    g = poly_gcd(a, b)
    assert g.divides(a)
    assert g.divides(b)


@given(r=rational_strategy(3), s=rational_strategy(3))
@settings(max_examples=40, deadline=None)
def test_field_laws(r, s):
    assert r + s == s + r
    assert (r + s) - s == r
    if not s.is_zero():
        assert (r / s) * s == r
        assert s * s.inverse() == RationalFunction.one(s.modulus, s.variables)
