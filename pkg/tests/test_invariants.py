"""r-基底・指数列・無理次数のテスト。"""
import pytest

from src.checks.random_towers import RandomTowerGenerator
from src.core.invariants import (
    canonical_rbase,
    degree_identity,
    di,
    di_additivity_check,
    exponent_list,
    exponents_bounded_by,
    exponents_via_subfields,
    frobenius_rbase_check,
    power_chain_check,
    rbase_from_generators,
    transitivity_check,
)
from src.core.tower import adjoin, frobenius_subfield, same_field, trivial_extension


def test_nonmodular_example_exponents(nonmodular):
    crb = canonical_rbase(nonmodular)
    assert crb.exponents == (2, 1)
    assert len(crb) == 2
    assert di(nonmodular) == 2
    assert exponents_via_subfields(nonmodular) == [2, 1]
    assert degree_identity(nonmodular)


def test_trivial_field_has_no_invariants(amb2):
    k = trivial_extension(amb2)
    assert di(k) == 0
    assert canonical_rbase(k).exponents == ()
    assert exponents_via_subfields(k) == []
    assert exponent_list(k, 1) == 0


@pytest.mark.parametrize(
    "gens, expected",
    [
        (["rt(X,2)", "rt(Y,2)"], (2, 2)),
        (["rt(X,2)", "rt(Y,1)", "rt(Z,1)"], (2, 1, 1)),
        (["rt(X,1)", "rt(X,2)"], (2,)),
        (["rt(X,1)", "rt(Y,1)", "rt(X,1) + rt(Y,1)"], (1, 1)),
    ],
)
def test_canonical_exponents_match_subfield_oracle(amb2, tower, gens, expected):
    K = tower(amb2, *gens)
    assert canonical_rbase(K).exponents == expected
    assert tuple(exponents_via_subfields(K)) == expected
    assert di(K) == len(expected)
    assert degree_identity(K)


def test_rbase_prefers_earliest_generator(amb2, tower, el):
    K = tower(amb2, "rt(X,1)", "rt(Y,1)", "rt(X,1) + rt(Y,1)")
    assert rbase_from_generators(K) == [el("rt(X,1)", amb2), el("rt(Y,1)", amb2)]
    L = tower(amb2, "rt(X,2)", "rt(X,1)")
    assert rbase_from_generators(L) == [el("rt(X,2)", amb2)]


def test_exponent_list_beyond_di(nonmodular):
    assert exponent_list(nonmodular, 1) == 2
    assert exponent_list(nonmodular, 2) == 1
    assert exponent_list(nonmodular, 3) == 0


def test_relative_invariants(amb2, tower):
    K = tower(amb2, "rt(X,2)", "rt(Y,1)")
    base = tower(amb2, "rt(X,1)")
    assert di(K, over=base) == 2
    assert canonical_rbase(K, over=base).exponents == (1, 1)


def test_additivity_disjoint(amb2, tower):
    report = di_additivity_check(tower(amb2, "rt(X,2)"), tower(amb2, "rt(Y,1)"))
    assert report.disjoint
    assert report.di_composite == 2
    assert report.bound_holds
    assert report.equality_holds is True
    assert report.exponents_preserved is True
    assert report.to_dict()["di"] == [1, 1, 2]


def test_additivity_overlapping(amb2, tower):
    report = di_additivity_check(tower(amb2, "rt(X,1)"), tower(amb2, "rt(X,1)"))
    assert not report.disjoint
    assert report.di_composite == 1
    assert report.bound_holds
    assert report.equality_holds is None


def test_transitivity(nonmodular, tower):
    L = tower(nonmodular.ambient, "rt(X,2)")
    result = transitivity_check(nonmodular, L)
    assert result == {"di_total": 2, "di_upper": 1, "di_lower": 1, "holds": True}


def test_transitivity_requires_subfield(nonmodular, tower):
    with pytest.raises(ValueError):
        transitivity_check(nonmodular, tower(nonmodular.ambient, "rt(Y,1)"))


def test_power_chain(nonmodular):
    amb = nonmodular.ambient
    L = adjoin(frobenius_subfield(nonmodular, 1), [amb.root("X", 2)])
    assert canonical_rbase(L).exponents == (2,)
    assert power_chain_check(nonmodular, L)
    with pytest.raises(ValueError):
        power_chain_check(nonmodular, trivial_extension(amb))


@pytest.mark.parametrize("n", [0, 1])
def test_frobenius_rbase(nonmodular, n):
    assert frobenius_rbase_check(nonmodular, n)


def test_frobenius_subfield_of_nonmodular(nonmodular, tower):
    assert same_field(frobenius_subfield(nonmodular, 1), tower(nonmodular.ambient, "rt(X,1)"))


@pytest.mark.parametrize(
    "small, large, expected",
    [
        ((1, 1), (2, 1), True),
        ((2,), (2, 1), True),
        ((1, 1, 1), (2, 1), False),
        ((3,), (2, 2), False),
        ((), (), True),
    ],
)
def test_exponents_bounded_by(small, large, expected):
    assert exponents_bounded_by(small, large) is expected


def test_exponents_of_subextensions_are_bounded(nonmodular):
    amb = nonmodular.ambient
    exps = canonical_rbase(nonmodular).exponents
    a = nonmodular.generators[0]
    low = adjoin(trivial_extension(amb), [a.pth_power()])
    assert canonical_rbase(low).exponents == (1,)
    assert canonical_rbase(nonmodular, over=low).exponents == (1, 1)
    for L, base in [(low, None), (nonmodular, low), (nonmodular, None)]:
        assert exponents_bounded_by(canonical_rbase(L, over=base).exponents, exps)


@pytest.mark.parametrize("seed", range(4))
def test_exponents_of_random_subextensions_are_bounded(seed):
    gen = RandomTowerGenerator(seed)
    K = gen.tower().tower
    exps = canonical_rbase(K).exponents
    for _ in range(3):
        L = gen.subfield(K)
        lower = gen.subfield(L)
        assert exponents_bounded_by(canonical_rbase(L).exponents, exps)
        assert exponents_bounded_by(canonical_rbase(L, over=lower).exponents, exps)
