"""組み込みの塔の族。

各族はレベル n ごとの打ち切り trunc(n) を生成元の列として与え、
レベルごとに機械的に確かめられる主張 (Claim) を持つ。

    simple            k(X^{p^{-n}})
    equiexp           k(X_1^{p^{-n}}, ..., X_t^{p^{-n}})
    theta             θ 塔 K_j の打ち切り（θ_{i,n}, i <= j, n <= レベル）
    nonmodular-example  k(X^{p^{-2}}, X^{p^{-2}}Y^{p^{-1}} + Z^{p^{-1}})（レベルによらない）
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, List, Mapping, Optional, Sequence, Tuple, Union

from src.core.ambient import Ambient, AmbientElement, make_ambient
from src.core.errors import UnknownFamily, UnknownVariable
from src.core.invariants import canonical_rbase
from src.core.modularity import decide_modularity
from src.core.parameters import DEFAULT_P
from src.core.tower import (
    MonomialTower,
    PIExtension,
    adjoin,
    build_extension,
    build_over_monomial,
    contains,
    exponent_over,
    is_subfield,
    same_field,
)
from src.exprparse.evaluator import parse_and_eval

__all__ = [
    "FAMILY_NAMES",
    "Claim",
    "ClaimContext",
    "TowerFamily",
    "family_simple",
    "family_equiexp",
    "family_theta",
    "family_nonmodular_example",
    "make_family",
    "theta",
    "theta_depth",
    "stage",
    "theta_lemma_claims",
    "NONMODULAR_GENERATORS",
]

_logger = logging.getLogger(__name__)

FAMILY_NAMES = ("simple", "equiexp", "theta", "nonmodular-example")


# ---------------------------
# 主張
# ---------------------------

@dataclass(frozen=True)
class Claim:
    """レベルごとに確かめる主張とその結果。

    Attributes:
        name: 主張の識別子（"slice-degree" など）
        statement: 何を確かめたかの説明
        passed: 成り立ったか
        level: 対象のレベル（族全体の主張なら None）
        observed: 観測値（JSON にできる値）
    """

    name: str
    statement: str
    passed: bool
    level: Optional[int] = None
    observed: object = None

    def to_dict(self) -> dict:
        return {
            "claim": self.name,
            "statement": self.statement,
            "level": self.level,
            "passed": self.passed,
            "observed": self.observed,
        }


@dataclass(frozen=True)
class ClaimContext:
    """主張の検査に渡す、診断で計算済みの体。

    Attributes:
        ambient: 作業体
        max_level: 計算した最大レベル
        truncations: レベル n -> trunc(n)
        slices: j -> k_j = k^{p^{-j}} ∩ trunc(max_level)（極小な生成元に組み直したもの）
        slice_exponents: j -> k_j/k の指数列
    """

    ambient: Ambient
    max_level: int
    truncations: Mapping[int, PIExtension]
    slices: Mapping[int, PIExtension] = field(default_factory=dict)
    slice_exponents: Mapping[int, Tuple[int, ...]] = field(default_factory=dict)


# ---------------------------
# 族
# ---------------------------

GeneratorRule = Callable[[Ambient, int], Tuple[AmbientElement, ...]]


@dataclass(frozen=True)
class TowerFamily:
    """打ち切り可能な塔の族。

    Attributes:
        name: 族の名前（CLI の名前と同じ）
        parameters: 族のパラメータ（名前, 値）の組
        p: 標数
        variables: 作業体の変数
        generator_rule: (作業体, レベル) -> trunc(レベル) の生成元
        precision_rule: 最大レベル -> 必要な精度 N
        claim_rule: 計算済みの体から主張の一覧を作る
        fixed: レベルによらず同じ塔か
    """

    name: str
    parameters: Tuple[Tuple[str, object], ...]
    p: int
    variables: Tuple[str, ...]
    generator_rule: GeneratorRule = field(repr=False)
    precision_rule: Callable[[int], int] = field(repr=False)
    claim_rule: Callable[[ClaimContext], List[Claim]] = field(repr=False)
    fixed: bool = False

    def required_precision(self, max_level: int) -> int:
        """max_level までの診断と主張の検査に必要な精度 N。"""
        if max_level < 1:
            raise ValueError("最大レベルは 1 以上です")
        return self.precision_rule(max_level)

    def ambient(self, max_level: int) -> Ambient:
        return make_ambient(self.p, self.variables, self.required_precision(max_level))

    def generators(self, ambient: Ambient, level: int) -> Tuple[AmbientElement, ...]:
        if level < 1:
            raise ValueError("レベルは 1 以上です")
        return self.generator_rule(ambient, level)

    def trunc(self, ambient: Ambient, level: int) -> PIExtension:
        """trunc(level) を塔として組み立てる。"""
        K = build_extension(ambient, self.generators(ambient, level))
        _logger.debug("%s: trunc(%d) の次数 p^%d", self.name, level, K.degree_exponent)
        return K

    def claims(self, context: ClaimContext) -> List[Claim]:
        return self.claim_rule(context)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "p": self.p,
            "parameters": {k: v for k, v in self.parameters},
            "variables": list(self.variables),
        }


def nesting_claims(context: ClaimContext) -> List[Claim]:
    """trunc(n) ⊆ trunc(n+1) を生成元の所属で確かめる。"""
    claims = []
    for n in range(1, context.max_level):
        small, large = context.truncations[n], context.truncations[n + 1]
        claims.append(
            Claim(
                "nesting",
                f"trunc({n}) ⊆ trunc({n + 1})",
                is_subfield(small, large),
                level=n,
            )
        )
    return claims


def _slice_degree_claims(context: ClaimContext, t: int) -> List[Claim]:
    claims = []
    for n, kn in sorted(context.slices.items()):
        claims.append(
            Claim(
                "slice-degree",
                f"[k_{n}:k] = p^{n * t}",
                kn.degree_exponent == n * t,
                level=n,
                observed=[kn.ambient.p, kn.degree_exponent],
            )
        )
        exps = context.slice_exponents.get(n, ())
        claims.append(
            Claim("slice-di", f"di(k_{n}/k) = {t}", len(exps) == t, level=n, observed=len(exps))
        )
    return claims


def _check_variables(variables: Sequence[str]) -> Tuple[str, ...]:
    names = tuple(variables)
    if not names:
        raise UnknownVariable("変数が一つもありません")
    for name in names:
        if not name.isidentifier() or name == "rt":
            raise UnknownVariable(f"変数名として使えません: {name!r}")
    return names


# ---------------------------
# simple / equiexp
# ---------------------------

def family_equiexp(variables: Sequence[str], p: int = DEFAULT_P) -> TowerFamily:
    """trunc(n) = k(X_1^{p^{-n}}, ..., X_t^{p^{-n}})。[k_n:k] = p^{nt}。"""
    names = _check_variables(variables)
    t = len(names)

    def generators(ambient: Ambient, level: int) -> Tuple[AmbientElement, ...]:
        return tuple(parse_and_eval(f"rt({v},{level})", ambient) for v in names)

    def claims(context: ClaimContext) -> List[Claim]:
        return nesting_claims(context) + _slice_degree_claims(context, t)

    return TowerFamily(
        name="equiexp",
        parameters=(("vars", ",".join(names)),),
        p=p,
        variables=names,
        generator_rule=generators,
        precision_rule=lambda max_level: max_level,
        claim_rule=claims,
    )


def family_simple(var: str, p: int = DEFAULT_P) -> TowerFamily:
    """trunc(n) = k(X^{p^{-n}})。"""
    base = family_equiexp([var], p)
    return TowerFamily(
        name="simple",
        parameters=(("var", var),),
        p=p,
        variables=base.variables,
        generator_rule=base.generator_rule,
        precision_rule=base.precision_rule,
        claim_rule=base.claim_rule,
    )


# ---------------------------
# 加群的でない二元生成の例
# ---------------------------

NONMODULAR_GENERATORS = ("rt(X,2)", "rt(X,2)*rt(Y,1)+rt(Z,1)")


def family_nonmodular_example(p: int = DEFAULT_P) -> TowerFamily:
    """K = k(α_1, α_2), α_1 = X^{p^{-2}}, α_2 = X^{p^{-2}}Y^{p^{-1}} + Z^{p^{-1}}。"""

    def generators(ambient: Ambient, level: int) -> Tuple[AmbientElement, ...]:
        return tuple(parse_and_eval(text, ambient) for text in NONMODULAR_GENERATORS)

    def claims(context: ClaimContext) -> List[Claim]:
        amb = context.ambient
        K = context.truncations[context.max_level]
        a1, a2 = K.generators
        crb = canonical_rbase(K)
        verdict = decide_modularity(K)
        relation = a2.pth_power() == parse_and_eval("Y", amb) * a1.pth_power() + parse_and_eval("Z", amb)
        return [
            Claim("exponents", "o_1(K/k) = 2, o_2(K/k) = 1", crb.exponents == (2, 1), observed=list(crb.exponents)),
            Claim("di", "di(K/k) = 2", len(crb) == 2, observed=len(crb)),
            Claim("not-modular", "K/k は加群的でない（二通りの判定が一致）", not verdict.modular,
                  observed=verdict.verdict.value),
            Claim("relation", "α_2^p = Y·α_1^p + Z", relation),
        ]

    return TowerFamily(
        name="nonmodular-example",
        parameters=(),
        p=p,
        variables=("X", "Y", "Z"),
        generator_rule=generators,
        precision_rule=lambda max_level: max(2, max_level),
        claim_rule=claims,
        fixed=True,
    )


# ---------------------------
# θ 塔
# ---------------------------

def theta_variables(j: int) -> Tuple[str, ...]:
    return ("X",) + tuple(f"Z{i}" for i in range(1, j + 1))


def theta_depth(i: int, n: int) -> int:
    """θ_{i,n} に現れる根の最大の深さ 2^{i-1}·n。"""
    return 2 ** (i - 1) * n


@lru_cache(maxsize=None)
def theta(ambient: Ambient, i: int, n: int) -> AmbientElement:
    """θ_{i,n}。

    θ_{1,n} = X^{p^{-n}}
    θ_{i,1} = Z_{i-1}^{p^{-1}}·θ_{i-1,2} + Z_i^{p^{-1}}
    θ_{i,n} = Z_{i-1}^{p^{-1}}·θ_{i-1,2n} + θ_{i,n-1}^{p^{-1}}  (n > 1)
    """
    if i < 1 or n < 1:
        raise ValueError("θ_{i,n} は i, n >= 1 で定義されます")
    if i == 1:
        return ambient.root("X", n)
    head = ambient.root(f"Z{i - 1}", 1) * theta(ambient, i - 1, 2 * n)
    if n == 1:
        return head + ambient.root(f"Z{i}", 1)
    return head + theta(ambient, i, n - 1).pth_root()


def stage(ambient: Ambient, j: int, level: int) -> PIExtension:
    """K_j の打ち切り k(θ_{i,n} : i <= j, n <= level)。K_0 = k。"""
    gens = [theta(ambient, i, n) for i in range(1, j + 1) for n in range(1, level + 1)]
    return build_extension(ambient, gens)


StageField = Union[MonomialTower, PIExtension]


def _stage_field(ambient: Ambient, i: int) -> StageField:
    """K_i の精度 N での近似。

    K_0 = k と K_1 ∩ Ω_N = F_p(X^{p^{-N}}, Z_1, ...) は単項式体なので、その上の塔として持つ。
    i >= 2 は打ち切り K_i-trunc(N / 2^{i-1}) を k 上の塔として組む。
    """
    n = ambient.precision
    if i == 0:
        return build_over_monomial(ambient, 0, [])
    if i == 1:
        return build_over_monomial(ambient, (n,) + (0,) * (len(ambient.base_variables) - 1), [])
    return stage(ambient, i, max(1, n // 2 ** (i - 1)))


def _adjoin_stage(F: StageField, gens: Sequence[AmbientElement]) -> StageField:
    if isinstance(F, MonomialTower):
        return build_over_monomial(F.ambient, F.depth, F.generators + tuple(gens))
    return adjoin(F, gens)


def _truncation_cover(ambient: Ambient, j: int, level: int) -> StageField:
    """trunc(level) を含み K_j に含まれる体。

    j = 2 では θ_{2,n} = θ_{2,level}^{p^{level-n}} - (K_1 の元) なので
    (K_1 ∩ Ω_N)(θ_{2,level}) が trunc(level) を含む。
    """
    if j == 1:
        return build_over_monomial(ambient, (level,) + (0,) * (len(ambient.base_variables) - 1), [])
    if j == 2:
        return _adjoin_stage(_stage_field(ambient, 1), [theta(ambient, 2, level)])
    return stage(ambient, j, level)


def theta_lemma_claims(ambient: Ambient, j: int, max_level: int) -> List[Claim]:
    """θ 塔の打ち切りでの主張。

    各段 i < j と n <= max_level で
        o(θ_{i+1,n}, K_i) = n
        K_i(θ_{i+1,n}) = K_i(θ_{i+1,n+1}^p)
    各レベル l と i <= j で Z_i^{p^{-1}} ∉ trunc(l)。
    """
    claims: List[Claim] = []
    for i in range(j):
        F = _stage_field(ambient, i)
        for n in range(1, max_level + 1):
            t = theta(ambient, i + 1, n)
            o = exponent_over(t, F)
            claims.append(
                Claim("theta-exponent", f"o(θ_{{{i + 1},{n}}}, K_{i}) = {n}", o == n, level=n, observed=o)
            )
            nxt = theta(ambient, i + 1, n + 1).pth_power()
            equal = same_field(_adjoin_stage(F, [t]), _adjoin_stage(F, [nxt]))
            claims.append(
                Claim(
                    "theta-field-equality",
                    f"K_{i}(θ_{{{i + 1},{n}}}) = K_{i}(θ_{{{i + 1},{n + 1}}}^p)",
                    equal,
                    level=n,
                )
            )
    for level in range(1, max_level + 1):
        cover = _truncation_cover(ambient, j, level)
        for i in range(1, j + 1):
            root = ambient.root(f"Z{i}", 1)
            claims.append(
                Claim(
                    "root-exclusion",
                    f"Z{i}^(1/p) ∉ trunc({level})",
                    not contains(root, cover),
                    level=level,
                )
            )
    _logger.info("θ 塔の主張: %d 件中 %d 件が成立", len(claims), sum(c.passed for c in claims))
    return claims


def family_theta(j: int, p: int = DEFAULT_P) -> TowerFamily:
    """θ 塔 K_j の打ち切り。trunc(L) = k(θ_{i,n} : i <= j, n <= L)。

    補題の検査に θ_{j,L+1} を使うので、必要な精度は 2^{j-1}·(L+1)。
    """
    if j < 1:
        raise ValueError("θ 塔の段数 j は 1 以上です")

    def generators(ambient: Ambient, level: int) -> Tuple[AmbientElement, ...]:
        return tuple(theta(ambient, i, n) for i in range(1, j + 1) for n in range(1, level + 1))

    def claims(context: ClaimContext) -> List[Claim]:
        out = nesting_claims(context)
        out += theta_lemma_claims(context.ambient, j, context.max_level)
        for n, exps in sorted(context.slice_exponents.items()):
            out.append(Claim("di-bound", f"di(k_{n}/k) <= {j}", len(exps) <= j, level=n, observed=len(exps)))
        return out

    return TowerFamily(
        name="theta",
        parameters=(("j", j),),
        p=p,
        variables=theta_variables(j),
        generator_rule=generators,
        precision_rule=lambda max_level: theta_depth(j, max_level + 1),
        claim_rule=claims,
    )


# ---------------------------
# 名前からの生成
# ---------------------------

def make_family(
    name: str,
    *,
    p: int = DEFAULT_P,
    var: Optional[str] = None,
    variables: Optional[Sequence[str]] = None,
    j: Optional[int] = None,
) -> TowerFamily:
    """CLI の族の名前とパラメータから TowerFamily を作る。

    Raises:
        UnknownFamily: 未登録の名前
    """
    if name == "simple":
        return family_simple(var or "X", p)
    if name == "equiexp":
        return family_equiexp(variables or ("X", "Y"), p)
    if name == "theta":
        return family_theta(j if j is not None else 2, p)
    if name == "nonmodular-example":
        return family_nonmodular_example(p)
    raise UnknownFamily(f"未登録の族 '{name}'（{', '.join(FAMILY_NAMES)} のいずれか）")
