"""定義方程式・加群性 (modularity) の二通りの判定・等指数性・k_j の公式。

* 判定法 1（係数判定）: 定義方程式の係数 C_ε が K^{p^{m_j}} に入るか。
* 判定法 2（直接判定）: 各 n について K^{p^n} と k が共通部分上で線形無関連か。
  Frobenius 同型 x ↦ x^{p^{-n}} で移して、K と k^{p^{-n}} が k_n 上で線形無関連かを
  k_n 上の基底の k^{p^{-n}} 上の一次独立性で調べる。
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .ambient import AmbientElement, coords, exponent, format_base, format_element
from .errors import InternalInconsistency, NotModular, NotTensorRBase
from .invariants import CanonicalRBase, canonical_rbase, di, rbase_from_generators
from .linalg import solve_linear
from .polyfield import RationalFunction
from .tower import (
    PIExtension,
    build_extension,
    build_relative,
    contains,
    exponent_over,
    frobenius_subfield,
    intersect_with_kpj,
    same_field,
)

__all__ = [
    "Verdict",
    "DefiningEquation",
    "DefiningEquations",
    "CriterionWitness",
    "DisjointnessWitness",
    "ModularityReport",
    "defining_equations",
    "verify_defining_equations",
    "is_modular_criterion",
    "is_modular_direct",
    "decide_modularity",
    "is_equiexponential",
    "kj_modular_formula",
    "is_tensor_rbase",
    "modularity_stability_suite",
    "equiexponential_structure_check",
    "slice_lift_check",
    "composite_modularity_check",
]

_logger = logging.getLogger(__name__)

Epsilon = Tuple[int, ...]


class Verdict(str, Enum):
    MODULAR = "modular"
    NOT_MODULAR = "not_modular"


# ---------------------------
# 定義方程式
# ---------------------------

@dataclass(frozen=True)
class DefiningEquation:
    """α_j^{p^{m_j}} = Σ_ε C_ε · (α_1..α_{j-1})^{p^{m_j}·ε}。

    Attributes:
        index: j（1 始まり）
        exponent: m_j
        bounds: ε_t の上限 p^{m_t - m_j}（t < j）
        coefficients: ε → C_ε ∈ k（非ゼロのみ）
    """

    index: int
    exponent: int
    bounds: Tuple[int, ...]
    coefficients: Mapping[Epsilon, RationalFunction]

    def epsilons(self) -> List[Epsilon]:
        """Λ_j を辞書式の降順に並べたもの。"""
        return sorted(itertools.product(*(range(b) for b in self.bounds)), reverse=True)

    def coefficient(self, eps: Epsilon) -> Optional[RationalFunction]:
        return self.coefficients.get(tuple(eps))

    def to_dict(self) -> dict:
        return {
            "j": self.index,
            "m_j": self.exponent,
            "bounds": list(self.bounds),
            "coefficients": {
                ",".join(map(str, eps)): str(c) for eps, c in sorted(self.coefficients.items())
            },
        }


@dataclass(frozen=True)
class DefiningEquations:
    rbase: CanonicalRBase
    equations: Tuple[DefiningEquation, ...]

    def to_dict(self) -> dict:
        return {
            "rbase": self.rbase.to_dict(),
            "equations": [eq.to_dict() for eq in self.equations],
        }


def _monomial(gens: Sequence[AmbientElement], power: int, eps: Epsilon) -> AmbientElement:
    out = gens[0].ambient.one() if gens else None
    for g, e in zip(gens, eps):
        if e:
            out = out * g.pth_power(power) ** e
    return out


def defining_equations(K: PIExtension, crb: Optional[CanonicalRBase] = None) -> DefiningEquations:
    """j >= 2 の各標準生成元について α_j^{p^{m_j}} を
    k(α_1^{p^{m_j}}, ..., α_{j-1}^{p^{m_j}}) の単項式基底で表す。

    Raises:
        InternalInconsistency: 解が無い・一意でない
    """
    crb = crb or canonical_rbase(K)
    amb = K.ambient
    gens, exps = crb.generators, crb.exponents
    equations = []
    for j in range(1, len(gens)):
        m = exps[j]
        bounds = tuple(amb.p ** (exps[t] - m) for t in range(j))
        eps_list = sorted(itertools.product(*(range(b) for b in bounds)))
        columns = [coords(_monomial(gens[:j], m, eps)) for eps in eps_list]
        target = coords(gens[j].pth_power(m))
        classes = sorted({r for c in columns for r in c.classes} | set(target.classes))
        matrix = [[c.get(r) for c in columns] for r in classes]
        rhs = [target.get(r) for r in classes]
        sol = solve_linear(matrix, rhs)
        if not sol.consistent or sol.kernel:
            raise InternalInconsistency(
                f"α_{j + 1}^(p^{m}) の定義方程式が一意に解けません（解 {sol.consistent}, 核 {len(sol.kernel)}）"
            )
        coefficients = {eps: c for eps, c in zip(eps_list, sol.solution) if not c.is_zero()}
        equations.append(DefiningEquation(j + 1, m, bounds, coefficients))
        _logger.debug("定義方程式 j=%d: %s", j + 1, {k: str(v) for k, v in coefficients.items()})
    return DefiningEquations(crb, tuple(equations))


def verify_defining_equations(K: PIExtension, eqs: DefiningEquations) -> bool:
    """Σ C_ε·単項式 を計算し直して α_j^{p^{m_j}} と比べる。"""
    amb = K.ambient
    gens = eqs.rbase.generators
    for eq in eqs.equations:
        j = eq.index - 1
        total = amb.zero()
        for eps, c in eq.coefficients.items():
            total = total + amb.from_base(c) * _monomial(gens[:j], eq.exponent, eps)
        if total != gens[j].pth_power(eq.exponent):
            return False
    return True


# ---------------------------
# 判定結果
# ---------------------------

@dataclass(frozen=True)
class CriterionWitness:
    """C_ε^{p^{-m_j}} ∉ K となった係数。"""

    j: int
    epsilon: Epsilon
    coefficient: str
    root_depth: int
    root: str

    def to_dict(self) -> dict:
        return {
            "j": self.j,
            "epsilon": list(self.epsilon),
            "coefficient": self.coefficient,
            "root_depth": self.root_depth,
            "root_not_in_K": self.root,
        }


@dataclass(frozen=True)
class DisjointnessWitness:
    """k_n 上の基底が k^{p^{-n}} 上一次従属になった関係式 Σ c_i b_i = 0。"""

    n: int
    basis: Tuple[str, ...]
    relation: Tuple[str, ...]

    def to_dict(self) -> dict:
        return {"n": self.n, "basis": list(self.basis), "relation": list(self.relation)}


@dataclass(frozen=True)
class ModularityReport:
    verdict: Verdict
    criterion_witness: Optional[CriterionWitness] = None
    disjointness_witness: Optional[DisjointnessWitness] = None
    methods_agree: Optional[bool] = None

    @property
    def modular(self) -> bool:
        return self.verdict is Verdict.MODULAR

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "methods_agree": self.methods_agree,
            "criterion_witness": self.criterion_witness.to_dict() if self.criterion_witness else None,
            "disjointness_witness": (
                self.disjointness_witness.to_dict() if self.disjointness_witness else None
            ),
        }


# ---------------------------
# 判定法
# ---------------------------

def is_modular_criterion(K: PIExtension, crb: Optional[CanonicalRBase] = None) -> ModularityReport:
    """係数判定: 全ての j, ε で C_ε ∈ k ∩ K^{p^{m_j}} なら加群的。

    j の昇順、ε は高い単項式から順に調べ、最初に失敗した係数を証拠にする。
    """
    amb = K.ambient
    eqs = defining_equations(K, crb)
    for eq in eqs.equations:
        for eps in eq.epsilons():
            c = eq.coefficient(eps)
            if c is None:
                continue
            root = amb.from_base(c).pth_root(eq.exponent)
            if not contains(root, K):
                witness = CriterionWitness(eq.index, eps, str(c), eq.exponent, format_element(root))
                _logger.info("係数判定: j=%d, ε=%s, C=%s の根が K にない", eq.index, eps, c)
                return ModularityReport(Verdict.NOT_MODULAR, criterion_witness=witness)
    return ModularityReport(Verdict.MODULAR)


def is_modular_direct(K: PIExtension) -> ModularityReport:
    """直接判定: n = 1..o_1(K/k) で K と k^{p^{-n}} が k_n 上線形無関連か。"""
    amb = K.ambient
    for n in range(1, K.exponent + 1):
        kn = intersect_with_kpj(K, n)
        rel = build_relative(kn, K.generators)
        vectors = [coords(b, depth=n) for b in rel.basis]
        classes = sorted({r for v in vectors for r in v.classes})
        matrix = [[v.get(r) for v in vectors] for r in classes]
        sol = solve_linear(matrix, None)
        if sol.kernel:
            relation = sol.kernel[0]
            witness = DisjointnessWitness(
                n,
                tuple(format_element(b) for b in rel.basis),
                tuple(format_base(c, amb, n) for c in relation),
            )
            _logger.info("直接判定: n=%d で k_n 上の基底が一次従属", n)
            return ModularityReport(Verdict.NOT_MODULAR, disjointness_witness=witness)
    return ModularityReport(Verdict.MODULAR)


def decide_modularity(K: PIExtension) -> ModularityReport:
    """二通りの判定を行い、結果を一つにまとめる。

    Raises:
        InternalInconsistency: 二つの判定が食い違った
    """
    by_criterion = is_modular_criterion(K)
    by_direct = is_modular_direct(K)
    agree = by_criterion.verdict is by_direct.verdict
    if not agree:
        raise InternalInconsistency(
            f"加群性の判定が食い違いました: 係数判定 {by_criterion.verdict.value}, "
            f"直接判定 {by_direct.verdict.value}"
        )
    return ModularityReport(
        by_criterion.verdict,
        criterion_witness=by_criterion.criterion_witness,
        disjointness_witness=by_direct.disjointness_witness,
        methods_agree=agree,
    )


# ---------------------------
# 等指数性・テンソル r-基底
# ---------------------------

def is_equiexponential(K: PIExtension) -> bool:
    """取り出した r-基底 G の各 a で o(a, k(G∖{a})) = o(a, k) = o_1(K/k) か。"""
    G = rbase_from_generators(K)
    e = K.exponent
    for i, a in enumerate(G):
        if exponent(a) != e:
            return False
        others = build_extension(K.ambient, G[:i] + G[i + 1:])
        if exponent_over(a, others) != e:
            return False
    return True


def is_tensor_rbase(K: PIExtension, rbase: Sequence[AmbientElement]) -> bool:
    """k(rbase) = K かつ [K:k] = Π p^{o(a,k)}。"""
    if sum(exponent(a) for a in rbase) != K.degree_exponent:
        return False
    return same_field(build_extension(K.ambient, list(rbase)), K)


def _require_tensor(K: PIExtension, rbase: Sequence[AmbientElement]) -> None:
    if is_tensor_rbase(K, rbase):
        return
    if not is_modular_criterion(K).modular:
        raise NotModular("K/k は加群的ではありません")
    raise NotTensorRBase("与えられた r-基底はテンソル条件 [K:k] = Π p^{o(a,k)} を満たしません")


def kj_modular_formula(K: PIExtension, modular_rbase: Sequence[AmbientElement], j: int) -> PIExtension:
    """加群的な K について k_j = k((a^{p^{n_a-j}})_{n_a > j}, (a)_{n_a <= j})。

    結果は intersect_with_kpj(K, j) と部分空間として照合する。

    Raises:
        NotModular: K/k が加群的でない
        NotTensorRBase: modular_rbase がテンソル条件を満たさない
        InternalInconsistency: 公式と直接計算が食い違った
    """
    _require_tensor(K, modular_rbase)
    gens = []
    for a in modular_rbase:
        n_a = exponent(a)
        gens.append(a.pth_power(n_a - j) if n_a > j else a)
    result = build_extension(K.ambient, gens)
    if not same_field(result, intersect_with_kpj(K, j)):
        raise InternalInconsistency(f"k_{j} の公式が直接の共通部分と一致しません")
    return result


# ---------------------------
# 安定性
# ---------------------------

def _default_powers(rbase: Sequence[AmbientElement]) -> List[int]:
    """べき部分体の検査に使う指数 e_a: 1, 2, ... を各 n_a で折り返す。"""
    out = []
    for i, a in enumerate(rbase):
        n_a = exponent(a)
        out.append(1 + i % n_a if n_a else 0)
    return out


def modularity_stability_suite(
    K: PIExtension,
    modular_rbase: Optional[Sequence[AmbientElement]] = None,
    powers: Optional[Sequence[int]] = None,
) -> Dict[str, object]:
    """加群的な K について、部分拡大の加群性とべき部分体の指数を確かめる。

    * 各 n で k_n/k と k(K^{p^n})/k が加群的
    * テンソル r-基底 B と e_a について L = k((a^{p^{e_a}})_a) で o(a, L) = e_a
    * di(k_n/k) が n によらない
    """
    if not decide_modularity(K).modular:
        raise NotModular("K/k は加群的ではありません")
    rbase = list(modular_rbase) if modular_rbase is not None else list(canonical_rbase(K).generators)
    levels = []
    for n in range(1, K.exponent + 1):
        kn = intersect_with_kpj(K, n)
        levels.append(
            {
                "n": n,
                "k_n_modular": is_modular_direct(kn).modular,
                "frobenius_subfield_modular": is_modular_direct(frobenius_subfield(K, n)).modular,
                "di_k_n": di(kn),
            }
        )
    tensor = is_tensor_rbase(K, rbase)
    power_check = None
    if tensor and rbase:
        e = list(powers) if powers is not None else _default_powers(rbase)
        L = build_extension(K.ambient, [a.pth_power(ea) for a, ea in zip(rbase, e)])
        observed = [exponent_over(a, L) for a in rbase]
        power_check = {"powers": e, "observed": observed, "holds": observed == e}
    di_values = [lv["di_k_n"] for lv in levels]
    return {
        "levels": levels,
        "tensor_rbase": tensor,
        "power_subfield": power_check,
        "di_constant": len(set(di_values)) <= 1,
        "holds": all(lv["k_n_modular"] and lv["frobenius_subfield_modular"] for lv in levels)
        and (power_check is None or power_check["holds"])
        and (not tensor or len(set(di_values)) <= 1),
    }


def equiexponential_structure_check(K: PIExtension) -> Dict[str, object]:
    """等指数 e の K について 1 <= i <= e で
    k_i/k, k(K^{p^i})/k が等指数（指数 i, e-i）、K/k_i, K/k(K^{p^i}) の相対指数列が定数 e-i, i か。
    """
    if not is_equiexponential(K):
        raise ValueError("K/k は等指数ではありません")
    e = K.exponent
    rows = []
    for i in range(1, e + 1):
        ki = intersect_with_kpj(K, i)
        fi = frobenius_subfield(K, i)
        rel_k = canonical_rbase(K, over=ki).exponents
        rel_f = canonical_rbase(K, over=fi).exponents
        row = {
            "i": i,
            "k_i_equiexponential": is_equiexponential(ki) and ki.exponent == i,
            "frobenius_equiexponential": fi.is_trivial() or (is_equiexponential(fi) and fi.exponent == e - i),
            "upper_over_k_i": list(rel_k),
            "upper_over_frobenius": list(rel_f),
        }
        row["holds"] = (
            row["k_i_equiexponential"]
            and row["frobenius_equiexponential"]
            and all(x == e - i for x in rel_k)
            and all(x == i for x in rel_f)
        )
        rows.append(row)
    return {"exponent": e, "rows": rows, "holds": all(r["holds"] for r in rows)}


def slice_lift_check(K: PIExtension) -> Dict[str, object]:
    """等指数の K について k(k_m^{p^{m-n}}) = k_n (n < m <= e) と [k_n:k] = p^{n·di}。"""
    e = K.exponent
    t = di(K)
    slices = {n: intersect_with_kpj(K, n) for n in range(0, e + 1)}
    lifts = []
    for m in range(1, e + 1):
        for n in range(0, m):
            lifted = frobenius_subfield(slices[m], m - n)
            lifts.append({"m": m, "n": n, "holds": same_field(lifted, slices[n])})
    degrees = [{"n": n, "degree": [K.ambient.p, slices[n].degree_exponent], "expected": n * t} for n in slices]
    return {
        "lifts": lifts,
        "degrees": degrees,
        "holds": all(x["holds"] for x in lifts) and all(d["degree"][1] == d["expected"] for d in degrees),
    }


def composite_modularity_check(K1: PIExtension, K2: PIExtension) -> Dict[str, object]:
    """K1, K2 が加群的で [K1K2:k] = [K1:k][K2:k] なら K1K2 も加群的。"""
    composite = build_extension(K1.ambient, K1.generators + K2.generators)
    disjoint = composite.degree_exponent == K1.degree_exponent + K2.degree_exponent
    m1, m2 = decide_modularity(K1).modular, decide_modularity(K2).modular
    applicable = m1 and m2 and disjoint
    mc = decide_modularity(composite).modular if applicable else None
    return {
        "first_modular": m1,
        "second_modular": m2,
        "disjoint": disjoint,
        "composite_modular": mc,
        "holds": (not applicable) or bool(mc),
    }
