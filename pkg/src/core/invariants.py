"""r-基底・指数列・無理次数 di などの不変量。

すべての関数は任意の基礎体 over（既定は k）を受け取り、拡大 over(K)/over について
計算する。相対次数は k 上の次数指数の差として求める。
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .ambient import AmbientElement, format_element
from .errors import AmbientMismatch
from .tower import (
    PIExtension,
    adjoin,
    build_extension,
    contains,
    exponent_over,
    frobenius_subfield,
    is_subfield,
    same_field,
    trivial_extension,
)

__all__ = [
    "CanonicalRBase",
    "AdditivityReport",
    "rbase_from_generators",
    "di",
    "canonical_rbase",
    "exponents_via_subfields",
    "exponent_list",
    "di_additivity_check",
    "frobenius_rbase_check",
    "degree_identity",
    "power_chain_check",
    "transitivity_check",
    "exponents_bounded_by",
]

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CanonicalRBase:
    """標準的に順序付けられた r-基底。

    Attributes:
        generators: β_1, ..., β_t
        exponents: m_j = o(β_j, over(β_1..β_{j-1}))。非増加
    """

    generators: Tuple[AmbientElement, ...]
    exponents: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.generators)

    def to_dict(self) -> dict:
        return {
            "generators": [format_element(g) for g in self.generators],
            "exponents": list(self.exponents),
        }


def _base(K: PIExtension, over: Optional[PIExtension]) -> PIExtension:
    if over is None:
        return trivial_extension(K.ambient)
    if over.ambient != K.ambient:
        raise AmbientMismatch("基礎体と K の作業体が異なります")
    return over


def _frobenius_over(K: PIExtension, base: PIExtension, m: int) -> PIExtension:
    """base(K^{p^m})。"""
    if base.is_trivial():
        return frobenius_subfield(K, m)
    return adjoin(base, [g.pth_power(m) for g in K.generators])


# ---------------------------
# r-基底
# ---------------------------

def rbase_from_generators(K: PIExtension, over: Optional[PIExtension] = None) -> List[AmbientElement]:
    """K の生成元から r-基底を取り出す。

    F = over(K^p) として、それまでに残した元と F で生成される体に入らない生成元だけを
    入力順に残す（先に現れたものを優先）。
    """
    base = _base(K, over)
    field = _frobenius_over(K, base, 1)
    kept: List[AmbientElement] = []
    for g in K.generators:
        if not contains(g, field):
            kept.append(g)
            field = adjoin(field, [g])
    return kept


def di(K: PIExtension, over: Optional[PIExtension] = None) -> int:
    """無理次数 di(K/over) = log_p [over(K) : over(K^p)]。"""
    base = _base(K, over)
    top = adjoin(base, K.generators) if over is not None else K
    return top.degree_exponent - _frobenius_over(K, base, 1).degree_exponent


def canonical_rbase(K: PIExtension, over: Optional[PIExtension] = None) -> CanonicalRBase:
    """貪欲法で標準順序の r-基底を作る。

    各段で、それまでに作った体の上の指数が最大の生成元を選ぶ（同値なら入力順で先のもの）。
    最大指数が 0 になったら止める。
    """
    field = _base(K, over)
    chosen: List[AmbientElement] = []
    exps: List[int] = []
    remaining = list(K.generators)
    while remaining:
        scored = [(exponent_over(g, field), -i) for i, g in enumerate(remaining)]
        best = max(range(len(remaining)), key=lambda i: scored[i])
        e = scored[best][0]
        if e == 0:
            break
        g = remaining.pop(best)
        chosen.append(g)
        exps.append(e)
        field = adjoin(field, [g])
        _logger.debug("標準 r-基底: %s を指数 %d で採用", g, e)
    return CanonicalRBase(tuple(chosen), tuple(exps))


def exponents_via_subfields(K: PIExtension, over: Optional[PIExtension] = None) -> List[int]:
    """o_s = inf{ m : di(over(K^{p^m}) / over) < s } を s = 1..di で求める。

    canonical_rbase の貪欲な選び方とは独立に指数列を与える。
    """
    base = _base(K, over)
    t = di(K, over)
    dis: List[int] = []
    m = 0
    while True:
        sub = _frobenius_over(K, base, m)
        d = di(sub, over)
        dis.append(d)
        if d == 0:
            break
        m += 1
    return [min(m for m, d in enumerate(dis) if d < s) for s in range(1, t + 1)]


def exponent_list(K: PIExtension, j: int, over: Optional[PIExtension] = None) -> int:
    """o_j(K/over)。j が di を超えるときは 0。"""
    exps = canonical_rbase(K, over).exponents
    return exps[j - 1] if 1 <= j <= len(exps) else 0


def degree_identity(K: PIExtension) -> bool:
    """[K:k] = p^{Σ_j o_j(K/k)}。"""
    return sum(canonical_rbase(K).exponents) == K.degree_exponent


# ---------------------------
# 合成体・鎖に関する検査
# ---------------------------

@dataclass(frozen=True)
class AdditivityReport:
    """二つの拡大とその合成体の di・指数列の比較。"""

    di_first: int
    di_second: int
    di_composite: int
    exponents_first: Tuple[int, ...]
    exponents_second: Tuple[int, ...]
    exponents_composite: Tuple[int, ...]
    relative_exponents: Tuple[int, ...]
    disjoint: bool
    bound_holds: bool
    equality_holds: Optional[bool]
    exponents_preserved: Optional[bool]

    def to_dict(self) -> dict:
        return {
            "di": [self.di_first, self.di_second, self.di_composite],
            "exponents": [
                list(self.exponents_first),
                list(self.exponents_second),
                list(self.exponents_composite),
            ],
            "relative_exponents": list(self.relative_exponents),
            "disjoint": self.disjoint,
            "bound_holds": self.bound_holds,
            "equality_holds": self.equality_holds,
            "exponents_preserved": self.exponents_preserved,
        }


def di_additivity_check(K1: PIExtension, K2: PIExtension) -> AdditivityReport:
    """di(K1(K2)/k) <= di(K1/k) + di(K2/k)、k 上線形無関連なら等号。

    線形無関連のときは o_j(K1(K2)/K2) = o_j(K1/k) も確かめる。
    """
    if K1.ambient != K2.ambient:
        raise AmbientMismatch("作業体が異なります")
    composite = adjoin(K1, K2.generators)
    d1, d2, dc = di(K1), di(K2), di(composite)
    disjoint = composite.degree_exponent == K1.degree_exponent + K2.degree_exponent
    e1 = canonical_rbase(K1).exponents
    relative = canonical_rbase(K1, over=K2).exponents
    return AdditivityReport(
        di_first=d1,
        di_second=d2,
        di_composite=dc,
        exponents_first=e1,
        exponents_second=canonical_rbase(K2).exponents,
        exponents_composite=canonical_rbase(composite).exponents,
        relative_exponents=relative,
        disjoint=disjoint,
        bound_holds=dc <= d1 + d2,
        equality_holds=(dc == d1 + d2) if disjoint else None,
        exponents_preserved=(relative == e1) if disjoint else None,
    )


def frobenius_rbase_check(K: PIExtension, n: int) -> bool:
    """標準 r-基底 (α_j, m_j) の p^n 乗のうち m_j > n のものが
    k(K^{p^n}) の標準 r-基底になり、指数が m_j - n になるか。"""
    crb = canonical_rbase(K)
    powered = [g.pth_power(n) for g, m in zip(crb.generators, crb.exponents) if m > n]
    expected = tuple(m - n for m in crb.exponents if m > n)
    sub = frobenius_subfield(K, n)
    candidate = build_extension(K.ambient, powered)
    if not same_field(candidate, sub):
        return False
    return canonical_rbase(candidate).exponents == expected and tuple(
        exponents_via_subfields(sub)
    ) == expected


def power_chain_check(K: PIExtension, L: PIExtension) -> bool:
    """K^p ⊆ L ⊆ K のとき、各 j で o_j(K/k) - o_j(L/k) ∈ {0, 1}。"""
    if not is_subfield(L, K) or not is_subfield(frobenius_subfield(K, 1), L):
        raise ValueError("K^p ⊆ L ⊆ K を満たしていません")
    ek = canonical_rbase(K).exponents
    el = canonical_rbase(L).exponents
    a, b = _padded(ek, el)
    return all(x - y in (0, 1) for x, y in zip(a, b))


def transitivity_check(K: PIExtension, L: PIExtension) -> Dict[str, object]:
    """k ⊆ L ⊆ K の鎖で di(K/k) <= di(K/L) + di(L/k) を確かめる。"""
    if not is_subfield(L, K):
        raise ValueError("L ⊆ K を満たしていません")
    total, upper, lower = di(K), di(K, over=L), di(L)
    return {
        "di_total": total,
        "di_upper": upper,
        "di_lower": lower,
        "holds": total <= upper + lower,
    }


def exponents_bounded_by(small: Sequence[int], large: Sequence[int]) -> bool:
    """各 j で small_j <= large_j（足りない分は 0 とみなす）。"""
    a, b = _padded(small, large)
    return all(x <= y for x, y in zip(a, b))


def _padded(a: Sequence[int], b: Sequence[int]) -> Tuple[List[int], List[int]]:
    width = max(len(a), len(b))
    return list(a) + [0] * (width - len(a)), list(b) + [0] * (width - len(b))
