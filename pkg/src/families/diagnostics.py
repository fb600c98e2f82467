"""族の打ち切りレベルでの診断。

k_j = k^{p^{-j}} ∩ trunc(L) の指数列から U_s^j = j - o_s(k_j/k) の表を作り、
行ごとの増え方を調べる。有限個のレベルからは極限は分からないので、
「計算範囲で一定」「計算範囲で狭義増加」と報告するだけにとどめる。
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.core.ambient import format_element
from src.core.errors import PrecisionExceeded
from src.core.invariants import canonical_rbase, rbase_from_generators
from src.core.tower import PIExtension, build_extension, intersect_with_kpj
from src.families.families import Claim, ClaimContext, TowerFamily

__all__ = [
    "SliceSummary",
    "FamilyDiagnostics",
    "u_table",
    "classify_row",
    "family_diagnose",
]

_logger = logging.getLogger(__name__)

ROW_CONSTANT = "constant"
ROW_INCREASING = "increasing"
ROW_MIXED = "mixed"


@dataclass(frozen=True)
class SliceSummary:
    """k_j/k の要約。"""

    j: int
    degree_exponent: int
    exponents: Tuple[int, ...]
    generators: Tuple[str, ...]

    @property
    def di(self) -> int:
        return len(self.exponents)

    def to_dict(self, p: int) -> dict:
        return {
            "j": self.j,
            "degree": [p, self.degree_exponent],
            "di": self.di,
            "exponents": list(self.exponents),
            "rbase": list(self.generators),
        }


def u_table(exponent_lists: Sequence[Sequence[int]]) -> np.ndarray:
    """U_s^j = j - o_s(k_j/k) の表（行 s = 1..max di + 1, 列 j = 1..J）。

    o_s は s が di を超えると 0 なので、最後の行は U = j になる。
    """
    rows = max((len(e) for e in exponent_lists), default=0) + 1
    table = np.zeros((rows, len(exponent_lists)), dtype=int)
    for col, exps in enumerate(exponent_lists):
        j = col + 1
        padded = list(exps) + [0] * (rows - len(exps))
        table[:, col] = j - np.asarray(padded, dtype=int)
    return table


def classify_row(row: np.ndarray) -> str:
    diffs = np.diff(row)
    if not diffs.size or np.all(diffs == 0):
        return ROW_CONSTANT
    if np.all(diffs > 0):
        return ROW_INCREASING
    return ROW_MIXED


@dataclass(frozen=True)
class FamilyDiagnostics:
    """family_diagnose の結果。

    Attributes:
        family: 診断した族
        precision: 使った精度 N
        max_level: 計算した最大レベル L
        truncation_degrees: log_p [trunc(n):k]（n = 1..L）
        slices: k_j/k の要約（j = 1..L）
        table: U 表（行 s, 列 j）
        row_classes: 各行の分類
        monotone: 各行が j について非減少か
        bounded: 0 <= U_s^j <= j か
        ilqm_candidate: 計算範囲で狭義増加する最初の行 s
        e_estimate: それより前の一定の行の U の最大値
        claims: 族の主張の検査結果
    """

    family: TowerFamily
    precision: int
    max_level: int
    truncation_degrees: Tuple[int, ...]
    slices: Tuple[SliceSummary, ...]
    table: np.ndarray = field(compare=False, repr=False)
    row_classes: Tuple[str, ...]
    monotone: bool
    bounded: bool
    ilqm_candidate: Optional[int]
    e_estimate: Optional[int]
    claims: Tuple[Claim, ...]

    @property
    def p(self) -> int:
        return self.family.p

    @property
    def di_by_level(self) -> List[int]:
        return [s.di for s in self.slices]

    @property
    def degree_by_level(self) -> List[Tuple[int, int]]:
        return [(self.p, s.degree_exponent) for s in self.slices]

    @property
    def all_claims_pass(self) -> bool:
        return all(c.passed for c in self.claims)

    def caveats(self) -> List[str]:
        notes = [
            f"レベル {self.max_level} までの打ち切りでの観測であり、無限の塔についての結論ではない",
            "行の分類（一定・増加）は計算範囲でのもので、有界性や Ilqm を確定するものではない",
        ]
        if self.family.name == "theta":
            notes.append("θ 塔の構成に現れない補助変数 S_i は省いている（k の不完全次数が無限であることは再現しない）")
        return notes

    def to_dict(self) -> dict:
        return {
            "family": self.family.to_dict(),
            "precision": self.precision,
            "max_level": self.max_level,
            "truncation_degrees": [[self.p, e] for e in self.truncation_degrees],
            "slices": [s.to_dict(self.p) for s in self.slices],
            "di_by_level": self.di_by_level,
            "degree_by_level": [list(d) for d in self.degree_by_level],
            "u_table": {
                "rows": [f"s={s}" for s in range(1, self.table.shape[0] + 1)],
                "columns": [f"j={j}" for j in range(1, self.table.shape[1] + 1)],
                "values": self.table.tolist(),
            },
            "row_classes": list(self.row_classes),
            "monotone": self.monotone,
            "bounded": self.bounded,
            "ilqm_candidate": self.ilqm_candidate,
            "e_estimate": self.e_estimate,
            "claims": [c.to_dict() for c in self.claims],
            "all_claims_pass": self.all_claims_pass,
            "caveats": self.caveats(),
        }


def _summarize_slice(top: PIExtension, j: int) -> Tuple[PIExtension, SliceSummary]:
    kj = intersect_with_kpj(top, j)
    minimal = build_extension(top.ambient, rbase_from_generators(kj))
    crb = canonical_rbase(minimal)
    summary = SliceSummary(
        j,
        minimal.degree_exponent,
        crb.exponents,
        tuple(format_element(g) for g in crb.generators),
    )
    _logger.debug("k_%d: 次数 p^%d, 指数列 %s", j, summary.degree_exponent, summary.exponents)
    return minimal, summary


def family_diagnose(family: TowerFamily, max_level: int, precision: Optional[int] = None) -> FamilyDiagnostics:
    """族を max_level まで打ち切って診断する。

    Args:
        family: 族
        max_level: 最大レベル L
        precision: 精度 N（省略時は族が必要とする値）

    Raises:
        PrecisionExceeded: 指定された精度が足りない（required に必要な N）
    """
    required = family.required_precision(max_level)
    if precision is not None and precision < required:
        raise PrecisionExceeded(
            f"族 {family.name} をレベル {max_level} まで診断するには精度 N >= {required} が必要です",
            required=required,
        )
    ambient = family.ambient(max_level)
    if precision is not None:
        ambient = ambient.with_precision(precision)
    _logger.info("%s をレベル %d まで診断します（N = %d）", family.name, max_level, ambient.precision)

    truncations: Dict[int, PIExtension] = {}
    for n in range(1, max_level + 1):
        if family.fixed and truncations:
            truncations[n] = truncations[1]
        else:
            truncations[n] = family.trunc(ambient, n)
    top = truncations[max_level]

    slices: Dict[int, PIExtension] = {}
    summaries: List[SliceSummary] = []
    for j in range(1, max_level + 1):
        slices[j], summary = _summarize_slice(top, j)
        summaries.append(summary)

    table = u_table([s.exponents for s in summaries])
    classes = tuple(classify_row(row) for row in table)
    monotone = bool(np.all(np.diff(table, axis=1) >= 0))
    levels = np.arange(1, max_level + 1)
    bounded = bool(np.all(table >= 0) and np.all(table <= levels))
    candidate = next((s + 1 for s, c in enumerate(classes) if c == ROW_INCREASING), None)
    stop = candidate - 1 if candidate is not None else len(classes)
    constant_rows = [table[s] for s in range(stop) if classes[s] == ROW_CONSTANT]
    e_estimate = int(max(row.max() for row in constant_rows)) if constant_rows else None

    context = ClaimContext(
        ambient,
        max_level,
        truncations,
        slices,
        {s.j: s.exponents for s in summaries},
    )
    claims = list(family.claims(context))
    claims.append(Claim("u-monotone", "各 s で (U_s^j)_j は非減少", monotone))
    claims.append(Claim("u-range", "0 <= U_s^j <= j", bounded))
    failed = [c for c in claims if not c.passed]
    if failed:
        _logger.warning("%s: 成り立たない主張が %d 件あります", family.name, len(failed))

    return FamilyDiagnostics(
        family=family,
        precision=ambient.precision,
        max_level=max_level,
        truncation_degrees=tuple(truncations[n].degree_exponent for n in range(1, max_level + 1)),
        slices=tuple(summaries),
        table=table,
        row_classes=classes,
        monotone=monotone,
        bounded=bounded,
        ilqm_candidate=candidate,
        e_estimate=e_estimate,
        claims=tuple(claims),
    )
