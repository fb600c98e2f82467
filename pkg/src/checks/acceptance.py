"""受け入れスイート（paper-checks）。

理論上の主張を、組み込みの例・乱数の塔・族の打ち切りで機械的に確かめる。
各検査は CheckResult を返し、一つでも成り立たなければスイート全体が失敗になる。

    C1  worked-example       2 生成元の非加群的な例（p = 2, 3）
    C2  method-agreement     係数判定と直接判定の一致
    C3  exponent-oracles     標準 r-基底の指数列と部分体の次元による指数列の一致
    C4  slice-formula        加群的な塔の k_j の公式と直接の共通部分の一致
    C5  equiexp-degree-law   [k_n:k] = p^{2n}（n = 1..4）
    C6  theta-lemmas         θ 塔の打ち切りでの主張
    C7  inequalities         次数・指数・di の不等式
    C8  stability            加群性の安定性
    C9  u-table              U 表の単調性と零行
    C10 determinism          同じシードで同じ JSON
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.core.ambient import format_element, make_ambient
from src.core.errors import AlgebraError, InternalInconsistency, NotModular, UnknownCheck
from src.core.invariants import (
    canonical_rbase,
    degree_identity,
    di,
    di_additivity_check,
    exponents_bounded_by,
    exponents_via_subfields,
    frobenius_rbase_check,
    power_chain_check,
    transitivity_check,
)
from src.core.modularity import (
    Verdict,
    composite_modularity_check,
    defining_equations,
    is_modular_criterion,
    is_modular_direct,
    kj_modular_formula,
    modularity_stability_suite,
    verify_defining_equations,
)
from src.core.parameters import DEFAULT_SEED, Budget
from src.core.tower import adjoin, build_extension, frobenius_subfield
from src.exprparse.evaluator import parse_and_eval
from src.families.diagnostics import family_diagnose
from src.families.families import (
    NONMODULAR_GENERATORS,
    family_equiexp,
    family_nonmodular_example,
    family_simple,
    family_theta,
    theta_lemma_claims,
)
from src.reports.report import build_report, render_json

from .random_towers import RandomTower, RandomTowerGenerator

__all__ = [
    "CHECK_IDS",
    "CRITERIA",
    "resolve_check_ids",
    "AcceptanceConfig",
    "CheckResult",
    "run_acceptance",
    "acceptance_report",
]

_logger = logging.getLogger(__name__)

MAX_REPORTED_FAILURES = 5
INEQUALITY_TOWER_COUNT = 50
EQUIEXP_LEVELS = 4
THETA_STAGES = 2
THETA_LEVEL = 3
THETA_DIAGNOSE_LEVEL = 2
DETERMINISM_TOWER_COUNT = 5


@dataclass(frozen=True)
class AcceptanceConfig:
    seed: int = DEFAULT_SEED
    budget: Budget = field(default_factory=Budget)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "towers": self.budget.tower_count,
            "modular_towers": self.budget.modular_count,
            "degree_cap": self.budget.degree_cap,
        }


@dataclass(frozen=True)
class CheckResult:
    """一つの検査の結果。

    Attributes:
        id: 検査の識別子
        description: 何を確かめたか
        passed: すべてのケースで成り立ったか
        cases: 確かめたケースの数
        failures: 成り立たなかったケース（先頭の数件）
        details: 集計値
    """

    id: str
    description: str
    passed: bool
    cases: int
    failures: Tuple[dict, ...] = ()
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "criterion": CRITERION_OF.get(self.id),
            "description": self.description,
            "passed": self.passed,
            "cases": self.cases,
            "failures": list(self.failures),
            "details": self.details,
        }


class _Tally:
    """ケースの成否を数え、失敗を先頭の数件だけ残す。"""

    def __init__(self):
        self.cases = 0
        self.failed = 0
        self.failures: List[dict] = []

    def record(self, ok: bool, case: Callable[[], dict]) -> bool:
        self.cases += 1
        if not ok:
            self.failed += 1
            if len(self.failures) < MAX_REPORTED_FAILURES:
                self.failures.append(case())
        return ok

    def result(self, check_id: str, description: str, **details) -> CheckResult:
        details = {"failed": self.failed, **details}
        return CheckResult(check_id, description, self.failed == 0, self.cases, tuple(self.failures), details)


def _case(tower: RandomTower, **extra) -> Callable[[], dict]:
    return lambda: {**tower.to_dict(), **extra}


# ---------------------------
# 個々の検査
# ---------------------------

def check_worked_example(config: AcceptanceConfig) -> CheckResult:
    """k(X^{p^-2}, X^{p^-2}Y^{p^-1} + Z^{p^-1}) の指数列・定義方程式・判定。"""
    tally = _Tally()
    observed = {}
    for p in (2, 3):
        ambient = make_ambient(p, ("X", "Y", "Z"), 2)
        K = build_extension(ambient, [parse_and_eval(t, ambient) for t in NONMODULAR_GENERATORS])
        crb = canonical_rbase(K)
        eqs = defining_equations(K, crb)
        expected = {(0,): ambient.base_variable("Z"), (1,): ambient.base_variable("Y")}
        coefficients = dict(eqs.equations[1].coefficients) if len(eqs.equations) > 1 else {}
        by_criterion = is_modular_criterion(K, crb)
        by_direct = is_modular_direct(K)
        witness = by_criterion.criterion_witness
        row = {
            "p": p,
            "exponents": list(crb.exponents),
            "di": len(crb),
            "coefficients": eqs.equations[1].to_dict()["coefficients"] if len(eqs.equations) > 1 else {},
            "equations_verified": verify_defining_equations(K, eqs),
            "criterion": by_criterion.verdict.value,
            "direct": by_direct.verdict.value,
            "criterion_witness": witness.to_dict() if witness else None,
            "disjointness_witness": (
                by_direct.disjointness_witness.to_dict() if by_direct.disjointness_witness else None
            ),
        }
        observed[str(p)] = row
        checks = {
            "exponents": crb.exponents == (2, 1),
            "di": len(crb) == 2,
            "coefficients": coefficients == expected,
            "equations_verified": row["equations_verified"],
            "criterion": by_criterion.verdict is Verdict.NOT_MODULAR,
            "direct": by_direct.verdict is Verdict.NOT_MODULAR,
            "witnesses": witness is not None
            and by_direct.disjointness_witness is not None
            and witness.coefficient == str(ambient.base_variable("Y")),
        }
        for name, ok in checks.items():
            tally.record(ok, lambda p=p, name=name: {"p": p, "check": name, "observed": row})
    return tally.result("worked-example", "2 生成元の非加群的な例（p = 2, 3）", observed=observed)


def check_method_agreement(config: AcceptanceConfig) -> CheckResult:
    """係数判定と直接判定の一致。生成元の順序を逆にしても係数判定が変わらないことも見る。"""
    gen = RandomTowerGenerator(config.seed, degree_cap=config.budget.degree_cap)
    tally = _Tally()
    counts = {Verdict.MODULAR.value: 0, Verdict.NOT_MODULAR.value: 0}
    for tower in gen.towers(config.budget.tower_count):
        K = tower.tower
        by_criterion = is_modular_criterion(K).verdict
        by_direct = is_modular_direct(K).verdict
        reordered = build_extension(K.ambient, list(reversed(K.generators)))
        by_reordered = is_modular_criterion(reordered).verdict
        counts[by_criterion.value] += 1
        tally.record(
            by_criterion is by_direct is by_reordered,
            _case(
                tower,
                criterion=by_criterion.value,
                direct=by_direct.value,
                reordered=by_reordered.value,
            ),
        )
    return tally.result(
        "method-agreement",
        "係数判定と直接判定の一致（乱数の塔）",
        verdicts=counts,
        redraws=gen.redraws,
    )


def check_exponent_oracles(config: AcceptanceConfig) -> CheckResult:
    """標準 r-基底の指数列と部分体の次元による指数列、次数の等式、フロベニウスでの指数のずれ。"""
    gen = RandomTowerGenerator(config.seed, degree_cap=config.budget.degree_cap)
    tally = _Tally()
    for tower in gen.towers(config.budget.tower_count):
        K = tower.tower
        greedy = list(canonical_rbase(K).exponents)
        oracle = exponents_via_subfields(K)
        frobenius = all(frobenius_rbase_check(K, n) for n in range(1, K.exponent))
        tally.record(
            greedy == oracle and degree_identity(K) and frobenius,
            _case(tower, greedy=greedy, oracle=oracle, frobenius=frobenius),
        )
    return tally.result("exponent-oracles", "指数列の二通りの計算の一致（乱数の塔）", redraws=gen.redraws)


def check_slice_formula(config: AcceptanceConfig) -> CheckResult:
    """加群的なテンソル型の塔で、j < o_1 の k_j の公式が直接の共通部分と一致するか。"""
    gen = RandomTowerGenerator(config.seed, degree_cap=config.budget.degree_cap)
    tally = _Tally()
    for _ in range(config.budget.modular_count):
        tower = gen.modular_tower()
        K = tower.tower
        for j in range(1, K.exponent):
            try:
                kj_modular_formula(K, K.generators, j)
                ok, reason = True, None
            except AlgebraError as e:
                ok, reason = False, f"{type(e).__name__}: {e}"
            tally.record(ok, _case(tower, j=j, reason=reason))
    return tally.result("slice-formula", "加群的な塔の k_j の公式（乱数のテンソル型の塔）", redraws=gen.redraws)


def check_equiexp_degree_law(config: AcceptanceConfig) -> CheckResult:
    diagnostics = family_diagnose(family_equiexp(("X", "Y")), EQUIEXP_LEVELS)
    tally = _Tally()
    for n, (_, e) in enumerate(diagnostics.degree_by_level, start=1):
        tally.record(e == 2 * n, lambda n=n, e=e: {"n": n, "degree": [2, e], "expected": [2, 2 * n]})
    return tally.result(
        "equiexp-degree-law",
        f"k(X^{{p^-n}}, Y^{{p^-n}}) で [k_n:k] = p^{{2n}}（n = 1..{EQUIEXP_LEVELS}）",
        degree_by_level=[list(d) for d in diagnostics.degree_by_level],
    )


def check_theta_lemmas(config: AcceptanceConfig) -> CheckResult:
    family = family_theta(THETA_STAGES)
    ambient = family.ambient(THETA_LEVEL)
    tally = _Tally()
    claims = theta_lemma_claims(ambient, THETA_STAGES, THETA_LEVEL)
    for claim in claims:
        tally.record(claim.passed, claim.to_dict)
    kinds: Dict[str, int] = {}
    for claim in claims:
        kinds[claim.name] = kinds.get(claim.name, 0) + 1
    return tally.result(
        "theta-lemmas",
        f"θ 塔の打ち切りでの主張（段 <= {THETA_STAGES}, n <= {THETA_LEVEL}）",
        precision=ambient.precision,
        claims=kinds,
    )


def check_inequalities(config: AcceptanceConfig) -> CheckResult:
    """乱数の塔で次数・指数・di の不等式を確かめる。

    * B ⊆ K で [k(K^p)(B) : k(K^p)] <= p^{|B|}
    * L' ⊆ L ⊆ K で o_j(L/L') <= o_j(K/k)
    * o_j(K(M)/M) <= o_j(K/k)
    * L ⊆ K で di(L/k) <= di(K/k)
    * di(K(M)/k) <= di(K/k) + di(M/k)、線形無関連なら等号かつ o_j(K(M)/M) = o_j(K/k)
    * 変数の異なる塔どうしでは必ず等号
    * k ⊆ L ⊆ K で di(K/k) <= di(K/L) + di(L/k)
    * K^p ⊆ L ⊆ K で o_j(K/k) - o_j(L/k) ∈ {0, 1}
    """
    gen = RandomTowerGenerator(config.seed, degree_cap=config.budget.degree_cap)
    tally = _Tally()
    count = min(config.budget.tower_count, INEQUALITY_TOWER_COUNT)
    passed: Dict[str, int] = {}
    disjoint_pairs = 0

    def record(name: str, ok: bool, tower: RandomTower, **extra) -> None:
        passed[name] = passed.get(name, 0) + int(ok)
        tally.record(ok, _case(tower, inequality=name, **extra))

    for _ in range(count):
        tower = gen.tower()
        K = tower.tower
        exps = canonical_rbase(K).exponents
        F = frobenius_subfield(K, 1)

        B = gen.pick(K.generators, int(gen.rng.integers(0, len(K.generators) + 1)))
        grown = adjoin(F, B).degree_exponent - F.degree_exponent
        record("degree-bound", grown <= len(B), tower, subset=len(B), grown=grown)

        L = gen.subfield(K)
        lower = gen.subfield(L)
        absolute = canonical_rbase(L).exponents
        relative = canonical_rbase(L, over=lower).exponents
        record(
            "exponent-monotone",
            exponents_bounded_by(absolute, exps) and exponents_bounded_by(relative, exps),
            tower,
            subfield=[format_element(g) for g in L.generators],
            lower=[format_element(g) for g in lower.generators],
            absolute=list(absolute),
            relative=list(relative),
        )
        record("di-monotone", di(L) <= di(K), tower, di_sub=di(L), di=di(K))
        record("subadditivity", bool(transitivity_check(K, L)["holds"]), tower)

        chain = adjoin(F, gen.pick(K.generators, int(gen.rng.integers(0, len(K.generators) + 1))))
        record("power-chain", power_chain_check(K, chain), tower)

        other = gen.tower()
        over_other = canonical_rbase(K, over=other.tower).exponents
        record(
            "composite-bound",
            exponents_bounded_by(over_other, exps),
            tower,
            other=list(other.expressions),
            relative=list(over_other),
        )
        report = di_additivity_check(K, other.tower)
        ok = report.bound_holds and (
            not report.disjoint or bool(report.equality_holds and report.exponents_preserved)
        )
        disjoint_pairs += int(report.disjoint)
        record("additivity", ok, tower, other=list(other.expressions), report=report.to_dict())

        first = gen.tower(root_variables=("X",))
        second = gen.tower(root_variables=("Y", "Z"))
        tensor = di_additivity_check(first.tower, second.tower)
        record(
            "tensor-additivity",
            tensor.disjoint and bool(tensor.equality_holds) and bool(tensor.exponents_preserved),
            first,
            other=list(second.expressions),
            report=tensor.to_dict(),
        )

    return tally.result(
        "inequalities",
        "次数・指数・di の不等式（乱数の塔）",
        passed=passed,
        disjoint_pairs=disjoint_pairs,
        redraws=gen.redraws,
    )


def check_stability(config: AcceptanceConfig) -> CheckResult:
    """加群的な塔の k_n と k(K^{p^n}) の加群性、べき部分体での指数、di(k_n/k) の一定性。

    続けて作った二つの塔の合成体の加群性も確かめる。
    """
    gen = RandomTowerGenerator(config.seed, degree_cap=config.budget.degree_cap)
    tally = _Tally()
    previous: Optional[RandomTower] = None
    composites = 0
    for _ in range(config.budget.modular_count):
        tower = gen.modular_tower()
        K = tower.tower
        try:
            suite = modularity_stability_suite(K, K.generators)
            ok = bool(suite["holds"]) and bool(suite["tensor_rbase"]) and bool(suite["di_constant"])
        except NotModular as e:
            suite, ok = {"error": str(e)}, False
        tally.record(ok, _case(tower, suite=suite))
        if previous is not None:
            composite = composite_modularity_check(previous.tower, K)
            composites += int(composite["composite_modular"] is not None)
            tally.record(
                bool(composite["holds"]),
                _case(tower, other=list(previous.expressions), composite=composite),
            )
        previous = tower
    return tally.result(
        "stability",
        "加群性の安定性（乱数のテンソル型の塔）",
        composites_checked=composites,
        redraws=gen.redraws,
    )


def check_u_table(config: AcceptanceConfig) -> CheckResult:
    """U 表が各行で非減少であること、simple と equiexp では s <= t の行が 0 であること。"""
    tally = _Tally()
    runs = [
        (family_simple("X"), EQUIEXP_LEVELS, 1),
        (family_equiexp(("X", "Y")), EQUIEXP_LEVELS, 2),
        (family_nonmodular_example(), 2, None),
        (family_theta(THETA_STAGES), THETA_DIAGNOSE_LEVEL, None),
    ]
    observed = {}
    for family, level, zero_rows in runs:
        diagnostics = family_diagnose(family, level)
        table = diagnostics.table
        observed[family.name] = {"max_level": level, "u_table": table.tolist()}
        tally.record(diagnostics.monotone, lambda f=family.name, t=table: {"family": f, "u_table": t.tolist()})
        if zero_rows is not None:
            zero = bool(np.all(table[:zero_rows, :] == 0))
            tally.record(zero, lambda f=family.name, t=table: {"family": f, "zero_rows": zero_rows, "u_table": t.tolist()})
    return tally.result("u-table", "U 表の単調性と零行", observed=observed)


def check_determinism(config: AcceptanceConfig) -> CheckResult:
    """同じシードで二度実行した乱数の検査が同じ JSON になるか。"""
    small = replace(
        config,
        budget=replace(
            config.budget,
            tower_count=min(config.budget.tower_count, DETERMINISM_TOWER_COUNT),
            modular_count=min(config.budget.modular_count, DETERMINISM_TOWER_COUNT),
        ),
    )
    ids = ("method-agreement", "exponent-oracles", "slice-formula")
    outputs = [
        render_json(acceptance_report(run_acceptance(small, ids), small)) for _ in range(2)
    ]
    tally = _Tally()
    tally.record(outputs[0] == outputs[1], lambda: {"checks": list(ids), "lengths": [len(o) for o in outputs]})
    return tally.result("determinism", "同じシードで同じ JSON", checks=list(ids), seed=config.seed)


CHECKS: Dict[str, Callable[[AcceptanceConfig], CheckResult]] = {
    "worked-example": check_worked_example,
    "method-agreement": check_method_agreement,
    "exponent-oracles": check_exponent_oracles,
    "slice-formula": check_slice_formula,
    "equiexp-degree-law": check_equiexp_degree_law,
    "theta-lemmas": check_theta_lemmas,
    "inequalities": check_inequalities,
    "stability": check_stability,
    "u-table": check_u_table,
    "determinism": check_determinism,
}
CHECK_IDS: Tuple[str, ...] = tuple(CHECKS)

# C1..C10 は CHECK_IDS と同じ順の別名
CRITERIA: Dict[str, str] = {f"C{i}": check_id for i, check_id in enumerate(CHECK_IDS, start=1)}
CRITERION_OF: Dict[str, str] = {check_id: c for c, check_id in CRITERIA.items()}


def resolve_check_ids(ids: Optional[Sequence[str]]) -> List[str]:
    """識別子（スラッグまたは C1..C10）をスラッグに直し、登録順に並べる。

    Raises:
        UnknownCheck: 未登録の識別子
    """
    if not ids:
        return list(CHECK_IDS)
    unknown = [i for i in ids if i not in CHECKS and i not in CRITERIA]
    if unknown:
        raise UnknownCheck(f"未登録の検査: {', '.join(unknown)}")
    wanted = {CRITERIA.get(i, i) for i in ids}
    return [check_id for check_id in CHECK_IDS if check_id in wanted]


# ---------------------------
# 実行とレポート
# ---------------------------

def run_acceptance(config: AcceptanceConfig, only: Optional[Sequence[str]] = None) -> List[CheckResult]:
    """検査を登録順に実行する。

    Raises:
        UnknownCheck: 未登録の識別子
    """
    ids = resolve_check_ids(only)
    results = []
    for check_id in ids:
        start = time.perf_counter()
        try:
            result = CHECKS[check_id](config)
        except InternalInconsistency as e:
            result = CheckResult(
                check_id, "内部の不整合", False, 0, ({"error": type(e).__name__, "message": str(e)},)
            )
        _logger.info(
            "%s: %s（%d ケース, %.1f 秒）",
            check_id,
            "成立" if result.passed else "不成立",
            result.cases,
            time.perf_counter() - start,
        )
        results.append(result)
    return results


def acceptance_report(
    results: Sequence[CheckResult],
    config: AcceptanceConfig,
    elapsed: Optional[float] = None,
) -> Dict[str, Any]:
    echo = {**config.to_dict(), "only": [r.id for r in results]}
    summary = {
        "passed": all(r.passed for r in results),
        "failed_checks": [r.id for r in results if not r.passed],
        "failed_criteria": [CRITERION_OF[r.id] for r in results if not r.passed],
        "checks": [r.to_dict() for r in results],
    }
    caveats = [
        "乱数の塔は p = 2, 変数 X, Y, Z, 根の深さ 3 以下で作る。次数の上限を超えた塔は引き直す",
        "無限の塔についての主張は、族の打ち切りでの観測（equiexp-degree-law, theta-lemmas, u-table）でのみ扱う",
    ]
    return build_report("paper-checks", echo, summary, caveats, elapsed)
