"""レポートの組み立てと出力。

レポートはキーの順序が決まった dict で、JSON（indent=2, ensure_ascii=False）と
その見た目を変えただけのテキストの二通りで出力する。次数は常に (p, e) の組で持つ。
所要時間は --timing のときだけ載せる（載せると同じ入力でも出力が変わるため）。
"""
from __future__ import annotations

import json
import logging
import time
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

from src.core.ambient import format_element, make_ambient
from src.core.errors import (
    ExprError,
    InternalInconsistency,
    NoRoot,
    PrecisionExceeded,
)
from src.core.invariants import canonical_rbase, exponents_via_subfields, rbase_from_generators
from src.core.modularity import (
    decide_modularity,
    defining_equations,
    equiexponential_structure_check,
    is_equiexponential,
    modularity_stability_suite,
    slice_lift_check,
    verify_defining_equations,
)
from src.core.parameters import TOOL_VERSION
from src.core.tower import (
    PIExtension,
    build_extension,
    intersect_with_kpj,
    kpj_by_class_filter,
    subspace_equal,
)
from src.exprparse.evaluator import evaluate
from src.exprparse.parser import ast_to_dict, format_expr, parse, required_depth, variables
from src.families.diagnostics import FamilyDiagnostics
from src.reports.manifest import KjRequest, TowerManifest

__all__ = [
    "TOOL_NAME",
    "build_report",
    "analyze_tower",
    "family_report",
    "parse_check_report",
    "render",
    "render_json",
    "render_text",
    "write_report",
    "error_payload",
]

_logger = logging.getLogger(__name__)

TOOL_NAME = "pi-towers"


def build_report(
    command: str,
    input_echo: Dict[str, Any],
    results: Any,
    caveats: Optional[List[str]] = None,
    elapsed: Optional[float] = None,
) -> Dict[str, Any]:
    """決まった順序のキーでレポートを組み立てる。"""
    report: Dict[str, Any] = {
        "tool": TOOL_NAME,
        "version": TOOL_VERSION,
        "command": command,
        "input": input_echo,
        "results": results,
        "caveats": list(caveats or []),
    }
    if elapsed is not None:
        report["timing"] = {"seconds": round(elapsed, 3)}
    return report


# ---------------------------
# analyze
# ---------------------------

def _degree(K: PIExtension) -> List[int]:
    return [K.ambient.p, K.degree_exponent]


def _invariants(K: PIExtension) -> Dict[str, Any]:
    crb = canonical_rbase(K)
    oracle = exponents_via_subfields(K)
    if list(crb.exponents) != oracle:
        raise InternalInconsistency(
            f"指数列が一致しません: 標準 r-基底 {list(crb.exponents)}, 部分体の次元 {oracle}"
        )
    return {
        "degree": _degree(K),
        "step_exponents": list(K.step_exponents),
        "redundant_generators": [i for i, r in enumerate(K.redundant) if r],
        "exponent": K.exponent,
        "di": len(crb),
        "canonical_rbase": crb.to_dict(),
        "exponents_via_subfields": oracle,
        "degree_identity": sum(crb.exponents) == K.degree_exponent,
    }


def _modularity(K: PIExtension) -> Dict[str, Any]:
    return decide_modularity(K).to_dict()


def _defining_equations(K: PIExtension) -> Dict[str, Any]:
    eqs = defining_equations(K)
    out = eqs.to_dict()
    out["verified"] = verify_defining_equations(K, eqs)
    return out


def _stability(K: PIExtension) -> Dict[str, Any]:
    if not decide_modularity(K).modular:
        return {"applicable": False, "reason": "K/k は加群的でない"}
    return {"applicable": True, **modularity_stability_suite(K)}


def _equiexponential(K: PIExtension) -> Dict[str, Any]:
    if not is_equiexponential(K):
        return {"equiexponential": False}
    return {
        "equiexponential": True,
        "structure": equiexponential_structure_check(K),
        "slice_lift": slice_lift_check(K),
    }


def _kj(K: PIExtension, j: int) -> Dict[str, Any]:
    kj = intersect_with_kpj(K, j)
    if not subspace_equal(kj.subspace, kpj_by_class_filter(K, j)):
        raise InternalInconsistency(f"k_{j} の二通りの計算が一致しません")
    minimal = build_extension(K.ambient, rbase_from_generators(kj))
    crb = canonical_rbase(minimal)
    return {
        "j": j,
        "degree": _degree(minimal),
        "rbase": crb.to_dict(),
    }


_ANALYSES: Dict[str, Callable[[PIExtension], Dict[str, Any]]] = {
    "invariants": _invariants,
    "modularity": _modularity,
    "defining_equations": _defining_equations,
    "stability": _stability,
    "equiexponential": _equiexponential,
}


def analyze_tower(
    manifest: TowerManifest,
    *,
    precision: Optional[int] = None,
    timing: bool = False,
) -> Dict[str, Any]:
    """マニフェストの塔を組み立て、要求された解析を順に行う。

    Raises:
        PrecisionExceeded: 精度が足りない（required に必要な N）
        UnknownVariable: 宣言されていない変数
        InternalInconsistency: 二通りの計算が食い違った
    """
    start = time.perf_counter()
    ambient = manifest.ambient(precision)
    K = build_extension(ambient, manifest.elements(ambient))
    _logger.info("塔を組み立てました: 次数 p^%d（N = %d）", K.degree_exponent, ambient.precision)

    results: List[Dict[str, Any]] = [
        {
            "analysis": "tower",
            "precision": ambient.precision,
            "generators": [format_element(g) for g in K.generators],
            "degree": _degree(K),
            "step_exponents": list(K.step_exponents),
        }
    ]
    for analysis in manifest.analyses:
        if isinstance(analysis, KjRequest):
            results.append({"analysis": "kj", **_kj(K, analysis.j)})
        else:
            results.append({"analysis": analysis, **_ANALYSES[analysis](K)})
        _logger.debug("解析 %s が終わりました", analysis)

    caveats = [
        f"作業体 Ω_N（N = {ambient.precision}）での計算。指数の探索は N で打ち切る",
    ]
    elapsed = time.perf_counter() - start if timing else None
    return build_report("analyze", manifest.to_dict(), results, caveats, elapsed)


# ---------------------------
# family / parse-check
# ---------------------------

def family_report(
    diagnostics: FamilyDiagnostics,
    *,
    plot_path: Optional[str] = None,
    elapsed: Optional[float] = None,
) -> Dict[str, Any]:
    data = diagnostics.to_dict()
    caveats = data.pop("caveats")
    echo = {"family": data.pop("family"), "max_level": data.pop("max_level")}
    if plot_path is not None:
        data["plot"] = plot_path
    return build_report("family", echo, data, caveats, elapsed)


def parse_check_report(
    text: str,
    p: int,
    names: List[str],
    precision: Optional[int] = None,
) -> Dict[str, Any]:
    """式を構文解析・評価した結果のレポート。精度を省略すると必要最小の N で評価する。"""
    ast = parse(text)
    depth = required_depth(ast)
    ambient = make_ambient(p, names, depth if precision is None else precision)
    value = evaluate(ast, ambient)
    results = {
        "ast": ast_to_dict(ast),
        "canonical": format_expr(ast),
        "variables": sorted(variables(ast)),
        "required_precision": depth,
        "precision": ambient.precision,
        "value": format_element(value),
    }
    echo = {"expression": text, "p": p, "variables": list(names), "precision": precision}
    return build_report("parse-check", echo, results)


# ---------------------------
# 出力
# ---------------------------

def render_json(report: Dict[str, Any]) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False)


def _is_scalar(value: Any) -> bool:
    return value is None or isinstance(value, (str, int, float, bool))


def _text_lines(value: Any, indent: int) -> List[str]:
    pad = "  " * indent
    lines: List[str] = []
    if isinstance(value, dict):
        for key, item in value.items():
            if _is_scalar(item) or (isinstance(item, list) and all(_is_scalar(x) for x in item)):
                lines.append(f"{pad}{key}: {_scalar_text(item)}")
            else:
                lines.append(f"{pad}{key}:")
                lines.extend(_text_lines(item, indent + 1))
    elif isinstance(value, list):
        for item in value:
            if _is_scalar(item):
                lines.append(f"{pad}- {_scalar_text(item)}")
            else:
                lines.append(f"{pad}-")
                lines.extend(_text_lines(item, indent + 1))
    else:
        lines.append(f"{pad}{_scalar_text(value)}")
    return lines


def _scalar_text(value: Any) -> str:
    if isinstance(value, list):
        return "[" + ", ".join(_scalar_text(x) for x in value) + "]"
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    return str(value)


def render_text(report: Dict[str, Any]) -> str:
    """JSON と同じ内容を `key: value` の字下げで表示する。"""
    return "\n".join(_text_lines(report, 0))


def render(report: Dict[str, Any], fmt: str = "json") -> str:
    if fmt == "text":
        return render_text(report)
    return render_json(report)


def write_report(text: str, path: Union[str, Path]) -> str:
    """レポートをファイルに書き出す（UTF-8）。

    Returns:
        保存したファイルのパス
    """
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text + "\n", encoding="utf-8")
    return str(path)


def error_payload(exc: BaseException) -> Dict[str, Any]:
    """標準エラーに出す JSON のエラーオブジェクト。"""
    out: Dict[str, Any] = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ExprError):
        out["position"] = exc.position
    if isinstance(exc, (PrecisionExceeded, NoRoot)) and exc.required is not None:
        out["required_precision"] = exc.required
    return out
