"""コマンドラインインターフェース。

    python -m src.cli analyze manifests/nonmodular_example.json
    python -m src.cli family equiexp --vars X Y --max-level 3 --plot u.png
    python -m src.cli paper-checks --seed 7 --towers 20
    python -m src.cli paper-checks --only C1 C10
    python -m src.cli parse-check "rt(X,2)*rt(Y,1) + rt(Z,1)" --vars X Y Z

レポートは標準出力に出す。ログとエラーは標準エラーに出す。
終了コード: 0 成功, 1 受け入れ検査（paper-checks）の不成立, 2 入力の誤り, 3 精度の不足, 4 内部の不整合。
"""
import argparse
import json
import logging
import os
import sys
import time
from typing import Any, Dict, List, Optional

from src.checks.acceptance import CHECK_IDS, CRITERIA, AcceptanceConfig, acceptance_report, run_acceptance
from src.core.errors import AlgebraError, InternalInconsistency, PrecisionError
from src.core.parameters import DEFAULT_MAX_LEVEL, DEFAULT_P, DEFAULT_SEED, Budget
from src.families.diagnostics import family_diagnose
from src.families.families import FAMILY_NAMES, make_family
from src.reports.manifest import load_manifest, manifest_from_dict
from src.reports.report import (
    analyze_tower,
    error_payload,
    family_report,
    parse_check_report,
    render,
    write_report,
)

_logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_INPUT = 2
EXIT_PRECISION = 3
EXIT_INTERNAL = 4


def parse_args(argv: Optional[List[str]] = None):
    """コマンドライン引数をパースする。"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="json", help="出力形式")
    common.add_argument("--output", type=str, default=None, help="レポートの保存先（標準出力にも出す）")
    common.add_argument("--timing", action="store_true", help="所要時間をレポートに含める")
    common.add_argument("-v", "--verbose", action="store_true", help="デバッグログを表示する")

    parser = argparse.ArgumentParser(
        description="F_p(X_1..X_m) の有限純非分離拡大の不変量と加群性の計算"
    )
    subparsers = parser.add_subparsers(dest="command", help="サブコマンド")

    analyze_parser = subparsers.add_parser("analyze", parents=[common], help="マニフェストの塔を解析する")
    analyze_parser.add_argument("manifest", type=str, help="塔のマニフェスト（JSON）")
    analyze_parser.add_argument("--precision", type=int, default=None, help="精度 N（マニフェストより優先）")

    family_parser = subparsers.add_parser("family", parents=[common], help="組み込みの塔の族を診断する")
    family_parser.add_argument("name", type=str, help=f"族の名前（{', '.join(FAMILY_NAMES)}）")
    family_parser.add_argument("--p", type=int, default=DEFAULT_P, help="標数")
    family_parser.add_argument("--var", type=str, default="X", help="simple の変数")
    family_parser.add_argument("--vars", type=str, nargs="+", default=None, help="equiexp の変数（スペース区切り）")
    family_parser.add_argument("--j", type=int, default=2, help="theta の段数")
    family_parser.add_argument("--max-level", type=int, default=DEFAULT_MAX_LEVEL, help="最大レベル")
    family_parser.add_argument("--precision", type=int, default=None, help="精度 N（省略時は族が必要とする値）")
    family_parser.add_argument("--plot", type=str, default=None, help="U 表のヒートマップの保存先")

    acceptance_parser = subparsers.add_parser(
        "paper-checks", aliases=["acceptance"], parents=[common], help="受け入れスイートを実行する"
    )
    acceptance_parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="乱数のシード")
    acceptance_parser.add_argument(
        "--only",
        choices=[*CRITERIA, *CHECK_IDS],
        nargs="+",
        default=None,
        metavar="ID",
        help="実行する検査（C1..C10 または識別子）",
    )
    acceptance_parser.add_argument("--towers", type=int, default=None, help="乱数の塔の本数")

    parse_parser = subparsers.add_parser("parse-check", parents=[common], help="式を構文解析して評価する")
    parse_parser.add_argument("expression", type=str, help="式（rt(X,d) 記法）")
    parse_parser.add_argument("--p", type=int, default=DEFAULT_P, help="標数")
    parse_parser.add_argument("--vars", type=str, nargs="+", default=["X", "Y", "Z"], help="変数（スペース区切り）")
    parse_parser.add_argument("--precision", type=int, default=None, help="精度 N（省略時は式が必要とする値）")

    return parser.parse_args(argv)


# ---------------------------
# 処理本体（MCP サーバーからも使う）
# ---------------------------

def perform_analyze(
    manifest: Any,
    precision: Optional[int] = None,
    timing: bool = False,
) -> Dict[str, Any]:
    """マニフェスト（ファイルのパスまたは辞書）の塔を解析してレポートを返す。"""
    loaded = manifest_from_dict(manifest) if isinstance(manifest, dict) else load_manifest(manifest)
    return analyze_tower(loaded, precision=precision, timing=timing)


def perform_family(
    name: str,
    p: int = DEFAULT_P,
    var: str = "X",
    variables: Optional[List[str]] = None,
    j: int = 2,
    max_level: int = DEFAULT_MAX_LEVEL,
    precision: Optional[int] = None,
    plot: Optional[str] = None,
    timing: bool = False,
) -> Dict[str, Any]:
    """族を診断してレポートを返す。plot を渡すと U 表のヒートマップも保存する。"""
    start = time.perf_counter()
    family = make_family(name, p=p, var=var, variables=variables, j=j)
    diagnostics = family_diagnose(family, max_level, precision)

    plot_path = None
    if plot:
        import matplotlib
        matplotlib.use("Agg")  # ヘッドレス環境用
        from src.families.visualization import save_u_table

        directory = os.path.dirname(plot)
        if directory:
            os.makedirs(directory, exist_ok=True)
        plot_path = save_u_table(diagnostics, plot)
        _logger.info("U 表を保存しました: %s", plot_path)

    elapsed = time.perf_counter() - start if timing else None
    return family_report(diagnostics, plot_path=plot_path, elapsed=elapsed)


def perform_acceptance(
    seed: int = DEFAULT_SEED,
    only: Optional[List[str]] = None,
    towers: Optional[int] = None,
    timing: bool = False,
) -> Dict[str, Any]:
    start = time.perf_counter()
    config = AcceptanceConfig(seed=seed, budget=Budget.from_flags(towers=towers))
    results = run_acceptance(config, only)
    elapsed = time.perf_counter() - start if timing else None
    return acceptance_report(results, config, elapsed)


def perform_parse_check(
    expression: str,
    p: int = DEFAULT_P,
    variables: Optional[List[str]] = None,
    precision: Optional[int] = None,
) -> Dict[str, Any]:
    return parse_check_report(expression, p, list(variables or ["X", "Y", "Z"]), precision)


# ---------------------------
# サブコマンド
# ---------------------------

def emit(report: Dict[str, Any], args) -> None:
    """レポートを標準出力に出し、--output があればファイルにも書く。"""
    text = render(report, args.format)
    print(text)
    if args.output:
        path = write_report(text, args.output)
        _logger.info("レポートを保存しました: %s", path)


def cmd_analyze(args) -> int:
    emit(perform_analyze(args.manifest, precision=args.precision, timing=args.timing), args)
    return EXIT_OK


def cmd_family(args) -> int:
    report = perform_family(
        args.name,
        p=args.p,
        var=args.var,
        variables=args.vars,
        j=args.j,
        max_level=args.max_level,
        precision=args.precision,
        plot=args.plot,
        timing=args.timing,
    )
    emit(report, args)
    return EXIT_OK


def cmd_paper_checks(args) -> int:
    """受け入れスイートを実行する。不成立の検査があれば終了コード 1。"""
    report = perform_acceptance(seed=args.seed, only=args.only, towers=args.towers, timing=args.timing)
    emit(report, args)
    failed = report["results"]["failed_checks"]
    if failed:
        _logger.warning("成り立たなかった検査: %s", ", ".join(failed))
        return EXIT_CHECKS_FAILED
    return EXIT_OK


def cmd_parse_check(args) -> int:
    emit(perform_parse_check(args.expression, p=args.p, variables=args.vars, precision=args.precision), args)
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "family": cmd_family,
    "paper-checks": cmd_paper_checks,
    "acceptance": cmd_paper_checks,
    "parse-check": cmd_parse_check,
}


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, PrecisionError):
        return EXIT_PRECISION
    if isinstance(exc, InternalInconsistency):
        return EXIT_INTERNAL
    return EXIT_INPUT


def main(argv: Optional[List[str]] = None) -> int:
    """メイン関数。"""
    args = parse_args(argv)
    if args.command not in COMMANDS:
        print("Error: コマンドを指定してください。" + " / ".join(COMMANDS), file=sys.stderr)
        return EXIT_INPUT

    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except AlgebraError as e:
        print(json.dumps(error_payload(e), ensure_ascii=False), file=sys.stderr)
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
