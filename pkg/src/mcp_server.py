"""純非分離拡大の計算を提供する MCP サーバー（標準入出力のみ）。"""

import asyncio
import json
import sys
from typing import Any, Dict, List

from mcp.server import Server
from mcp.server.models import InitializationOptions
from mcp.server.stdio import stdio_server
from mcp.types import TextContent, Tool

from src.cli import perform_acceptance, perform_analyze, perform_family, perform_parse_check
from src.core.errors import AlgebraError
from src.core.parameters import DEFAULT_MAX_LEVEL, DEFAULT_P, DEFAULT_SEED, TOOL_VERSION
from src.families.families import FAMILY_NAMES
from src.reports.manifest import load_schema
from src.reports.report import TOOL_NAME, error_payload, render_json

# MCPサーバーのインスタンスを作成
server = Server(TOOL_NAME)


@server.list_tools()
async def handle_list_tools() -> List[Tool]:
    """利用可能なツールのリストを返す。"""
    return [
        Tool(
            name="analyze_tower",
            description="マニフェストで与えた塔の不変量・加群性などを計算します",
            inputSchema=load_schema(),
        ),
        Tool(
            name="diagnose_family",
            description="組み込みの塔の族をレベルごとに打ち切って診断します（U 表・主張の検査）",
            inputSchema={
                "type": "object",
                "properties": {
                    "name": {
                        "type": "string",
                        "enum": list(FAMILY_NAMES),
                        "description": "族の名前",
                    },
                    "p": {
                        "type": "integer",
                        "description": f"標数（デフォルト: {DEFAULT_P}）",
                        "default": DEFAULT_P,
                    },
                    "var": {
                        "type": "string",
                        "description": "simple の変数（デフォルト: X）",
                        "default": "X",
                    },
                    "vars": {
                        "type": "array",
                        "items": {"type": "string"},
                        "description": "equiexp の変数（デフォルト: X, Y）",
                    },
                    "j": {
                        "type": "integer",
                        "description": "theta の段数（デフォルト: 2）",
                        "minimum": 1,
                        "default": 2,
                    },
                    "max_level": {
                        "type": "integer",
                        "description": f"最大レベル（デフォルト: {DEFAULT_MAX_LEVEL}）",
                        "minimum": 1,
                        "default": DEFAULT_MAX_LEVEL,
                    },
                },
                "required": ["name"],
            },
        ),
        Tool(
            name="parse_check",
            description="rt(X,d) 記法の式を構文解析して評価します",
            inputSchema={
                "type": "object",
                "properties": {
                    "expression": {"type": "string", "description": "式"},
                    "p": {"type": "integer", "description": "標数", "default": DEFAULT_P},
                    "vars": {
                        "type": "array",
                        "items": {"type": "string"},
                        "description": "変数（デフォルト: X, Y, Z）",
                    },
                },
                "required": ["expression"],
            },
        ),
        Tool(
            name="paper_checks",
            description="受け入れスイートを実行します（C1..C10）",
            inputSchema={
                "type": "object",
                "properties": {
                    "seed": {"type": "integer", "description": "乱数のシード", "default": DEFAULT_SEED},
                    "only": {
                        "type": "array",
                        "items": {"type": "string"},
                        "description": "実行する検査（C1..C10 または識別子）。省略時はすべて",
                    },
                    "towers": {"type": "integer", "description": "乱数の塔の本数", "minimum": 1},
                },
            },
        ),
    ]


@server.call_tool()
async def handle_call_tool(name: str, arguments: Dict[str, Any]) -> List[TextContent]:
    """ツールの実行を処理する。"""
    try:
        if name == "analyze_tower":
            report = perform_analyze(dict(arguments))
        elif name == "diagnose_family":
            report = perform_family(
                arguments["name"],
                p=arguments.get("p", DEFAULT_P),
                var=arguments.get("var", "X"),
                variables=arguments.get("vars"),
                j=arguments.get("j", 2),
                max_level=arguments.get("max_level", DEFAULT_MAX_LEVEL),
            )
        elif name == "parse_check":
            report = perform_parse_check(
                arguments["expression"],
                p=arguments.get("p", DEFAULT_P),
                variables=arguments.get("vars"),
            )
        elif name == "paper_checks":
            report = perform_acceptance(
                seed=arguments.get("seed", DEFAULT_SEED),
                only=arguments.get("only"),
                towers=arguments.get("towers"),
            )
        else:
            raise ValueError(f"Unknown tool: {name}")
    except AlgebraError as e:
        return [TextContent(type="text", text=json.dumps(error_payload(e), ensure_ascii=False))]
    except Exception as e:
        return [TextContent(type="text", text=f"エラーが発生しました: {str(e)}")]
    return [TextContent(type="text", text=render_json(report))]


async def main():
    """MCPサーバーのメインエントリーポイント。"""
    try:
        # 標準入出力を使ってサーバーを実行
        async with stdio_server() as (read_stream, write_stream):
            await server.run(
                read_stream,
                write_stream,
                InitializationOptions(
                    server_name=TOOL_NAME,
                    server_version=TOOL_VERSION,
                    capabilities={},
                ),
            )
    except Exception as e:
        import traceback
        print(f"MCPサーバーエラー: {e}", file=sys.stderr)
        print("詳細なエラー情報:", file=sys.stderr)
        traceback.print_exc()
        sys.exit(1)


def run():
    """コンソールスクリプト用の同期エントリーポイント。"""
    asyncio.run(main())


if __name__ == "__main__":
    run()
