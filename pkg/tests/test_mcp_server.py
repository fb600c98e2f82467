"""MCP サーバーのツール処理のテスト。"""
import asyncio
import json

from src.mcp_server import handle_call_tool, handle_list_tools


def _call(name, arguments):
    contents = asyncio.run(handle_call_tool(name, arguments))
    assert len(contents) == 1
    return contents[0].text


def test_list_tools():
    tools = asyncio.run(handle_list_tools())
    names = [t.name for t in tools]
    assert names == ["analyze_tower", "diagnose_family", "parse_check", "paper_checks"]
    assert "generators" in tools[0].inputSchema["properties"]


def test_analyze_tower_tool():
    text = _call(
        "analyze_tower",
        {
            "p": 3,
            "variables": ["X", "Y", "Z"],
            "generators": ["rt(X,2)", "rt(X,2)*rt(Y,1) + rt(Z,1)"],
            "analyses": ["invariants"],
        },
    )
    report = json.loads(text)
    assert report["results"][1]["canonical_rbase"]["exponents"] == [2, 1]


def test_diagnose_family_tool():
    report = json.loads(_call("diagnose_family", {"name": "simple", "max_level": 2}))
    assert report["results"]["u_table"]["values"] == [[0, 0], [1, 2]]


def test_parse_check_tool():
    report = json.loads(_call("parse_check", {"expression": "rt(X,1) + Y", "vars": ["X", "Y"]}))
    assert report["results"]["required_precision"] == 1


def test_paper_checks_tool():
    report = json.loads(_call("paper_checks", {"only": ["C1"]}))
    assert report["command"] == "paper-checks"
    assert report["results"]["checks"][0]["id"] == "worked-example"
    assert report["results"]["checks"][0]["criterion"] == "C1"
    assert report["results"]["passed"] is True


def test_paper_checks_tool_unknown_id():
    payload = json.loads(_call("paper_checks", {"only": ["C11"]}))
    assert payload["error"] == "UnknownCheck"
    assert "C11" in payload["message"]


def test_tool_errors():
    payload = json.loads(_call("analyze_tower", {"p": 2}))
    assert payload["error"] == "ManifestError"
    assert _call("no_such_tool", {}).startswith("エラーが発生しました")
