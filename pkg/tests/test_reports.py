"""マニフェストの検証・解析レポート・出力形式のテスト。"""
import json

import pytest

from src.core.errors import (
    BadPrime,
    ExprSyntaxError,
    ManifestError,
    NoRoot,
    PrecisionExceeded,
    UnknownToken,
    UnknownVariable,
)
from src.families.diagnostics import family_diagnose
from src.families.families import family_simple
from src.reports.manifest import KjRequest, load_manifest, manifest_from_dict
from src.reports.report import (
    analyze_tower,
    build_report,
    error_payload,
    family_report,
    parse_check_report,
    render,
    render_json,
    render_text,
    write_report,
)

BASE = {"p": 2, "variables": ["X", "Y"], "generators": ["rt(X,1)", "rt(Y,2)"]}


def _manifest(**changes):
    data = dict(BASE)
    data.update(changes)
    return data


def _by_analysis(report):
    return {r["analysis"]: r for r in report["results"]}


# ---------------------------
# マニフェスト
# ---------------------------

def test_manifest_defaults():
    manifest = manifest_from_dict(BASE)
    assert manifest.analyses == ("invariants", "modularity")
    assert manifest.max_root_depth == 2
    assert manifest.resolved_precision() == 4
    assert manifest.resolved_precision(6) == 6


def test_manifest_kj_request():
    manifest = manifest_from_dict(_manifest(analyses=[{"kj": {"j": 3}}], precision=5))
    assert manifest.analyses == (KjRequest(3),)
    assert manifest.max_requested_j == 3
    assert manifest.resolved_precision() == 5
    assert manifest.to_dict()["analyses"] == [{"kj": {"j": 3}}]


@pytest.mark.parametrize(
    "data",
    [
        {"p": 2, "variables": ["X"]},
        _manifest(p=1),
        _manifest(variables=["X", "X"]),
        _manifest(variables=["1X"]),
        _manifest(generators=[""]),
        _manifest(analyses=["everything"]),
        _manifest(analyses=[{"kj": {"j": -1}}]),
        _manifest(extra=True),
        ["not", "an", "object"],
    ],
)
def test_manifest_schema_errors(data):
    with pytest.raises(ManifestError):
        manifest_from_dict(data)


def test_manifest_expression_errors():
    with pytest.raises(ExprSyntaxError):
        manifest_from_dict(_manifest(generators=["rt(X,"]))
    with pytest.raises(UnknownToken):
        manifest_from_dict(_manifest(generators=["X ? Y"]))


def test_load_manifest_errors(tmp_path):
    with pytest.raises(ManifestError):
        load_manifest(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{ p: 2", encoding="utf-8")
    with pytest.raises(ManifestError) as info:
        load_manifest(broken)
    assert "JSON" in str(info.value)


# ---------------------------
# analyze
# ---------------------------

def test_analyze_nonmodular_manifest(project_dir):
    report = analyze_tower(load_manifest(project_dir / "manifests" / "nonmodular_example.json"))
    assert report["tool"] == "pi-towers"
    assert report["command"] == "analyze"
    assert report["input"]["name"] == "nonmodular-example"
    assert "timing" not in report
    results = _by_analysis(report)
    assert results["tower"]["degree"] == [2, 3]
    assert results["invariants"]["canonical_rbase"]["exponents"] == [2, 1]
    assert results["invariants"]["di"] == 2
    assert results["modularity"]["verdict"] == "not_modular"
    assert results["modularity"]["methods_agree"] is True
    assert results["defining_equations"]["equations"][0]["coefficients"] == {"0": "Z", "1": "Y"}
    assert results["defining_equations"]["verified"] is True
    assert results["kj"]["degree"] == [2, 1]


def test_analyze_simple_manifest(project_dir):
    report = analyze_tower(load_manifest(project_dir / "manifests" / "simple_slice.json"), timing=True)
    results = _by_analysis(report)
    assert results["modularity"]["verdict"] == "modular"
    assert results["stability"]["applicable"] is True
    assert results["equiexponential"]["equiexponential"] is True
    assert results["kj"]["rbase"]["exponents"] == [1]
    assert report["timing"]["seconds"] >= 0


def test_analyze_stability_not_applicable():
    manifest = manifest_from_dict(
        {
            "p": 2,
            "variables": ["X", "Y", "Z"],
            "generators": ["rt(X,2)", "rt(X,2)*rt(Y,1) + rt(Z,1)"],
            "analyses": ["stability", "equiexponential"],
        }
    )
    results = _by_analysis(analyze_tower(manifest, precision=2))
    assert results["stability"] == {"analysis": "stability", "applicable": False, "reason": "K/k は加群的でない"}
    assert results["equiexponential"]["equiexponential"] is False


def test_analyze_errors():
    with pytest.raises(PrecisionExceeded) as info:
        analyze_tower(manifest_from_dict(BASE), precision=1)
    assert info.value.required == 2
    with pytest.raises(UnknownVariable):
        analyze_tower(manifest_from_dict(_manifest(generators=["rt(W,1)"])))
    with pytest.raises(BadPrime):
        analyze_tower(manifest_from_dict(_manifest(p=4)))


def test_analyze_is_deterministic():
    manifest = manifest_from_dict(_manifest(analyses=["invariants", "modularity", {"kj": {"j": 1}}]))
    assert render_json(analyze_tower(manifest)) == render_json(analyze_tower(manifest))


# ---------------------------
# family / parse-check
# ---------------------------

def test_family_report():
    report = family_report(family_diagnose(family_simple("X"), 2), plot_path="u.png")
    assert report["command"] == "family"
    assert report["input"]["max_level"] == 2
    assert report["results"]["plot"] == "u.png"
    assert report["results"]["u_table"]["values"] == [[0, 0], [1, 2]]
    assert len(report["caveats"]) == 2


def test_parse_check_report():
    report = parse_check_report("rt(X,2) * (Y + 1)", 2, ["X", "Y"])
    results = report["results"]
    assert results["canonical"] == "rt(X, 2) * (Y + 1)"
    assert results["variables"] == ["X", "Y"]
    assert results["required_precision"] == 2
    assert results["precision"] == 2
    assert report["input"]["precision"] is None


def test_parse_check_precision_error():
    with pytest.raises(PrecisionExceeded):
        parse_check_report("rt(X,3)", 2, ["X"], precision=2)


# ---------------------------
# 出力
# ---------------------------

def test_build_report_key_order():
    report = build_report("analyze", {"p": 2}, [], ["注意"], elapsed=0.12345)
    assert list(report) == ["tool", "version", "command", "input", "results", "caveats", "timing"]
    assert report["timing"] == {"seconds": 0.123}


def test_render_text():
    report = build_report("x", {"p": 2, "flag": True, "none": None}, [{"degree": [2, 3]}])
    text = render_text(report)
    assert "command: x" in text
    assert "  flag: yes" in text
    assert "  none: -" in text
    assert "    degree: [2, 3]" in text
    assert render(report, "text") == text
    assert json.loads(render(report)) == report


def test_write_report(tmp_path):
    path = write_report("{}", tmp_path / "out" / "report.json")
    assert (tmp_path / "out" / "report.json").read_text(encoding="utf-8") == "{}\n"
    assert path.endswith("report.json")


def test_error_payload():
    try:
        manifest_from_dict(_manifest(generators=["X +"]))
    except ExprSyntaxError as e:
        payload = error_payload(e)
    assert payload["error"] == "ExprSyntaxError"
    assert payload["position"] == 3
    payload = error_payload(PrecisionExceeded("精度不足", required=4))
    assert payload == {"error": "PrecisionExceeded", "message": "精度不足", "required_precision": 4}
    payload = error_payload(NoRoot("根が無い", required=5))
    assert payload == {"error": "NoRoot", "message": "根が無い", "required_precision": 5}
    assert "required_precision" not in error_payload(NoRoot("根が無い"))
