"""塔のマニフェスト（JSON）の読み込みと検証。

    {
      "p": 2,
      "variables": ["X", "Y", "Z"],
      "generators": ["rt(X,2)", "rt(X,2)*rt(Y,1)+rt(Z,1)"],
      "analyses": ["invariants", "modularity", {"kj": {"j": 1}}]
    }
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import jsonschema

from src.core.ambient import Ambient, AmbientElement, make_ambient
from src.core.errors import ManifestError
from src.core.parameters import auto_precision
from src.exprparse.evaluator import evaluate
from src.exprparse.parser import ExprAst, parse, required_depth

__all__ = [
    "SCHEMA_PATH",
    "DEFAULT_ANALYSES",
    "KjRequest",
    "TowerManifest",
    "load_schema",
    "validate_manifest",
    "manifest_from_dict",
    "load_manifest",
]

_logger = logging.getLogger(__name__)

SCHEMA_PATH = Path(__file__).resolve().parent / "schemas" / "tower_manifest.schema.json"
DEFAULT_ANALYSES = ("invariants", "modularity")


@dataclass(frozen=True)
class KjRequest:
    """k_j = k^{p^{-j}} ∩ K の計算要求。"""

    j: int

    def to_dict(self) -> dict:
        return {"kj": {"j": self.j}}


Analysis = Union[str, KjRequest]


@dataclass(frozen=True)
class TowerManifest:
    """検証済みのマニフェスト。

    Attributes:
        p: 標数
        variables: 変数名
        generators: 生成元の式（入力どおり）
        asts: 生成元の構文木
        analyses: 行う解析
        precision: 明示された精度 N（無ければ None）
        name: マニフェストの名前
    """

    p: int
    variables: Tuple[str, ...]
    generators: Tuple[str, ...]
    asts: Tuple[ExprAst, ...]
    analyses: Tuple[Analysis, ...]
    precision: Optional[int] = None
    name: Optional[str] = None

    @property
    def max_root_depth(self) -> int:
        return max((required_depth(a) for a in self.asts), default=0)

    @property
    def max_requested_j(self) -> int:
        return max((a.j for a in self.analyses if isinstance(a, KjRequest)), default=0)

    def resolved_precision(self, override: Optional[int] = None) -> int:
        """使う精度 N。override > マニフェストの precision > 自動決定 の順。"""
        if override is not None:
            return override
        if self.precision is not None:
            return self.precision
        return auto_precision(self.max_root_depth, self.max_requested_j)

    def ambient(self, override: Optional[int] = None) -> Ambient:
        return make_ambient(self.p, self.variables, self.resolved_precision(override))

    def elements(self, ambient: Ambient) -> List[AmbientElement]:
        return [evaluate(a, ambient) for a in self.asts]

    def to_dict(self) -> dict:
        out: Dict[str, Any] = {}
        if self.name is not None:
            out["name"] = self.name
        out["p"] = self.p
        out["variables"] = list(self.variables)
        out["precision"] = self.precision
        out["generators"] = list(self.generators)
        out["analyses"] = [a.to_dict() if isinstance(a, KjRequest) else a for a in self.analyses]
        return out


@lru_cache(maxsize=1)
def load_schema() -> dict:
    with open(SCHEMA_PATH, encoding="utf-8") as f:
        return json.load(f)


def validate_manifest(data: Any) -> None:
    """スキーマで検証する。

    Raises:
        ManifestError: スキーマに合わない（場所つきのメッセージ）
    """
    try:
        jsonschema.validate(instance=data, schema=load_schema())
    except jsonschema.ValidationError as e:
        where = "/".join(str(x) for x in e.absolute_path) or "(ルート)"
        raise ManifestError(f"マニフェストがスキーマに合いません: {where}: {e.message}") from None


def _analysis(item: Any) -> Analysis:
    if isinstance(item, dict):
        return KjRequest(item["kj"]["j"])
    return item


def manifest_from_dict(data: Any) -> TowerManifest:
    """辞書を検証し、生成元を構文解析して TowerManifest にする。

    Raises:
        ManifestError: スキーマに合わない
        ExprSyntaxError: 生成元の式が文法に合わない
        UnknownToken: 生成元の式に解釈できない文字がある
    """
    validate_manifest(data)
    asts = tuple(parse(text) for text in data["generators"])
    analyses = tuple(_analysis(a) for a in data.get("analyses", DEFAULT_ANALYSES))
    return TowerManifest(
        p=data["p"],
        variables=tuple(data["variables"]),
        generators=tuple(data["generators"]),
        asts=asts,
        analyses=analyses,
        precision=data.get("precision"),
        name=data.get("name"),
    )


def load_manifest(path: Union[str, Path]) -> TowerManifest:
    """JSON ファイルからマニフェストを読み込む。

    Raises:
        ManifestError: 読めない・JSON でない・スキーマに合わない
    """
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise ManifestError(f"マニフェストを読めません: {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ManifestError(f"JSON として読めません: {path}: {e.msg} (行 {e.lineno})") from None
    _logger.debug("マニフェスト %s を読み込みました", path)
    return manifest_from_dict(data)
