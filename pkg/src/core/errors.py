"""例外クラスを集約するモジュール。

CLI はこの階層を見て終了コードを決める（2: 入力エラー, 3: 精度エラー, 4: 内部不整合）。
"""
from __future__ import annotations

from typing import Optional

__all__ = [
    "AlgebraError",
    "BadPrime",
    "ModulusMismatch",
    "VariableSetMismatch",
    "DivisionByZero",
    "DimensionMismatch",
    "DuplicateVariable",
    "UnknownVariable",
    "AmbientMismatch",
    "NoRoot",
    "NotMember",
    "NotPurelyInseparable",
    "PrecisionError",
    "PrecisionLoss",
    "PrecisionExceeded",
    "NotModular",
    "NotTensorRBase",
    "InternalInconsistency",
    "UnknownFamily",
    "UnknownCheck",
    "ExprError",
    "ExprSyntaxError",
    "UnknownToken",
    "ManifestError",
]


class AlgebraError(Exception):
    """本パッケージが送出する例外の基底クラス。"""


# ---------------------------
# 多項式・体の演算
# ---------------------------

class BadPrime(AlgebraError, ValueError):
    """標数 p が素数でない、または対応範囲外。"""


class ModulusMismatch(AlgebraError):
    """異なる標数の値同士を演算しようとした。"""


class VariableSetMismatch(AlgebraError):
    """変数リストの異なる多項式同士を演算しようとした。"""


class DivisionByZero(AlgebraError, ZeroDivisionError):
    """0 による除算。"""


class DimensionMismatch(AlgebraError, ValueError):
    """行列・ベクトルの次元が合わない。"""


class DuplicateVariable(AlgebraError, ValueError):
    """変数名が重複している。"""


class UnknownVariable(AlgebraError, KeyError):
    """宣言されていない変数名。"""

    def __str__(self) -> str:  # KeyError の repr 表示を避ける
        return str(self.args[0]) if self.args else ""


class AmbientMismatch(AlgebraError):
    """異なる作業体 Ω_N の元・部分空間を混ぜた。"""


class NoRoot(AlgebraError):
    """現在の精度では p 乗根が取れない。

    Args:
        message: エラーメッセージ
        required: 根を含む最小の精度 N（分かる場合）。深く埋め込めば取り直せる
    """

    def __init__(self, message: str, required: Optional[int] = None):
        super().__init__(message)
        self.required = required


class NotMember(AlgebraError):
    """元が指定の体に属さない。"""


class NotPurelyInseparable(AlgebraError):
    """精度内で k に落ちる p 冪が見つからない。"""


# ---------------------------
# 精度
# ---------------------------

class PrecisionError(AlgebraError):
    """精度 N に関するエラーの基底クラス。"""


class PrecisionLoss(PrecisionError):
    """より浅い精度への埋め込みを要求された。"""


class PrecisionExceeded(PrecisionError):
    """必要な根の深さが精度 N を超えた。

    Args:
        message: エラーメッセージ
        required: 計算に必要な最小の精度 N（分かる場合）
    """

    def __init__(self, message: str, required: Optional[int] = None):
        super().__init__(message)
        self.required = required


# ---------------------------
# 加群性・族
# ---------------------------

class NotModular(AlgebraError):
    """加群的 (modular) でない拡大に対して加群性前提の操作を行った。"""


class NotTensorRBase(AlgebraError):
    """与えられた r-基底がテンソル条件 [K:k] = Π p^{o(a,k)} を満たさない。"""


class InternalInconsistency(AlgebraError):
    """理論上起こり得ない不整合（二つの判定法の食い違いなど）。"""


class UnknownFamily(AlgebraError, KeyError):
    """未登録の塔の族の名前。"""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class UnknownCheck(AlgebraError, KeyError):
    """未登録の受け入れ検査の識別子。"""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


# ---------------------------
# 入力（式・マニフェスト）
# ---------------------------

class ExprError(AlgebraError):
    """式の字句・構文エラーの基底クラス。"""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (位置 {position})")
        self.position = position


class ExprSyntaxError(ExprError):
    """文法に合わない式。"""


class UnknownToken(ExprError):
    """字句解析で解釈できない文字。"""

    def __init__(self, token: str, position: int):
        super().__init__(f"不明なトークン {token!r}", position)
        self.token = token


class ManifestError(AlgebraError, ValueError):
    """マニフェストがスキーマに合わない。"""
