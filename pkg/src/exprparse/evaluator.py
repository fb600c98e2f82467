"""構文木を作業体 Ω_N の元として評価する。"""
from __future__ import annotations

from src.core.ambient import Ambient, AmbientElement
from src.core.errors import PrecisionExceeded
from src.exprparse.parser import (
    Add,
    Div,
    ExprAst,
    IntConst,
    Mul,
    Neg,
    Pow,
    Root,
    Sub,
    Var,
    parse,
    required_depth,
)

__all__ = ["evaluate", "parse_and_eval"]


def _eval(node: ExprAst, ambient: Ambient) -> AmbientElement:
    if isinstance(node, Var):
        return ambient.variable(node.name)
    if isinstance(node, IntConst):
        return ambient.constant(node.value)
    if isinstance(node, Root):
        return _eval(node.operand, ambient).pth_root(node.depth)
    if isinstance(node, Pow):
        return _eval(node.base, ambient) ** node.exponent
    if isinstance(node, Neg):
        return -_eval(node.operand, ambient)
    left, right = _eval(node.left, ambient), _eval(node.right, ambient)
    if isinstance(node, Add):
        return left + right
    if isinstance(node, Sub):
        return left - right
    if isinstance(node, Mul):
        return left * right
    if isinstance(node, Div):
        return left / right
    raise TypeError(f"不明な構文木 {node!r}")


def evaluate(node: ExprAst, ambient: Ambient) -> AmbientElement:
    """厳密に評価する。整数は p で割った余りになる。

    Raises:
        UnknownVariable: 宣言されていない変数
        PrecisionExceeded: 根の深さが精度 N を超える（required に必要な N）
        DivisionByZero: 0 での除算
    """
    depth = required_depth(node)
    if depth > ambient.precision:
        raise PrecisionExceeded(
            f"式の評価には精度 N >= {depth} が必要です（現在 N = {ambient.precision}）",
            required=depth,
        )
    return _eval(node, ambient)


def parse_and_eval(text: str, ambient: Ambient) -> AmbientElement:
    return evaluate(parse(text), ambient)
