"""式の文法と再帰下降パーサ。

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | atom ('^' INT)?
    atom   := IDENT | INT | '(' expr ')' | 'rt' '(' expr ',' INT ')'

rt(e, d) は e^{p^{-d}} を表す。単項の - は冪より弱く掛け算より強い（-X^2 は -(X^2)）。暗黙の掛け算は無い（Z1 のような複数文字の変数名のため）。
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Union

from src.core.errors import ExprSyntaxError, UnknownToken

__all__ = [
    "Token",
    "Var",
    "IntConst",
    "Add",
    "Sub",
    "Mul",
    "Div",
    "Pow",
    "Root",
    "Neg",
    "ExprAst",
    "tokenize",
    "parse",
    "format_expr",
    "required_depth",
    "variables",
    "ast_to_dict",
]

ROOT_KEYWORD = "rt"


# ---------------------------
# 構文木
# ---------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class IntConst:
    value: int


@dataclass(frozen=True)
class Add:
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class Sub:
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class Mul:
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class Div:
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class Pow:
    base: "ExprAst"
    exponent: int

    def __post_init__(self):
        if self.exponent < 1:
            raise ValueError("冪指数は 1 以上です")


@dataclass(frozen=True)
class Root:
    operand: "ExprAst"
    depth: int

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("根の深さは 1 以上です")


@dataclass(frozen=True)
class Neg:
    operand: "ExprAst"


ExprAst = Union[Var, IntConst, Add, Sub, Mul, Div, Pow, Root, Neg]


# ---------------------------
# 字句解析
# ---------------------------

@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "int", "op", "end"
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    """文字列をトークン列にする。空白は読み飛ばす。"""
    tokens: List[Token] = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit():
            start = i
            while i < len(text) and text[i].isdigit():
                i += 1
            tokens.append(Token("int", text[start:i], start))
            continue
        if c.isascii() and (c.isalpha() or c == "_"):
            start = i
            while i < len(text) and text[i].isascii() and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(Token("ident", text[start:i], start))
            continue
        if c in "+-*/^(),":
            tokens.append(Token("op", c, i))
            i += 1
            continue
        raise UnknownToken(c, i)
    tokens.append(Token("end", "", len(text)))
    return tokens


# ---------------------------
# 構文解析
# ---------------------------

class _Parser:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def accept(self, text: str) -> Optional[Token]:
        if self.current.kind == "op" and self.current.text == text:
            return self.advance()
        return None

    def expect(self, text: str) -> Token:
        token = self.accept(text)
        if token is None:
            found = self.current.text or "入力の終わり"
            raise ExprSyntaxError(f"'{text}' が必要ですが '{found}' がありました", self.current.position)
        return token

    def expect_int(self, what: str) -> int:
        token = self.current
        if token.kind != "int":
            raise ExprSyntaxError(f"{what}には整数が必要です", token.position)
        self.advance()
        return int(token.text)

    def expr(self) -> ExprAst:
        node = self.term()
        while True:
            if self.accept("+"):
                node = Add(node, self.term())
            elif self.accept("-"):
                node = Sub(node, self.term())
            else:
                return node

    def term(self) -> ExprAst:
        node = self.factor()
        while True:
            if self.accept("*"):
                node = Mul(node, self.factor())
            elif self.accept("/"):
                node = Div(node, self.factor())
            else:
                return node

    def factor(self) -> ExprAst:
        if self.accept("-"):
            return Neg(self.factor())
        node = self.atom()
        if self.current.kind == "op" and self.current.text == "^":
            position = self.advance().position
            n = self.expect_int("冪指数")
            if n < 1:
                raise ExprSyntaxError("冪指数は 1 以上です", position)
            node = Pow(node, n)
        return node

    def atom(self) -> ExprAst:
        token = self.current
        if token.kind == "int":
            self.advance()
            return IntConst(int(token.text))
        if token.kind == "ident":
            self.advance()
            if token.text == ROOT_KEYWORD:
                self.expect("(")
                operand = self.expr()
                self.expect(",")
                depth_position = self.current.position
                depth = self.expect_int("根の深さ")
                if depth < 1:
                    raise ExprSyntaxError("根の深さは 1 以上です", depth_position)
                self.expect(")")
                return Root(operand, depth)
            return Var(token.text)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        found = token.text or "入力の終わり"
        raise ExprSyntaxError(f"式が必要ですが '{found}' がありました", token.position)


def parse(text: str) -> ExprAst:
    """式を構文木にする。

    Raises:
        ExprSyntaxError: 文法に合わない（位置つき）
        UnknownToken: 解釈できない文字
    """
    parser = _Parser(tokenize(text))
    node = parser.expr()
    if parser.current.kind != "end":
        raise ExprSyntaxError(f"余分な入力 '{parser.current.text}'", parser.current.position)
    return node


# ---------------------------
# 表示・解析
# ---------------------------

_PRECEDENCE = {Add: 1, Sub: 1, Mul: 2, Div: 2, Pow: 3, Neg: 3}
_SYMBOL = {Add: "+", Sub: "-", Mul: "*", Div: "/"}


def _precedence(node: ExprAst) -> int:
    return _PRECEDENCE.get(type(node), 4)


def _wrap(node: ExprAst, minimum: int) -> str:
    text = format_expr(node)
    return f"({text})" if _precedence(node) < minimum else text


def format_expr(node: ExprAst) -> str:
    """正準な表記で出力する。parse(format_expr(a)) == a。"""
    if isinstance(node, Var):
        return node.name
    if isinstance(node, IntConst):
        return str(node.value)
    if isinstance(node, Root):
        return f"{ROOT_KEYWORD}({format_expr(node.operand)}, {node.depth})"
    if isinstance(node, Pow):
        return f"{_wrap(node.base, 4)}^{node.exponent}"
    if isinstance(node, Neg):
        return f"-{_wrap(node.operand, 3)}"
    prec = _PRECEDENCE[type(node)]
    # 左結合なので右側は一段強く括る
    return f"{_wrap(node.left, prec)} {_SYMBOL[type(node)]} {_wrap(node.right, prec + 1)}"


def required_depth(node: ExprAst) -> int:
    """評価に必要な根の深さ（rt の入れ子の深さの和の最大値）。"""
    if isinstance(node, (Var, IntConst)):
        return 0
    if isinstance(node, Root):
        return required_depth(node.operand) + node.depth
    if isinstance(node, Pow):
        return required_depth(node.base)
    if isinstance(node, Neg):
        return required_depth(node.operand)
    return max(required_depth(node.left), required_depth(node.right))


def variables(node: ExprAst) -> FrozenSet[str]:
    """式に現れる変数名。"""
    if isinstance(node, Var):
        return frozenset({node.name})
    if isinstance(node, IntConst):
        return frozenset()
    if isinstance(node, Root):
        return variables(node.operand)
    if isinstance(node, Pow):
        return variables(node.base)
    if isinstance(node, Neg):
        return variables(node.operand)
    return variables(node.left) | variables(node.right)


def ast_to_dict(node: ExprAst) -> dict:
    """構文木を JSON にできる辞書にする。"""
    if isinstance(node, Var):
        return {"var": node.name}
    if isinstance(node, IntConst):
        return {"int": node.value}
    if isinstance(node, Root):
        return {"rt": ast_to_dict(node.operand), "depth": node.depth}
    if isinstance(node, Pow):
        return {"pow": ast_to_dict(node.base), "exponent": node.exponent}
    if isinstance(node, Neg):
        return {"neg": ast_to_dict(node.operand)}
    return {type(node).__name__.lower(): [ast_to_dict(node.left), ast_to_dict(node.right)]}
