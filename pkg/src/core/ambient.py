"""作業体 Ω_N = k^{p^{-N}} = F_p(Y_1, ..., Y_m), Y_i = X_i^{p^{-N}}。

Ω_N の元は根変数 Y_i の有理関数として表す。根変数の内部名は基底変数名に
ROOT_SUFFIX を付けたもので、基底体 k = F_p(X) の有理関数と取り違えると
VariableSetMismatch になる。

k 上の座標は「剰余類」r ∈ {0..p^N-1}^m ごとに分けて持つ。
x = Σ_r c_r · Y^r (c_r ∈ k) という一意な分解で、Ω_N の k 上の基底は単項式 Y^r。
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterator, Mapping, Optional, Sequence, Tuple, Union

from .errors import (
    AmbientMismatch,
    DimensionMismatch,
    DuplicateVariable,
    NoRoot,
    PrecisionExceeded,
    PrecisionLoss,
    UnknownVariable,
)
from .polyfield import Exponent, MultiPoly, PrimeModulus, RationalFunction

__all__ = [
    "ROOT_SUFFIX",
    "ResidueClass",
    "Depth",
    "Ambient",
    "AmbientElement",
    "Coordinates",
    "make_ambient",
    "embed",
    "coords",
    "in_kpj",
    "in_monomial_field",
    "monomial_exponent",
    "exponent",
    "format_element",
    "format_base",
]

_logger = logging.getLogger(__name__)

ROOT_SUFFIX = "~"

ResidueClass = Tuple[int, ...]

# 整数 j なら k^{p^{-j}}、列 (b_1..b_m) なら F_p(X_1^{p^{-b_1}}, ..., X_m^{p^{-b_m}})
Depth = Union[int, Tuple[int, ...]]


def _valuation(n: int, p: int) -> int:
    v = 0
    while n and n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------
# 作業体
# ---------------------------

@dataclass(frozen=True)
class Ambient:
    """作業体 Ω_N の記述子。

    Attributes:
        modulus: 標数
        base_variables: k の変数名 X_1..X_m（宣言順）
        precision: 精度 N
    """

    modulus: PrimeModulus
    base_variables: Tuple[str, ...]
    precision: int

    def __post_init__(self):
        names = tuple(self.base_variables)
        if not names:
            raise ValueError("変数が一つもありません")
        if len(set(names)) != len(names):
            raise DuplicateVariable(f"変数名が重複しています: {names}")
        for name in names:
            if not name.isidentifier():
                raise ValueError(f"変数名として使えません: {name!r}")
        if not isinstance(self.precision, int) or self.precision < 0:
            raise ValueError(f"精度 N は非負整数です: {self.precision!r}")
        object.__setattr__(self, "base_variables", names)

    @property
    def p(self) -> int:
        return self.modulus.p

    @property
    def root_variables(self) -> Tuple[str, ...]:
        return tuple(v + ROOT_SUFFIX for v in self.base_variables)

    @property
    def scale(self) -> int:
        """p^N。X_i = Y_i^{p^N}。"""
        return self.p ** self.precision

    @property
    def degree_exponent(self) -> int:
        """log_p [Ω_N : k] = N·m。"""
        return self.precision * len(self.base_variables)

    def index(self, name: str) -> int:
        try:
            return self.base_variables.index(name)
        except ValueError:
            raise UnknownVariable(f"宣言されていない変数 '{name}'（宣言: {', '.join(self.base_variables)}）") from None

    def with_precision(self, precision: int) -> "Ambient":
        return Ambient(self.modulus, self.base_variables, precision)

    # ---------------------------
    # 元の生成
    # ---------------------------

    def element(self, value: RationalFunction) -> "AmbientElement":
        if value.variables != self.root_variables:
            raise AmbientMismatch(f"根変数 {self.root_variables} の有理関数ではありません: {value.variables}")
        return AmbientElement(self, value)

    def constant(self, c: int) -> "AmbientElement":
        return AmbientElement(self, RationalFunction.constant(self.modulus, self.root_variables, c))

    def zero(self) -> "AmbientElement":
        return self.constant(0)

    def one(self) -> "AmbientElement":
        return self.constant(1)

    def root(self, name: str, depth: int) -> "AmbientElement":
        """X^{p^{-depth}} = Y^{p^{N-depth}}。"""
        i = self.index(name)
        if depth > self.precision:
            raise PrecisionExceeded(
                f"rt({name},{depth}) には精度 N >= {depth} が必要です（現在 N = {self.precision}）",
                required=depth,
            )
        if depth < 0:
            raise ValueError("根の深さは非負です")
        e = [0] * len(self.base_variables)
        e[i] = self.p ** (self.precision - depth)
        poly = MultiPoly.monomial(self.modulus, self.root_variables, e)
        return AmbientElement(self, RationalFunction.from_poly(poly))

    def variable(self, name: str) -> "AmbientElement":
        """基底変数 X そのもの。"""
        return self.root(name, 0)

    # ---------------------------
    # k との行き来
    # ---------------------------

    def base_zero(self) -> RationalFunction:
        return RationalFunction.zero(self.modulus, self.base_variables)

    def base_one(self) -> RationalFunction:
        return RationalFunction.one(self.modulus, self.base_variables)

    def base_variable(self, name: str) -> RationalFunction:
        self.index(name)
        return RationalFunction.variable(self.modulus, self.base_variables, name)

    def depth_vector(self, depth: Depth) -> Tuple[int, ...]:
        """深さ（整数または変数ごとの列）を変数ごとの列にそろえる。"""
        if isinstance(depth, int):
            depth = (depth,) * len(self.base_variables)
        depth = tuple(depth)
        if len(depth) != len(self.base_variables):
            raise DimensionMismatch(f"深さの列 {depth} の長さが変数の個数と一致しません")
        for d in depth:
            if d < 0:
                raise ValueError("深さは非負です")
            if d > self.precision:
                raise PrecisionExceeded(f"深さ {d} は精度 N = {self.precision} を超えます", required=d)
        return depth

    def moduli(self, depth: Depth) -> Tuple[int, ...]:
        """剰余類の法 p^{N-b_i}（変数ごと）。"""
        return tuple(self.p ** (self.precision - d) for d in self.depth_vector(depth))

    def from_base(self, c: RationalFunction, depth: Depth = 0) -> "AmbientElement":
        """係数体 F_p(X_1^{p^{-b_1}}, ...) の元（Z_i = X_i^{p^{-b_i}} の有理関数として与える）を Ω_N に入れる。

        depth が整数 j のときは k^{p^{-j}}。
        """
        if c.variables != self.base_variables:
            raise AmbientMismatch(f"基底変数 {self.base_variables} の有理関数ではありません: {c.variables}")
        scaled = c.scale_exponents(self.moduli(depth)).rename(self.root_variables)
        return AmbientElement(self, scaled)

    def to_base(self, x: "AmbientElement", depth: Depth = 0) -> RationalFunction:
        """係数体の元 x を Z_i = X_i^{p^{-b_i}} の有理関数として取り出す。"""
        self._own(x)
        if not in_monomial_field(x, depth):
            raise NoRoot(f"{format_element(x)} は係数体（深さ {depth}）に属しません")
        return x.value.shrink_exponents(self.moduli(depth)).rename(self.base_variables)

    def _own(self, x: "AmbientElement") -> None:
        if x.ambient != self:
            raise AmbientMismatch("別の作業体の元です")


def make_ambient(p: int, variables: Sequence[str], precision: int) -> Ambient:
    """作業体 Ω_N を作る。"""
    return Ambient(PrimeModulus(p), tuple(variables), precision)


# ---------------------------
# 作業体の元
# ---------------------------

Operand = Union["AmbientElement", int]


@dataclass(frozen=True)
class AmbientElement:
    """Ω_N の元。"""

    ambient: Ambient
    value: RationalFunction

    def _coerce(self, other: Operand) -> "AmbientElement":
        if isinstance(other, int):
            return self.ambient.constant(other)
        if isinstance(other, AmbientElement):
            if other.ambient != self.ambient:
                raise AmbientMismatch(
                    f"作業体が異なります: N={self.ambient.precision} と N={other.ambient.precision}"
                )
            return other
        return NotImplemented  # type: ignore[return-value]

    def _wrap(self, value: RationalFunction) -> "AmbientElement":
        return AmbientElement(self.ambient, value)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._wrap(self.value + other.value)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._wrap(self.value - other.value)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._wrap(other.value - self.value)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._wrap(self.value * other.value)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._wrap(self.value / other.value)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._wrap(other.value / self.value)

    def __neg__(self) -> "AmbientElement":
        return self._wrap(-self.value)

    def __pow__(self, n: int) -> "AmbientElement":
        return self._wrap(self.value ** n)

    def pth_power(self, times: int = 1) -> "AmbientElement":
        """x^{p^times}。"""
        return self._wrap(self.value.frobenius(times))

    def pth_root(self, times: int = 1) -> "AmbientElement":
        """x^{p^{-times}}。Ω_N の中に無ければ NoRoot（required に根を含む精度 N）。"""
        try:
            return self._wrap(self.value.pth_root(times))
        except NoRoot:
            depth = exponent(self) + times
            raise NoRoot(
                f"{format_element(self)} の p^{times} 乗根には精度 N >= {depth} が必要です",
                required=depth,
            ) from None

    def is_zero(self) -> bool:
        return self.value.is_zero()

    def is_one(self) -> bool:
        return self.value.is_one()

    def __str__(self) -> str:
        return format_element(self)


# ---------------------------
# 座標
# ---------------------------

@dataclass(frozen=True)
class Coordinates:
    """x = Σ_r c_r · Y^r の係数（非ゼロのみ）。

    depth = j のとき剰余類 r は {0..p^{N-j}-1}^m を動き、係数 c_r は k^{p^{-j}} の元を
    Z_i = X_i^{p^{-j}} の有理関数として表したもの。depth が変数ごとの列 (b_1..b_m) のときは
    係数体が F_p(X_1^{p^{-b_1}}, ..., X_m^{p^{-b_m}}) になり、r_i は p^{N-b_i} を法とする。
    """

    ambient: Ambient
    depth: Depth
    classes: Mapping[ResidueClass, RationalFunction]

    @property
    def moduli(self) -> Tuple[int, ...]:
        return self.ambient.moduli(self.depth)

    def support(self) -> Tuple[ResidueClass, ...]:
        return tuple(sorted(self.classes))

    def get(self, r: ResidueClass) -> RationalFunction:
        return self.classes.get(r, self.ambient.base_zero())

    def is_zero(self) -> bool:
        return not self.classes

    def __iter__(self) -> Iterator[Tuple[ResidueClass, RationalFunction]]:
        return iter(sorted(self.classes.items()))

    def reconstruct(self) -> AmbientElement:
        """Σ_r c_r · Y^r を組み立て直す。"""
        amb = self.ambient
        total = amb.zero()
        for r, c in self:
            coefficient = amb.from_base(c, self.depth)
            mono = MultiPoly.monomial(amb.modulus, amb.root_variables, r)
            total = total + coefficient * AmbientElement(amb, RationalFunction.from_poly(mono))
        return total


def embed(x: AmbientElement, precision: int) -> AmbientElement:
    """Ω_N → Ω_{N'} (N' >= N)。Y_i ↦ Y_i'^{p^{N'-N}}。"""
    n = x.ambient.precision
    if precision < n:
        raise PrecisionLoss(f"精度 {n} の元を精度 {precision} へは埋め込めません")
    target = x.ambient.with_precision(precision)
    if precision == n:
        return x
    return AmbientElement(target, x.value.scale_exponents(x.ambient.p ** (precision - n)))


def _min_valuations(amb: Ambient, polys: Sequence[MultiPoly]) -> Tuple[int, ...]:
    """変数ごとに、非ゼロ指数の p 進付値の最小値（非ゼロ指数が無ければ N）。"""
    p, n = amb.p, amb.precision
    out = [n] * len(amb.base_variables)
    for poly in polys:
        for e in poly.terms:
            for i, a in enumerate(e):
                if a:
                    out[i] = min(out[i], _valuation(a, p))
    return tuple(out)


def coords(x: AmbientElement, depth: Depth = 0) -> Coordinates:
    """k^{p^{-depth}}（depth が列なら F_p(X_i^{p^{-b_i}})）上の座標を求める。

    分母 g に g^{p^t - 1} を掛けて g^{p^t} を係数体に入れてから、
    分子の各項 Y^a を a_i = p^{N-b_i}·q_i + r_i と分ける。
    """
    amb = x.ambient
    n = amb.precision
    p = amb.p
    shifts = tuple(n - d for d in amb.depth_vector(depth))
    qs = amb.moduli(depth)
    num, den = x.value.numerator, x.value.denominator
    t = 0
    if not den.is_constant():
        t = max(max(0, s - v) for s, v in zip(shifts, _min_valuations(amb, [den])))
    if t:
        num = num * den ** (p ** t - 1)
        den = den.frobenius(t)

    buckets: Dict[ResidueClass, Dict[Exponent, int]] = {}
    for e, c in num.terms.items():
        r = tuple(a % q for a, q in zip(e, qs))
        buckets.setdefault(r, {})[tuple(a // q for a, q in zip(e, qs))] = c
    base_den = den.shrink_exponents(qs).rename(amb.base_variables)
    classes = {
        r: RationalFunction(MultiPoly(amb.modulus, amb.base_variables, terms), base_den)
        for r, terms in buckets.items()
    }
    return Coordinates(amb, depth, classes)


def monomial_exponent(x: AmbientElement, depth: Depth = 0) -> int:
    """x^{p^t} ∈ F_p(X_1^{p^{-b_1}}, ..., X_m^{p^{-b_m}}) となる最小の t。"""
    amb = x.ambient
    shifts = tuple(amb.precision - d for d in amb.depth_vector(depth))
    vals = _min_valuations(amb, [x.value.numerator, x.value.denominator])
    return max((max(0, s - v) for s, v in zip(shifts, vals)), default=0)


def in_monomial_field(x: AmbientElement, depth: Depth) -> bool:
    """x ∈ F_p(X_1^{p^{-b_1}}, ..., X_m^{p^{-b_m}}) か。"""
    return monomial_exponent(x, depth) == 0


def in_kpj(x: AmbientElement, j: int) -> bool:
    """x ∈ k^{p^{-j}} か。

    既約表示 f/g の分子・分母の全ての指数が p^{N-j} で割り切れることと同値。
    """
    n = x.ambient.precision
    if j < 0:
        raise ValueError("j は非負です")
    if j > n:
        raise PrecisionExceeded(f"k^(p^-{j}) を調べるには精度 N >= {j} が必要です", required=j)
    return in_monomial_field(x, j)


def exponent(x: AmbientElement) -> int:
    """x^{p^e} ∈ k となる最小の e（x の k 上の指数）。"""
    return monomial_exponent(x, 0)


# ---------------------------
# 表示
# ---------------------------

def _format_monomial(amb: Ambient, e: Exponent) -> str:
    p, n = amb.p, amb.precision
    factors = []
    for name, a in zip(amb.base_variables, e):
        if not a:
            continue
        s = min(_valuation(a, p), n)
        depth = n - s
        power = a // p ** s
        base = name if depth == 0 else f"rt({name},{depth})"
        factors.append(base if power == 1 else f"{base}^{power}")
    return "*".join(factors)


def _format_poly(amb: Ambient, poly: MultiPoly) -> str:
    if poly.is_zero():
        return "0"
    parts = []
    for e, c in poly.sorted_terms():
        mono = _format_monomial(amb, e)
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts)


def format_element(x: AmbientElement) -> str:
    """rt 記法で表示する。出力は exprparse でそのまま読み戻せる。"""
    amb = x.ambient
    num = _format_poly(amb, x.value.numerator)
    if x.value.denominator.is_one():
        return num
    return f"({num})/({_format_poly(amb, x.value.denominator)})"


def format_base(c: RationalFunction, ambient: Optional[Ambient] = None, depth: Depth = 0) -> str:
    """係数体の元を rt 記法で表示する。"""
    if ambient is None or depth == 0:
        return str(c)
    return format_element(ambient.from_base(c, depth))
