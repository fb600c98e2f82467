"""F_p 上の多変数多項式と有理関数の厳密演算。

* 係数は代表元 0..p-1 で保持する。
* 項は指数ベクトル → 係数 の疎な辞書。ゼロ係数は保持しない（密表現は使わない）。
* 単項式順序は宣言された変数順の次数付き辞書式 (grlex)。正規化の決定性にのみ使う。
* 値は生成後に変更しない。全ての演算は新しいオブジェクトを返す。
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Dict, Mapping, Sequence, Tuple, Union

from .errors import (
    BadPrime,
    DivisionByZero,
    InternalInconsistency,
    ModulusMismatch,
    NoRoot,
    VariableSetMismatch,
)
from .parameters import MAX_PRIME

__all__ = [
    "Exponent",
    "PrimeModulus",
    "MultiPoly",
    "RationalFunction",
    "poly_arith",
    "poly_gcd",
    "poly_lcm",
]

Exponent = Tuple[int, ...]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _grlex_key(e: Exponent) -> Tuple[int, Exponent]:
    return (sum(e), e)


# ---------------------------
# 標数
# ---------------------------

@dataclass(frozen=True)
class PrimeModulus:
    """標数 p。生成時に素数性を検査する。"""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not 2 <= self.p <= MAX_PRIME or not _is_prime(self.p):
            raise BadPrime(f"p は 2 以上 {MAX_PRIME} 以下の素数である必要があります: {self.p!r}")

    def inverse(self, c: int) -> int:
        """F_p での逆元。"""
        c %= self.p
        if c == 0:
            raise DivisionByZero("F_p で 0 の逆元は存在しません")
        return pow(c, -1, self.p)


# ---------------------------
# 多項式
# ---------------------------

@dataclass(frozen=True)
class MultiPoly:
    """F_p[x_1, ..., x_n] の元。

    terms は 指数ベクトル → 非ゼロ係数 の辞書。ゼロ多項式は空辞書。
    """

    modulus: PrimeModulus
    variables: Tuple[str, ...]
    terms: Mapping[Exponent, int]

    def __post_init__(self):
        n = len(self.variables)
        p = self.modulus.p
        clean: Dict[Exponent, int] = {}
        for e, c in self.terms.items():
            e = tuple(int(a) for a in e)
            if len(e) != n or any(a < 0 for a in e):
                raise ValueError(f"不正な指数ベクトル {e} (変数 {self.variables})")
            c %= p
            if c:
                clean[e] = (clean.get(e, 0) + c) % p
                if not clean[e]:
                    del clean[e]
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "terms", clean)

    # ---------------------------
    # ファクトリ
    # ---------------------------

    @classmethod
    def _make(cls, modulus: PrimeModulus, variables: Tuple[str, ...], terms: Dict[Exponent, int]) -> "MultiPoly":
        """正規化済みの項辞書から検査なしで生成する（内部用）。"""
        obj = object.__new__(cls)
        object.__setattr__(obj, "modulus", modulus)
        object.__setattr__(obj, "variables", variables)
        object.__setattr__(obj, "terms", terms)
        return obj

    @classmethod
    def zero(cls, modulus: PrimeModulus, variables: Sequence[str]) -> "MultiPoly":
        return cls._make(modulus, tuple(variables), {})

    @classmethod
    def constant(cls, modulus: PrimeModulus, variables: Sequence[str], c: int) -> "MultiPoly":
        variables = tuple(variables)
        c %= modulus.p
        return cls._make(modulus, variables, {(0,) * len(variables): c} if c else {})

    @classmethod
    def monomial(
        cls, modulus: PrimeModulus, variables: Sequence[str], exponent: Sequence[int], c: int = 1
    ) -> "MultiPoly":
        return cls(modulus, tuple(variables), {tuple(exponent): c})

    @classmethod
    def variable(cls, modulus: PrimeModulus, variables: Sequence[str], name: str) -> "MultiPoly":
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls._make(modulus, variables, {tuple(e): 1})

    def _like(self, terms: Dict[Exponent, int]) -> "MultiPoly":
        return MultiPoly._make(self.modulus, self.variables, terms)

    # ---------------------------
    # プロパティ
    # ---------------------------

    @property
    def p(self) -> int:
        return self.modulus.p

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> int:
        """定数多項式の値（定数でなければ ValueError）。"""
        if not self.terms:
            return 0
        if not self.is_constant():
            raise ValueError("定数多項式ではありません")
        return next(iter(self.terms.values()))

    def is_one(self) -> bool:
        return self.is_constant() and self.constant_value() == 1

    def leading_term(self) -> Tuple[Exponent, int]:
        """grlex での先頭項 (指数, 係数)。"""
        if not self.terms:
            raise ValueError("ゼロ多項式に先頭項はありません")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def degree_in(self, i: int) -> int:
        """i 番目の変数についての次数（ゼロ多項式は -1）。"""
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    # ---------------------------
    # 算術
    # ---------------------------

    def _check(self, other: "MultiPoly") -> None:
        if self.modulus.p != other.modulus.p:
            raise ModulusMismatch(f"標数が異なります: {self.p} と {other.p}")
        if self.variables != other.variables:
            raise VariableSetMismatch(f"変数が異なります: {self.variables} と {other.variables}")

    def _coerce(self, other: Union["MultiPoly", int]) -> "MultiPoly":
        if isinstance(other, int):
            return MultiPoly.constant(self.modulus, self.variables, other)
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.p
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = (terms.get(e, 0) + c) % p
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return self._like(terms)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        p = self.p
        return self._like({e: (-c) % p for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def scale(self, c: int) -> "MultiPoly":
        """定数倍。"""
        p = self.p
        c %= p
        if not c:
            return self._like({})
        return self._like({e: (v * c) % p for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.terms or not other.terms:
            return self._like({})
        if other.is_constant():
            return self.scale(other.constant_value())
        if self.is_constant():
            return other.scale(self.constant_value())
        p = self.p
        terms: Dict[Exponent, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = (terms.get(e, 0) + c1 * c2) % p
                if v:
                    terms[e] = v
                else:
                    terms.pop(e, None)
        return self._like(terms)

    __rmul__ = __mul__

    def frobenius(self, times: int = 1) -> "MultiPoly":
        """f ↦ f^{p^times}。F_p 係数は p 乗で不変なので指数を p^times 倍するだけ。"""
        if times == 0:
            return self
        return self.scale_exponents(self.p ** times)

    def _factors(self, factor: Union[int, Sequence[int]]) -> Tuple[int, ...]:
        if isinstance(factor, int):
            return (factor,) * len(self.variables)
        factor = tuple(factor)
        if len(factor) != len(self.variables):
            raise VariableSetMismatch("倍率の個数が変数の個数と一致しません")
        return factor

    def scale_exponents(self, factor: Union[int, Sequence[int]]) -> "MultiPoly":
        """指数を factor 倍する（変数ごとの倍率の列も可）。"""
        fs = self._factors(factor)
        return self._like({tuple(a * f for a, f in zip(e, fs)): c for e, c in self.terms.items()})

    def shrink_exponents(self, factor: Union[int, Sequence[int]]) -> "MultiPoly":
        """指数を factor で割る（割り切れなければ ValueError）。"""
        fs = self._factors(factor)
        terms: Dict[Exponent, int] = {}
        for e, c in self.terms.items():
            if any(a % f for a, f in zip(e, fs)):
                raise ValueError(f"指数が {factor} で割り切れません: {e}")
            terms[tuple(a // f for a, f in zip(e, fs))] = c
        return self._like(terms)

    def pth_root(self, times: int = 1) -> "MultiPoly":
        """f^{p^{-times}}。全ての指数が p^times で割り切れるときだけ存在する。"""
        factor = self.p ** times
        if any(a % factor for e in self.terms for a in e):
            raise NoRoot(f"{self} は F_p[...] の p^{times} 乗ではありません")
        return self.shrink_exponents(factor)

    def __pow__(self, n: int) -> "MultiPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("多項式の冪指数は非負整数です")
        result = MultiPoly.constant(self.modulus, self.variables, 1)
        # p 進展開: f^n = Π_i (f^{p^i})^{d_i}
        base = self
        while n:
            n, d = divmod(n, self.p)
            for _ in range(d):
                result = result * base
            if n:
                base = base.frobenius()
        return result

    def monic(self) -> "MultiPoly":
        """先頭係数を 1 にした多項式（ゼロはそのまま）。"""
        if not self.terms:
            return self
        _, c = self.leading_term()
        if c == 1:
            return self
        return self.scale(self.modulus.inverse(c))

    def divmod(self, divisor: "MultiPoly") -> Tuple["MultiPoly", "MultiPoly"]:
        """grlex による一変数除数の多変数割り算。(商, 余り) を返す。"""
        self._check(divisor)
        if divisor.is_zero():
            raise DivisionByZero("ゼロ多項式で割ることはできません")
        p = self.p
        if divisor.is_constant():
            return self.scale(self.modulus.inverse(divisor.constant_value())), self._like({})
        lt_e, lt_c = divisor.leading_term()
        inv = self.modulus.inverse(lt_c)
        quotient: Dict[Exponent, int] = {}
        remainder: Dict[Exponent, int] = {}
        f = dict(self.terms)
        while f:
            e = max(f, key=_grlex_key)
            c = f[e]
            if all(a >= b for a, b in zip(e, lt_e)):
                m = tuple(a - b for a, b in zip(e, lt_e))
                t = (c * inv) % p
                quotient[m] = (quotient.get(m, 0) + t) % p
                for de, dc in divisor.terms.items():
                    ne = tuple(a + b for a, b in zip(m, de))
                    v = (f.get(ne, 0) - t * dc) % p
                    if v:
                        f[ne] = v
                    else:
                        f.pop(ne, None)
            else:
                remainder[e] = c
                del f[e]
        return self._like({e: c for e, c in quotient.items() if c}), self._like(remainder)

    def exact_div(self, divisor: "MultiPoly") -> "MultiPoly":
        """割り切れることが分かっている除算。"""
        q, r = self.divmod(divisor)
        if not r.is_zero():
            raise InternalInconsistency(f"{self} は {divisor} で割り切れません")
        return q

    def divides(self, other: "MultiPoly") -> bool:
        """self が other を割り切るか。"""
        _, r = other.divmod(self)
        return r.is_zero()

    def __truediv__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self, other)

    def rename(self, variables: Sequence[str]) -> "MultiPoly":
        """項はそのままに変数名だけ付け替える。"""
        variables = tuple(variables)
        if len(variables) != len(self.variables):
            raise VariableSetMismatch("変数の個数が一致しません")
        return MultiPoly._make(self.modulus, variables, dict(self.terms))

    # ---------------------------
    # 比較・表示
    # ---------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self == MultiPoly.constant(self.modulus, self.variables, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (
            self.modulus.p == other.modulus.p
            and self.variables == other.variables
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.modulus.p, self.variables, frozenset(self.terms.items())))

    def sorted_terms(self) -> list:
        """grlex 降順の項リスト。"""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for name, a in zip(self.variables, e):
                if a == 1:
                    factors.append(name)
                elif a > 1:
                    factors.append(f"{name}^{a}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"MultiPoly({self}; p={self.p}, vars={self.variables})"


# ---------------------------
# GCD（内容・原始部分による再帰 + 原始 PRS）
# ---------------------------

def _coefficients_in(a: MultiPoly, i: int) -> Dict[int, MultiPoly]:
    """a を x_i の多項式とみたときの係数（他の変数の多項式）。"""
    groups: Dict[int, Dict[Exponent, int]] = {}
    for e, c in a.terms.items():
        groups.setdefault(e[i], {})[e[:i] + (0,) + e[i + 1:]] = c
    return {d: a._like(terms) for d, terms in groups.items()}


def _leading_coefficient_in(a: MultiPoly, i: int) -> Tuple[int, MultiPoly]:
    d = a.degree_in(i)
    terms = {e[:i] + (0,) + e[i + 1:]: c for e, c in a.terms.items() if e[i] == d}
    return d, a._like(terms)


def _shift(a: MultiPoly, i: int, k: int) -> MultiPoly:
    """a · x_i^k。"""
    if k == 0:
        return a
    return a._like({e[:i] + (e[i] + k,) + e[i + 1:]: c for e, c in a.terms.items()})


def _pseudo_remainder(a: MultiPoly, b: MultiPoly, i: int) -> MultiPoly:
    db, lcb = _leading_coefficient_in(b, i)
    r = a
    while not r.is_zero():
        dr, lcr = _leading_coefficient_in(r, i)
        if dr < db:
            break
        r = r * lcb - _shift(lcr * b, i, dr - db)
    return r


def _content(a: MultiPoly, i: int) -> MultiPoly:
    coeffs = [c for _, c in sorted(_coefficients_in(a, i).items())]
    return reduce(lambda x, y: _gcd_rec(x, y, i + 1), coeffs).monic()


def _gcd_rec(a: MultiPoly, b: MultiPoly, i: int) -> MultiPoly:
    """非ゼロの a, b（変数 x_i 以降のみを含む）の GCD。定数倍は不定。"""
    n = len(a.variables)
    while i < n and a.degree_in(i) <= 0 and b.degree_in(i) <= 0:
        i += 1
    if i == n:
        return MultiPoly.constant(a.modulus, a.variables, 1)
    ca, cb = _content(a, i), _content(b, i)
    g_content = _gcd_rec(ca, cb, i + 1)
    pa, pb = a.exact_div(ca), b.exact_div(cb)
    if pa.degree_in(i) < pb.degree_in(i):
        pa, pb = pb, pa
    while not pb.is_zero():
        r = _pseudo_remainder(pa, pb, i)
        if not r.is_zero():
            r = r.exact_div(_content(r, i))
        pa, pb = pb, r
    return g_content * pa


def _monomial_gcd(a: MultiPoly, m: MultiPoly) -> MultiPoly:
    """m が単項式のときの gcd(a, m)。"""
    (me, _), = m.terms.items()
    e = list(me)
    for te in a.terms:
        e = [min(x, y) for x, y in zip(e, te)]
    return a._like({tuple(e): 1})


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """最大公約元（先頭係数 1 に正規化）。gcd(0, 0) = 0。"""
    a._check(b)
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_constant() or b.is_constant():
        return MultiPoly.constant(a.modulus, a.variables, 1)
    if len(b.terms) == 1:
        return _monomial_gcd(a, b)
    if len(a.terms) == 1:
        return _monomial_gcd(b, a)
    return _gcd_rec(a, b, 0).monic()


def poly_lcm(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """最小公倍元（先頭係数 1）。"""
    if a.is_zero() or b.is_zero():
        return a._like({})
    if a == b:
        return a.monic()
    return (a * b).exact_div(poly_gcd(a, b)).monic()


# ---------------------------
# 有理関数
# ---------------------------

@dataclass(frozen=True)
class RationalFunction:
    """F_p(x_1, ..., x_n) の元。

    分母は非ゼロ、分子と分母は互いに素、分母の先頭係数は 1。
    """

    numerator: MultiPoly
    denominator: MultiPoly

    def __post_init__(self):
        num, den = self.numerator, self.denominator
        num._check(den)
        if den.is_zero():
            raise DivisionByZero("分母がゼロです")
        num, den = _normalize(num, den)
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    @classmethod
    def _make(cls, num: MultiPoly, den: MultiPoly) -> "RationalFunction":
        obj = object.__new__(cls)
        object.__setattr__(obj, "numerator", num)
        object.__setattr__(obj, "denominator", den)
        return obj

    @classmethod
    def from_poly(cls, f: MultiPoly) -> "RationalFunction":
        return cls._make(f, MultiPoly.constant(f.modulus, f.variables, 1))

    @classmethod
    def zero(cls, modulus: PrimeModulus, variables: Sequence[str]) -> "RationalFunction":
        return cls.from_poly(MultiPoly.zero(modulus, variables))

    @classmethod
    def one(cls, modulus: PrimeModulus, variables: Sequence[str]) -> "RationalFunction":
        return cls.constant(modulus, variables, 1)

    @classmethod
    def constant(cls, modulus: PrimeModulus, variables: Sequence[str], c: int) -> "RationalFunction":
        return cls.from_poly(MultiPoly.constant(modulus, variables, c))

    @classmethod
    def variable(cls, modulus: PrimeModulus, variables: Sequence[str], name: str) -> "RationalFunction":
        return cls.from_poly(MultiPoly.variable(modulus, variables, name))

    # ---------------------------
    # プロパティ
    # ---------------------------

    @property
    def modulus(self) -> PrimeModulus:
        return self.numerator.modulus

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.numerator.variables

    @property
    def p(self) -> int:
        return self.numerator.p

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def is_one(self) -> bool:
        return self.numerator.is_one() and self.denominator.is_one()

    def is_constant(self) -> bool:
        return self.numerator.is_constant() and self.denominator.is_constant()

    def is_polynomial(self) -> bool:
        return self.denominator.is_one()

    # ---------------------------
    # 算術
    # ---------------------------

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, int):
            return RationalFunction.constant(self.modulus, self.variables, other)
        if isinstance(other, MultiPoly):
            self.numerator._check(other)
            return RationalFunction.from_poly(other)
        if isinstance(other, RationalFunction):
            self.numerator._check(other.numerator)
            return other
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.denominator == other.denominator:
            num = self.numerator + other.numerator
            if self.denominator.is_one():
                return RationalFunction._make(num, self.denominator)
            return RationalFunction(num, self.denominator)
        num = self.numerator * other.denominator + other.numerator * self.denominator
        return RationalFunction(num, self.denominator * other.denominator)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction._make(-self.numerator, self.denominator)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RationalFunction.zero(self.modulus, self.variables)
        if self.denominator.is_one() and other.denominator.is_one():
            return RationalFunction._make(self.numerator * other.numerator, self.denominator)
        # 交差約分で係数の膨張を抑える
        g1 = poly_gcd(self.numerator, other.denominator)
        g2 = poly_gcd(other.numerator, self.denominator)
        num = self.numerator.exact_div(g1) * other.numerator.exact_div(g2)
        den = self.denominator.exact_div(g2) * other.denominator.exact_div(g1)
        return RationalFunction(num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise DivisionByZero("ゼロの逆元は存在しません")
        return RationalFunction(self.denominator, self.numerator)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("ゼロで割ることはできません")
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n: int) -> "RationalFunction":
        if not isinstance(n, int):
            raise ValueError("冪指数は整数です")
        if n < 0:
            return self.inverse() ** (-n)
        # 既約分数の冪は既約のまま
        return RationalFunction._make(self.numerator ** n, self.denominator ** n)

    def frobenius(self, times: int = 1) -> "RationalFunction":
        """x ↦ x^{p^times}（既約性・分母のモニック性は保たれる）。"""
        return RationalFunction._make(self.numerator.frobenius(times), self.denominator.frobenius(times))

    def pth_root(self, times: int = 1) -> "RationalFunction":
        """x^{p^{-times}}。分子・分母の全ての指数が p^times で割り切れるときのみ。"""
        return RationalFunction._make(self.numerator.pth_root(times), self.denominator.pth_root(times))

    def scale_exponents(self, factor: Union[int, Sequence[int]]) -> "RationalFunction":
        return RationalFunction._make(
            self.numerator.scale_exponents(factor), self.denominator.scale_exponents(factor)
        )

    def shrink_exponents(self, factor: Union[int, Sequence[int]]) -> "RationalFunction":
        return RationalFunction._make(
            self.numerator.shrink_exponents(factor), self.denominator.shrink_exponents(factor)
        )

    def rename(self, variables: Sequence[str]) -> "RationalFunction":
        return RationalFunction._make(self.numerator.rename(variables), self.denominator.rename(variables))

    # ---------------------------
    # 比較・表示
    # ---------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, MultiPoly)):
            other = self._coerce(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.numerator == other.numerator and self.denominator == other.denominator

    def __hash__(self) -> int:
        return hash((self.numerator, self.denominator))

    def __str__(self) -> str:
        if self.denominator.is_one():
            return str(self.numerator)
        return f"({self.numerator})/({self.denominator})"

    def __repr__(self) -> str:
        return f"RationalFunction({self}; p={self.p}, vars={self.variables})"


def _normalize(num: MultiPoly, den: MultiPoly) -> Tuple[MultiPoly, MultiPoly]:
    """約分して分母をモニックにする。"""
    one = MultiPoly.constant(num.modulus, num.variables, 1)
    if num.is_zero():
        return num, one
    if den.is_constant():
        inv = num.modulus.inverse(den.constant_value())
        return num.scale(inv), one
    g = poly_gcd(num, den)
    if not g.is_one():
        num, den = num.exact_div(g), den.exact_div(g)
    _, lc = den.leading_term()
    if lc != 1:
        inv = num.modulus.inverse(lc)
        num, den = num.scale(inv), den.scale(inv)
    return num, den


# ---------------------------
# 公開 API
# ---------------------------

Operand = Union[MultiPoly, RationalFunction]


def poly_arith(a: Operand, b: Operand, op: str) -> Union[MultiPoly, RationalFunction]:
    """a op b を計算する。op は add / sub / mul / div。

    多項式同士の div は正規化された有理関数を返す。
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"不明な演算 '{op}'")

