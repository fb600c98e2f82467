"""作業体 Ω_N の中の有限純非分離拡大 K/k を塔として扱うモジュール。

K = k(α_1, ..., α_n) を生成元の順に積み上げ、各段の指数
d_i = o(α_i, k(α_1..α_{i-1})) と単項式基底 Π α_i^{e_i} (0 <= e_i < p^{d_i}) を持つ。
体の比較・包含・共通部分はすべて k 上の部分空間（座標の既約行階段形）で行う。
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .ambient import (
    Ambient,
    AmbientElement,
    Coordinates,
    Depth,
    ResidueClass,
    coords,
    exponent,
    monomial_exponent,
)
from .errors import (
    AmbientMismatch,
    DimensionMismatch,
    InternalInconsistency,
    NotMember,
    NotPurelyInseparable,
    PrecisionExceeded,
)
from .linalg import nullspace, row_reduce, solve_linear
from .polyfield import RationalFunction

__all__ = [
    "Subspace",
    "PIExtension",
    "RelativeTower",
    "MonomialTower",
    "trivial_extension",
    "build_extension",
    "build_relative",
    "build_over_monomial",
    "member",
    "contains",
    "exponent_over",
    "adjoin",
    "frobenius_subfield",
    "subspace_of",
    "subspace_intersect",
    "subspace_sum",
    "subspace_equal",
    "intersect_with_kpj",
    "kpj_by_class_filter",
    "relative_basis",
    "same_field",
    "is_subfield",
]

_logger = logging.getLogger(__name__)

Row = Tuple[Tuple[ResidueClass, RationalFunction], ...]


# ---------------------------
# 部分空間
# ---------------------------

@dataclass(frozen=True)
class Subspace:
    """Ω_N の k^{p^{-depth}} 上の部分空間。depth が列なら単項式体 F_p(X_i^{p^{-b_i}}) 上。

    rows は既約行階段形の行で、各行は (剰余類, 係数) の組を剰余類の昇順に並べたもの。
    ピボット（各行の最初の剰余類）は狭義に増加する。正準形なので == で比較できる。
    """

    ambient: Ambient
    depth: Depth
    rows: Tuple[Row, ...]

    @classmethod
    def span(cls, ambient: Ambient, vectors: Iterable[Coordinates], depth: Depth = 0) -> "Subspace":
        """座標ベクトルの張る部分空間。"""
        vectors = [v for v in vectors if not v.is_zero()]
        for v in vectors:
            if v.ambient != ambient or v.depth != depth:
                raise AmbientMismatch("作業体または係数体の深さが異なる座標です")
        if not vectors:
            return cls(ambient, depth, ())
        classes = sorted({r for v in vectors for r in v.classes})
        matrix = [[v.get(r) for r in classes] for v in vectors]
        reduced, _ = row_reduce(matrix)
        rows = tuple(
            tuple((r, c) for r, c in zip(classes, row) if not c.is_zero())
            for row in reduced
        )
        return cls(ambient, depth, rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> Tuple[ResidueClass, ...]:
        return tuple(row[0][0] for row in self.rows)

    @cached_property
    def _row_maps(self) -> Tuple[Dict[ResidueClass, RationalFunction], ...]:
        return tuple(dict(row) for row in self.rows)

    @cached_property
    def support(self) -> frozenset:
        return frozenset(r for row in self.rows for r, _ in row)

    def vectors(self) -> List[Coordinates]:
        return [Coordinates(self.ambient, self.depth, dict(row)) for row in self.rows]

    def elements(self) -> List[AmbientElement]:
        """各行を Ω_N の元として組み立てる。"""
        return [v.reconstruct() for v in self.vectors()]

    def reduce(self, v: Coordinates) -> Dict[ResidueClass, RationalFunction]:
        """各ピボットで v を消去した残り（非ゼロ成分のみ）。"""
        rest = dict(v.classes)
        for pivot, row in zip(self.pivots, self._row_maps):
            f = rest.get(pivot)
            if f is None:
                continue
            for r, c in row.items():
                val = rest.get(r, self.ambient.base_zero()) - f * c
                if val.is_zero():
                    rest.pop(r, None)
                else:
                    rest[r] = val
        return rest

    def contains(self, v: Coordinates) -> bool:
        if v.depth != self.depth:
            raise AmbientMismatch("係数体の深さが異なります")
        if not set(v.classes) <= self.support:
            return False
        return not self.reduce(v)


# ---------------------------
# 塔
# ---------------------------

@dataclass(frozen=True)
class PIExtension:
    """有限純非分離拡大 K = k(α_1, ..., α_n)。

    Attributes:
        ambient: 作業体
        generators: 生成元（入力順のまま保持する）
        step_exponents: d_i = o(α_i, k(α_1..α_{i-1}))。0 の生成元は冗長
        basis: 単項式基底 Π α_i^{e_i}
        subspace: basis の張る k 部分空間（生成時に計算される）
    """

    ambient: Ambient
    generators: Tuple[AmbientElement, ...]
    step_exponents: Tuple[int, ...]
    basis: Tuple[AmbientElement, ...]
    subspace: Optional[Subspace] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.subspace is None:
            space = Subspace.span(self.ambient, (coords(b) for b in self.basis))
            object.__setattr__(self, "subspace", space)
        if len(self.basis) != self.ambient.p ** self.degree_exponent:
            raise InternalInconsistency("基底の個数が次数と一致しません")

    @property
    def degree_exponent(self) -> int:
        """log_p [K:k]。"""
        return sum(self.step_exponents)

    @property
    def degree(self) -> Tuple[int, int]:
        """[K:k] を (p, e) の組で返す。"""
        return (self.ambient.p, self.degree_exponent)

    @property
    def redundant(self) -> Tuple[bool, ...]:
        return tuple(d == 0 for d in self.step_exponents)

    @property
    def exponent(self) -> int:
        """o_1(K/k): K^{p^m} ⊆ k となる最小の m。"""
        return max((exponent(g) for g in self.generators), default=0)

    def is_trivial(self) -> bool:
        return self.degree_exponent == 0

    @cached_property
    def basis_coordinates(self) -> Tuple[Coordinates, ...]:
        return tuple(coords(b) for b in self.basis)


@dataclass(frozen=True)
class RelativeTower:
    """部分体 base 上に生成元を積み上げた塔 base(α_1, ..., α_n)。

    basis は base 上の基底（生成元の単項式）で、step_exponents は base 上の相対指数。
    subspace は合成体 base(α_1..α_n) の k 部分空間。
    """

    base: PIExtension
    generators: Tuple[AmbientElement, ...]
    step_exponents: Tuple[int, ...]
    basis: Tuple[AmbientElement, ...]
    subspace: Subspace = field(compare=False, repr=False)

    @property
    def degree_exponent(self) -> int:
        return sum(self.step_exponents)


@dataclass(frozen=True)
class MonomialTower:
    """単項式体 F = F_p(X_1^{p^{-b_1}}, ..., X_m^{p^{-b_m}}) 上の塔 F(α_1, ..., α_n)。

    部分空間は F 上で持つので、F が k 上で大きくても F 上の次数だけの大きさで済む。
    contains・exponent_over・same_field は PIExtension と同じように使える。
    """

    ambient: Ambient
    depth: Tuple[int, ...]
    generators: Tuple[AmbientElement, ...]
    step_exponents: Tuple[int, ...]
    basis: Tuple[AmbientElement, ...]
    subspace: Subspace = field(compare=False, repr=False)

    @property
    def degree_exponent(self) -> int:
        """log_p [F(α):F]。"""
        return sum(self.step_exponents)


def _powers(x: AmbientElement, count: int) -> List[AmbientElement]:
    out = [x.ambient.one()]
    for _ in range(count - 1):
        out.append(out[-1] * x)
    return out


def _exponent_into(x: AmbientElement, space: Subspace) -> int:
    """x^{p^t} ∈ space となる最小の t。"""
    bound = monomial_exponent(x, space.depth)
    for t in range(bound):
        if space.contains(coords(x.pth_power(t), space.depth)):
            return t
    if not space.contains(coords(x.pth_power(bound), space.depth)):
        raise NotPurelyInseparable(f"{x} の p 冪が精度 N = {x.ambient.precision} 以内で k に落ちません")
    return bound


def _check_ambient(ambient: Ambient, elements: Iterable[AmbientElement]) -> Tuple[AmbientElement, ...]:
    out = tuple(elements)
    for g in out:
        if g.ambient != ambient:
            raise AmbientMismatch(
                f"生成元 {g} の作業体 (N={g.ambient.precision}) が塔の作業体 (N={ambient.precision}) と異なります"
            )
    return out


def trivial_extension(ambient: Ambient) -> PIExtension:
    """K = k。"""
    one = ambient.one()
    return PIExtension(ambient, (), (), (one,), Subspace.span(ambient, [coords(one)]))


def _grow(
    amb: Ambient,
    space: Subspace,
    basis: List[AmbientElement],
    steps: List[int],
    gens: Sequence[AmbientElement],
) -> Tuple[Subspace, List[AmbientElement]]:
    """space の係数体上で gens を一つずつ積み上げる（steps は追記される）。"""
    for g in gens:
        d = _exponent_into(g, space)
        steps.append(d)
        if d:
            powers = _powers(g, amb.p ** d)
            basis = [b * gp for gp in powers for b in basis]
            space = Subspace.span(amb, (coords(b, space.depth) for b in basis), space.depth)
        _logger.debug("生成元 %s: 段の指数 %d, 次数 p^%d", g, d, sum(steps))
    return space, basis


def _extend(K: PIExtension, gens: Sequence[AmbientElement]) -> PIExtension:
    amb = K.ambient
    gens = _check_ambient(amb, gens)
    steps = list(K.step_exponents)
    space, basis = _grow(amb, K.subspace, list(K.basis), steps, gens)
    return PIExtension(amb, K.generators + gens, tuple(steps), tuple(basis), space)


def build_extension(ambient: Ambient, gens: Sequence[AmbientElement]) -> PIExtension:
    """生成元から塔 K = k(gens) を組み立てる。

    Raises:
        NotPurelyInseparable: 精度内で k に落ちる p 冪が見つからない
        AmbientMismatch: 生成元の作業体が異なる
    """
    return _extend(trivial_extension(ambient), gens)


def adjoin(K: PIExtension, more: Sequence[AmbientElement]) -> PIExtension:
    """合成体 K(more)。"""
    return _extend(K, more)


def build_relative(base: PIExtension, gens: Sequence[AmbientElement]) -> RelativeTower:
    """base 上に gens を積み上げ、base 上の基底と相対指数を求める。"""
    amb = base.ambient
    gens = _check_ambient(amb, gens)
    steps: List[int] = []
    rel_basis = [amb.one()]
    space = base.subspace
    for g in gens:
        d = _exponent_into(g, space)
        steps.append(d)
        if d:
            powers = _powers(g, amb.p ** d)
            rel_basis = [b * gp for gp in powers for b in rel_basis]
            space = Subspace.span(amb, (coords(s * b) for b in rel_basis for s in base.basis))
    if space.dim != len(base.basis) * len(rel_basis):
        raise InternalInconsistency("相対基底と base の基底の積が一次独立になりません")
    return RelativeTower(base, gens, tuple(steps), tuple(rel_basis), space)


def relative_basis(K: PIExtension, base: PIExtension) -> Tuple[AmbientElement, ...]:
    """base ⊆ K のとき、K の生成元の単項式からなる K/base の基底。"""
    rel = build_relative(base, K.generators)
    if rel.subspace != K.subspace:
        raise NotMember("base は K の部分体ではありません")
    return rel.basis


def build_over_monomial(ambient: Ambient, depth: Depth, gens: Sequence[AmbientElement]) -> MonomialTower:
    """単項式体 F（深さの列 depth）上に gens を積み上げる。"""
    depth = ambient.depth_vector(depth)
    gens = _check_ambient(ambient, gens)
    one = ambient.one()
    space = Subspace.span(ambient, [coords(one, depth)], depth)
    steps: List[int] = []
    space, basis = _grow(ambient, space, [one], steps, gens)
    return MonomialTower(ambient, depth, gens, tuple(steps), tuple(basis), space)


# ---------------------------
# 所属判定
# ---------------------------

def contains(x: AmbientElement, K: Union[PIExtension, MonomialTower]) -> bool:
    """x ∈ K か（既約行階段形による高速判定）。"""
    _check_ambient(K.ambient, [x])
    return K.subspace.contains(coords(x, K.subspace.depth))


def _components(vectors: Sequence[Coordinates]) -> List[List[int]]:
    """剰余類を共有する基底ベクトルを連結成分にまとめる。"""
    parent = list(range(len(vectors)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: Dict[ResidueClass, int] = {}
    for i, v in enumerate(vectors):
        for r in v.classes:
            if r in owner:
                a, b = find(i), find(owner[r])
                if a != b:
                    parent[max(a, b)] = min(a, b)
            else:
                owner[r] = i
    groups: Dict[int, List[int]] = {}
    for i in range(len(vectors)):
        groups.setdefault(find(i), []).append(i)
    return [groups[k] for k in sorted(groups)]


def member(x: AmbientElement, K: PIExtension) -> Tuple[RationalFunction, ...]:
    """x を K の基底で表したときの k 係数。

    係数体 k 上の連立方程式は剰余類を共有する基底ベクトルの成分ごとに分かれるので、
    成分ごとに solve_linear を呼ぶ。

    Returns:
        K.basis と同じ順の係数

    Raises:
        NotMember: x ∉ K
    """
    _check_ambient(K.ambient, [x])
    target = coords(x)
    columns = K.basis_coordinates
    zero = K.ambient.base_zero()
    result = [zero] * len(columns)
    covered = set()
    for group in _components(columns):
        classes = sorted({r for i in group for r in columns[i].classes})
        covered.update(classes)
        if not any(r in target.classes for r in classes):
            continue
        matrix = [[columns[i].get(r) for i in group] for r in classes]
        rhs = [target.get(r) for r in classes]
        sol = solve_linear(matrix, rhs)
        if not sol.consistent:
            raise NotMember(f"{x} は K に属しません")
        for i, c in zip(group, sol.solution):
            result[i] = c
    if not set(target.classes) <= covered:
        raise NotMember(f"{x} は K に属しません")
    return tuple(result)


def exponent_over(x: AmbientElement, K: Union[PIExtension, MonomialTower]) -> int:
    """o(x, K): x^{p^t} ∈ K となる最小の t。

    Raises:
        PrecisionExceeded: 精度 N 以内で見つからない（指数 >= N）
    """
    _check_ambient(K.ambient, [x])
    try:
        return _exponent_into(x, K.subspace)
    except NotPurelyInseparable:
        raise PrecisionExceeded(
            f"指数 >= {K.ambient.precision}（精度 N の上限）", required=K.ambient.precision + 1
        ) from None


def frobenius_subfield(K: PIExtension, s: int) -> PIExtension:
    """k(K^{p^s}) = k(α_1^{p^s}, ..., α_n^{p^s})。"""
    if s < 0:
        raise ValueError("s は非負です")
    if s == 0:
        return K
    return build_extension(K.ambient, [g.pth_power(s) for g in K.generators])


# ---------------------------
# 部分空間の演算
# ---------------------------

def subspace_of(K: PIExtension) -> Subspace:
    return K.subspace


def _check_pair(A: Subspace, B: Subspace) -> None:
    if A.ambient != B.ambient:
        raise AmbientMismatch("異なる作業体の部分空間です")
    if A.depth != B.depth:
        raise DimensionMismatch("係数体の深さが異なる部分空間です")


def subspace_intersect(A: Subspace, B: Subspace) -> Subspace:
    """A ∩ B。Σ a_i A_i = Σ b_j B_j の核から求める。"""
    _check_pair(A, B)
    if not A.dim or not B.dim:
        return Subspace(A.ambient, A.depth, ())
    va, vb = A.vectors(), B.vectors()
    classes = sorted({r for v in va + vb for r in v.classes})
    matrix = [[v.get(r) for v in va] + [-v.get(r) for v in vb] for r in classes]
    kernel = nullspace(matrix)
    amb = A.ambient
    combos = []
    for vec in kernel:
        acc: Dict[ResidueClass, RationalFunction] = {}
        for c, v in zip(vec[: len(va)], va):
            if c.is_zero():
                continue
            for r, val in v.classes.items():
                acc[r] = acc.get(r, amb.base_zero()) + c * val
        combos.append(Coordinates(amb, A.depth, {r: c for r, c in acc.items() if not c.is_zero()}))
    return Subspace.span(amb, combos, A.depth)


def subspace_sum(A: Subspace, B: Subspace) -> Subspace:
    _check_pair(A, B)
    return Subspace.span(A.ambient, A.vectors() + B.vectors(), A.depth)


def subspace_equal(A: Subspace, B: Subspace) -> bool:
    _check_pair(A, B)
    return A.rows == B.rows


def same_field(K: Union[PIExtension, MonomialTower], L: Union[PIExtension, MonomialTower]) -> bool:
    return subspace_equal(K.subspace, L.subspace)


def is_subfield(L: PIExtension, K: PIExtension) -> bool:
    """L ⊆ K か。"""
    return all(contains(g, K) for g in L.generators)


# ---------------------------
# k_j = k^{p^{-j}} ∩ K
# ---------------------------

def _allowed(r: ResidueClass, q: int) -> bool:
    return all(a % q == 0 for a in r)


def _check_level(K: PIExtension, j: int) -> int:
    n = K.ambient.precision
    if j < 0:
        raise ValueError("j は非負です")
    if j > n:
        raise PrecisionExceeded(f"k^(p^-{j}) ∩ K には精度 N >= {j} が必要です", required=j)
    return K.ambient.p ** (n - j)


def _from_subspace(ambient: Ambient, space: Subspace) -> PIExtension:
    """部分空間（体であるもの）の基底を生成元にして塔を組み直す。"""
    return build_extension(ambient, space.elements())


def intersect_with_kpj(K: PIExtension, j: int) -> PIExtension:
    """k_j = k^{p^{-j}} ∩ K を一般の部分空間の共通部分として求める。

    生成元は共通部分の基底そのもの（極小化しない）。K ⊆ k^{p^{-j}} なら K をそのまま返す。
    """
    q = _check_level(K, j)
    amb = K.ambient
    allowed = sorted(r for r in K.subspace.support if _allowed(r, q))
    if len(allowed) == len(K.subspace.support):
        return K
    units = [Coordinates(amb, 0, {r: amb.base_one()}) for r in allowed]
    coordinate_space = Subspace.span(amb, units)
    space = subspace_intersect(K.subspace, coordinate_space)
    _logger.debug("k_%d: 次元 %d（K の次元 %d）", j, space.dim, K.subspace.dim)
    return _from_subspace(amb, space)


def kpj_by_class_filter(K: PIExtension, j: int) -> Subspace:
    """k_j の部分空間を、許されない剰余類への射影の核として求める。"""
    q = _check_level(K, j)
    amb = K.ambient
    rows = K.subspace.vectors()
    disallowed = sorted(r for r in K.subspace.support if not _allowed(r, q))
    if not disallowed:
        return K.subspace
    matrix = [[v.get(r) for v in rows] for r in disallowed]
    kernel = nullspace(matrix)
    combos = []
    for vec in kernel:
        acc: Dict[ResidueClass, RationalFunction] = {}
        for c, v in zip(vec, rows):
            if c.is_zero():
                continue
            for r, val in v.classes.items():
                acc[r] = acc.get(r, amb.base_zero()) + c * val
        combos.append(Coordinates(amb, 0, {r: c for r, c in acc.items() if not c.is_zero()}))
    return Subspace.span(amb, combos)
