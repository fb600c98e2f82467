"""有理関数体 F_p(X) 上の厳密線形代数。

分数を避けるため、各行の分母を払って多項式行列にし、Bareiss の分数なし消去で
階段形を作る。後退代入だけ有理関数で行う。
行は 列番号 → 非ゼロ成分 の疎な辞書で持つ。
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import DimensionMismatch
from .polyfield import MultiPoly, RationalFunction, poly_lcm

__all__ = [
    "LinearSolution",
    "solve_linear",
    "row_reduce",
    "nullspace",
    "rank",
]

_logger = logging.getLogger(__name__)

Matrix = Sequence[Sequence[RationalFunction]]
Vector = Tuple[RationalFunction, ...]


@dataclass(frozen=True)
class LinearSolution:
    """solve_linear の結果。

    Attributes:
        consistent: 右辺に対して解が存在するか
        solution: 自由変数を 0 とした特殊解（解が無ければ None）
        kernel: 核の基底（自由変数の一つを 1、他を 0 とした解）
        rank: 係数行列の階数
        pivots: ピボット列の番号
    """

    consistent: bool
    solution: Optional[Vector]
    kernel: Tuple[Vector, ...]
    rank: int
    pivots: Tuple[int, ...]


# ---------------------------
# 内部処理
# ---------------------------

def _template(matrix: Matrix, rhs: Optional[Sequence[RationalFunction]], like: Optional[RationalFunction]):
    if like is not None:
        return like
    for row in matrix:
        for v in row:
            return v
    if rhs:
        return rhs[0]
    raise DimensionMismatch("空の行列では体が決まりません。like を指定してください")


def _clear_denominators(row: Sequence[RationalFunction]) -> Dict[int, MultiPoly]:
    """行全体に分母の最小公倍元を掛けて多項式の疎な行にする。"""
    nonzero = [(j, v) for j, v in enumerate(row) if not v.is_zero()]
    if not nonzero:
        return {}
    dens = [v.denominator for _, v in nonzero if not v.denominator.is_one()]
    if not dens:
        return {j: v.numerator for j, v in nonzero}
    common = reduce(poly_lcm, dens)
    return {j: v.numerator * common.exact_div(v.denominator) for j, v in nonzero}


def _divide(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    if b.is_constant():
        return a.scale(b.modulus.inverse(b.constant_value()))
    return a.exact_div(b)


def _bareiss(rows: List[Dict[int, MultiPoly]], ncols: int) -> Tuple[List[Dict[int, MultiPoly]], List[int]]:
    """分数なし消去で行階段形にする。最初の ncols 列だけをピボット候補にする。

    Returns:
        (消去後の行, ピボット列)。ピボット行は先頭から len(pivots) 本。
    """
    rows = [dict(r) for r in rows]
    pivots: List[int] = []
    prev: Optional[MultiPoly] = None
    r = 0
    for c in range(ncols):
        if r >= len(rows):
            break
        candidates = [i for i in range(r, len(rows)) if c in rows[i]]
        if not candidates:
            continue
        # 項数の少ない成分をピボットにして膨張を抑える（同数なら行番号順）
        best = min(candidates, key=lambda i: (len(rows[i][c]), i))
        rows[r], rows[best] = rows[best], rows[r]
        prow = rows[r]
        pv = prow[c]
        for i in range(r + 1, len(rows)):
            row = rows[i]
            f = row.get(c)
            if f is None:
                if prev is None or pv == prev:
                    continue
                rows[i] = {j: _divide(pv * v, prev) for j, v in row.items()}
                continue
            new: Dict[int, MultiPoly] = {}
            for j in set(row) | set(prow):
                if j <= c:
                    continue
                val = pv * row.get(j, MultiPoly.zero(pv.modulus, pv.variables))
                if j in prow:
                    val = val - f * prow[j]
                if prev is not None:
                    val = _divide(val, prev)
                if not val.is_zero():
                    new[j] = val
            rows[i] = new
        prev = pv
        pivots.append(c)
        r += 1
    return rows, pivots


def _back_substitute(
    rows: List[Dict[int, MultiPoly]],
    pivots: List[int],
    ncols: int,
    rhs_col: Optional[int],
    free_values: Dict[int, RationalFunction],
    like: RationalFunction,
) -> Vector:
    zero = RationalFunction.zero(like.modulus, like.variables)
    x: List[RationalFunction] = [zero] * ncols
    for col, v in free_values.items():
        x[col] = v
    for k in range(len(pivots) - 1, -1, -1):
        row = rows[k]
        c = pivots[k]
        acc = RationalFunction.from_poly(row[rhs_col]) if rhs_col is not None and rhs_col in row else zero
        for j, a in row.items():
            if j == c or j == rhs_col or x[j].is_zero():
                continue
            acc = acc - RationalFunction.from_poly(a) * x[j]
        x[c] = acc / RationalFunction.from_poly(row[c])
    return tuple(x)


def _poly_rows(matrix: Matrix, ncols: int) -> List[Dict[int, MultiPoly]]:
    rows = []
    for row in matrix:
        if len(row) != ncols:
            raise DimensionMismatch(f"行の長さが揃っていません: {len(row)} != {ncols}")
        rows.append(_clear_denominators(row))
    return rows


# ---------------------------
# 公開 API
# ---------------------------

def solve_linear(
    matrix: Matrix,
    rhs: Optional[Sequence[RationalFunction]] = None,
    *,
    ncols: Optional[int] = None,
    like: Optional[RationalFunction] = None,
) -> LinearSolution:
    """A x = b を F_p(X) 上で厳密に解く。

    Args:
        matrix: 係数行列（行のリスト）
        rhs: 右辺。None のときは斉次系として核だけを求める
        ncols: 列数（行が 0 本のときに必要）
        like: 体を決めるための任意の元（行列が空のときに必要）

    Returns:
        LinearSolution
    """
    nrows = len(matrix)
    if ncols is None:
        if not nrows:
            raise DimensionMismatch("行が無いときは ncols を指定してください")
        ncols = len(matrix[0])
    if rhs is not None and len(rhs) != nrows:
        raise DimensionMismatch(f"右辺の長さ {len(rhs)} が行数 {nrows} と一致しません")
    like = _template(matrix, rhs, like)

    if rhs is None:
        augmented = list(matrix)
    else:
        augmented = [list(row) + [b] for row, b in zip(matrix, rhs)]
    rows = _poly_rows(augmented, ncols + (0 if rhs is None else 1))
    rows, pivots = _bareiss(rows, ncols)
    rank_ = len(pivots)
    _logger.debug("solve_linear: %dx%d, 階数 %d", nrows, ncols, rank_)

    rhs_col = None if rhs is None else ncols
    consistent = True
    if rhs_col is not None:
        consistent = all(rhs_col not in rows[i] for i in range(rank_, len(rows)))

    one = RationalFunction.one(like.modulus, like.variables)
    free = [c for c in range(ncols) if c not in set(pivots)]
    kernel = tuple(
        _back_substitute(rows, pivots, ncols, None, {f: one}, like) for f in free
    )
    solution = None
    if consistent:
        solution = _back_substitute(rows, pivots, ncols, rhs_col, {}, like)
    return LinearSolution(consistent, solution, kernel, rank_, tuple(pivots))


def row_reduce(matrix: Matrix, *, like: Optional[RationalFunction] = None) -> Tuple[Tuple[Vector, ...], Tuple[int, ...]]:
    """既約行階段形 (RREF) を返す。ゼロ行は除く。

    RREF は行空間だけで決まるので、部分空間の正準形として使える。

    Returns:
        (RREF の行, ピボット列)
    """
    if not matrix:
        return (), ()
    ncols = len(matrix[0])
    like = _template(matrix, None, like)
    rows, pivots = _bareiss(_poly_rows(matrix, ncols), ncols)
    zero = RationalFunction.zero(like.modulus, like.variables)

    reduced: List[Dict[int, RationalFunction]] = []
    for k, c in enumerate(pivots):
        pv = RationalFunction.from_poly(rows[k][c])
        reduced.append({j: RationalFunction.from_poly(v) / pv for j, v in rows[k].items() if j >= c})
    # 上方向の消去
    for k in range(len(pivots) - 1, -1, -1):
        c = pivots[k]
        for i in range(k):
            f = reduced[i].get(c)
            if f is None:
                continue
            row_i = reduced[i]
            for j, v in reduced[k].items():
                val = row_i.get(j, zero) - f * v
                if val.is_zero():
                    row_i.pop(j, None)
                else:
                    row_i[j] = val
    dense = tuple(tuple(r.get(j, zero) for j in range(ncols)) for r in reduced)
    return dense, tuple(pivots)


def nullspace(matrix: Matrix, *, ncols: Optional[int] = None, like: Optional[RationalFunction] = None) -> Tuple[Vector, ...]:
    """A x = 0 の解空間の基底。"""
    return solve_linear(matrix, None, ncols=ncols, like=like).kernel


def rank(matrix: Matrix) -> int:
    """係数行列の階数。"""
    if not matrix or not len(matrix[0]):
        return 0
    _, pivots = _bareiss(_poly_rows(matrix, len(matrix[0])), len(matrix[0]))
    return len(pivots)
