"""乱数で塔を作るモジュール。

生成元は rt 記法の文字列として作ってから評価するので、レポートにそのまま載せられる。
乱数は numpy の Generator をシードから作るため、同じシードなら同じ塔の列になる。
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.core.ambient import Ambient, make_ambient
from src.core.parameters import DEFAULT_P, RANDOM_DEGREE_CAP
from src.core.tower import PIExtension, build_extension
from src.exprparse.evaluator import parse_and_eval

__all__ = [
    "RANDOM_VARIABLES",
    "MAX_ROOT_DEPTH",
    "RandomTower",
    "RandomTowerGenerator",
]

_logger = logging.getLogger(__name__)

RANDOM_VARIABLES: Tuple[str, ...] = ("X", "Y", "Z")
MAX_ROOT_DEPTH = 3
MAX_REDRAWS = 1000


@dataclass(frozen=True)
class RandomTower:
    """乱数で作った塔と、その生成元の式。"""

    tower: PIExtension
    expressions: Tuple[str, ...]

    def to_dict(self) -> dict:
        return {"generators": list(self.expressions), "degree": [self.tower.ambient.p, self.tower.degree_exponent]}


class RandomTowerGenerator:
    """乱数で塔を作るクラス。

    一般の塔は 1..max_generators 個の生成元からなり、各生成元は
    (k の 1 次以下の多項式) · rt(V, d) [· rt(V', d')] の項を 1〜2 個足したもの。
    次数指数が degree_cap を超えた塔は引き直し、回数を redraws に数える。
    """

    def __init__(
        self,
        seed: int,
        p: int = DEFAULT_P,
        variables: Sequence[str] = RANDOM_VARIABLES,
        max_generators: int = 3,
        max_depth: int = MAX_ROOT_DEPTH,
        degree_cap: int = RANDOM_DEGREE_CAP,
    ):
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        self.variables = tuple(variables)
        self.max_generators = max_generators
        self.max_depth = max_depth
        self.degree_cap = degree_cap
        self.ambient: Ambient = make_ambient(p, self.variables, max_depth)
        self.redraws = 0

    @property
    def p(self) -> int:
        return self.ambient.p

    def _choice(self, items: Sequence[str]) -> str:
        return items[int(self.rng.integers(len(items)))]

    def coefficient(self) -> str:
        """k の 0 でない 1 次以下の多項式 a_0 + a_1 X + ... を式にする。"""
        coeffs = self.rng.integers(0, self.p, size=len(self.variables) + 1)
        terms = [str(int(coeffs[0]))] if coeffs[0] else []
        for c, v in zip(coeffs[1:], self.variables):
            if c:
                terms.append(v if c == 1 else f"{int(c)}*{v}")
        return " + ".join(terms) if terms else "1"

    def _root(self, variables: Sequence[str]) -> str:
        v = self._choice(variables)
        d = int(self.rng.integers(1, self.max_depth + 1))
        return f"rt({v},{d})"

    def generator(self, root_variables: Optional[Sequence[str]] = None) -> str:
        """生成元の式。root_variables を渡すと根をその変数だけから取る。"""
        pool = tuple(root_variables) if root_variables else self.variables
        terms = []
        for _ in range(int(self.rng.integers(1, 3))):
            factors = [self._root(pool)]
            if self.rng.random() < 0.5:
                factors.append(self._root(pool))
            terms.append(f"({self.coefficient()})*" + "*".join(factors))
        return " + ".join(terms)

    def _build(self, expressions: Sequence[str]) -> PIExtension:
        return build_extension(self.ambient, [parse_and_eval(e, self.ambient) for e in expressions])

    def _capped(self, draw) -> RandomTower:
        for _ in range(MAX_REDRAWS):
            expressions = tuple(draw())
            K = self._build(expressions)
            if K.degree_exponent <= self.degree_cap:
                return RandomTower(K, expressions)
            self.redraws += 1
            _logger.debug("次数 p^%d が上限を超えたので引き直します: %s", K.degree_exponent, expressions)
        raise RuntimeError(f"{MAX_REDRAWS} 回引き直しても次数の上限 {self.degree_cap} 以下の塔が作れません")

    def tower(self, root_variables: Optional[Sequence[str]] = None) -> RandomTower:
        """一般の塔。root_variables を渡すと k(その変数の根) に含まれる塔になる。"""
        count = int(self.rng.integers(1, self.max_generators + 1))
        return self._capped(lambda: [self.generator(root_variables) for _ in range(count)])

    def towers(self, count: int) -> List[RandomTower]:
        return [self.tower() for _ in range(count)]

    def modular_tower(self) -> RandomTower:
        """変数の異なる単純拡大のテンソル積 K = ⊗ k(a_V)。

        a_V = c·rt(V, e) + c'·rt(V, e') (e' < e, c ≠ 0) は k(a_V) = k(V^{p^{-e}}) を満たすので、
        生成元の列そのものがテンソル r-基底になる。
        """
        count = int(self.rng.integers(1, len(self.variables) + 1))
        chosen = list(self.rng.permutation(len(self.variables))[:count])

        def draw() -> List[str]:
            out = []
            for i in chosen:
                v = self.variables[i]
                e = int(self.rng.integers(1, self.max_depth + 1))
                text = f"({self.coefficient()})*rt({v},{e})"
                if e > 1 and self.rng.random() < 0.5:
                    low = int(self.rng.integers(1, e))
                    text += f" + ({self.coefficient()})*rt({v},{low})"
                out.append(text)
            return out

        return self._capped(draw)

    def subfield(self, K: PIExtension, max_power: int = 2) -> PIExtension:
        """K の生成元の一部（空もあり得る）を、それぞれ p^r 乗（0 <= r <= max_power）して生成される部分体。"""
        mask = self.rng.random(len(K.generators)) < 0.5
        powers = self.rng.integers(0, max_power + 1, size=len(K.generators))
        gens = [g.pth_power(int(r)) for g, keep, r in zip(K.generators, mask, powers) if keep]
        return build_extension(K.ambient, gens)

    def pick(self, items: Sequence, size: int) -> list:
        """items から size 個を順序を保って選ぶ。"""
        size = min(size, len(items))
        idx = sorted(self.rng.choice(len(items), size=size, replace=False)) if size else []
        return [items[int(i)] for i in idx]
