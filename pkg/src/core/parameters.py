"""共通パラメータと既定値を定義するモジュール。

CLI・受け入れスイート・族の診断で共通して扱う定数をここに集約する。
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

__all__ = [
    "DEFAULT_P",
    "MAX_PRIME",
    "DEFAULT_MAX_LEVEL",
    "RANDOM_TOWER_COUNT",
    "MODULAR_TOWER_COUNT",
    "RANDOM_DEGREE_CAP",
    "DEFAULT_SEED",
    "TOOL_VERSION",
    "Budget",
    "auto_precision",
]

# ---------------------------
# 基本定数
# ---------------------------

DEFAULT_P: int = 2  # 既定の標数
MAX_PRIME: int = 97  # 扱う標数の上限
DEFAULT_MAX_LEVEL: int = 3  # 族の診断で計算する最大レベル
RANDOM_TOWER_COUNT: int = 200  # ランダム塔の本数
MODULAR_TOWER_COUNT: int = 50  # ランダムなテンソル型（加群的）塔の本数
RANDOM_DEGREE_CAP: int = 6  # ランダム塔の次数指数 log_p[K:k] の上限（超えたら引き直す）
DEFAULT_SEED: int = 0
TOOL_VERSION: str = "0.1.0"


def auto_precision(max_depth: int, max_j: int = 0) -> int:
    """マニフェストに precision が無いときの精度 N を決める。

    N = (生成元の最大の根の深さ) + (要求された j の最大値) + (想定される指数の最大値)。
    深さ d の元の指数は d 以下なので、最後の項も最大の根の深さで見積もる。
    """
    return max(1, 2 * max_depth + max_j)


# ---------------------------
# まとめて扱いたい場合の dataclass
# ---------------------------

@dataclass(frozen=True)
class Budget:
    """ランダム化スイートの規模をまとめたクラス。"""

    tower_count: int = RANDOM_TOWER_COUNT
    modular_count: int = MODULAR_TOWER_COUNT
    degree_cap: int = RANDOM_DEGREE_CAP

    @classmethod
    def from_flags(
        cls,
        towers: Optional[int] = None,
    ) -> "Budget":
        """CLI フラグ（未指定は None）から Budget を作る。"""
        base = cls()
        return cls(
            tower_count=towers if towers is not None else base.tower_count,
            modular_count=(
                min(towers, base.modular_count) if towers is not None else base.modular_count
            ),
            degree_cap=base.degree_cap,
        )
