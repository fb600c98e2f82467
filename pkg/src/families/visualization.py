"""診断結果の可視化モジュール。"""
from __future__ import annotations

from typing import Optional

import matplotlib.pyplot as plt
import seaborn as sns

from src.families.diagnostics import FamilyDiagnostics


def plot_u_table(diagnostics: FamilyDiagnostics, title: Optional[str] = None):
    """U_s^j の表をヒートマップで表示する（行 s, 列 j）。

    Args:
        diagnostics: family_diagnose の結果
        title: グラフのタイトル（省略可）
    """
    table = diagnostics.table
    rows, cols = table.shape
    plt.figure(figsize=(1.2 * cols + 3, 0.8 * rows + 2))

    ax = sns.heatmap(
        table,
        annot=True,
        fmt="d",
        cmap="viridis",
        cbar_kws={"label": "U"},
        xticklabels=[str(j) for j in range(1, cols + 1)],
        yticklabels=[f"{s} ({c})" for s, c in zip(range(1, rows + 1), diagnostics.row_classes)],
    )

    # グラフの設定
    ax.set_xlabel("j")
    ax.set_ylabel("s")
    family = diagnostics.family
    params = ", ".join(f"{k}={v}" for k, v in family.parameters)
    plt.title(title or f"U 表: {family.name}({params}), p={family.p}")
    plt.tight_layout()

    return plt


def save_u_table(diagnostics: FamilyDiagnostics, path: str) -> str:
    """U 表のヒートマップを保存する。

    Returns:
        保存したファイルのパス
    """
    plot = plot_u_table(diagnostics)
    plot.savefig(path, dpi=300, bbox_inches="tight")
    plt.close("all")
    return path
