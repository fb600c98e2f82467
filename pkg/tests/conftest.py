import sys
from pathlib import Path

import pytest

# プロジェクトのルートディレクトリを取得
project_root = Path(__file__).parent.parent

# ルートと src ディレクトリをPythonパスに追加
for path in (project_root, project_root / "src"):
    if str(path) not in sys.path:
        sys.path.insert(0, str(path))

from src.core.ambient import make_ambient  # noqa: E402
from src.core.tower import build_extension  # noqa: E402
from src.exprparse.evaluator import parse_and_eval  # noqa: E402
from src.families.families import NONMODULAR_GENERATORS  # noqa: E402


@pytest.fixture
def amb2():
    """p = 2, 変数 X, Y, Z, N = 3 の作業体。"""
    return make_ambient(2, ("X", "Y", "Z"), 3)


@pytest.fixture
def amb3():
    """p = 3, 変数 X, Y, Z, N = 2 の作業体。"""
    return make_ambient(3, ("X", "Y", "Z"), 2)


@pytest.fixture
def el():
    """式の文字列から作業体の元を作る。"""
    return parse_and_eval


@pytest.fixture
def tower():
    """式の列から塔を組み立てる。"""

    def build(ambient, *texts):
        return build_extension(ambient, [parse_and_eval(t, ambient) for t in texts])

    return build


@pytest.fixture(params=[2, 3])
def nonmodular(request):
    """k(X^{p^-2}, X^{p^-2}Y^{p^-1} + Z^{p^-1})（p = 2, 3）。"""
    ambient = make_ambient(request.param, ("X", "Y", "Z"), 2)
    return build_extension(ambient, [parse_and_eval(t, ambient) for t in NONMODULAR_GENERATORS])


@pytest.fixture
def project_dir():
    return project_root
