"""Shared fixtures: settings pinned to the bundled corpus, an engine, the corpus and a matrix loader."""

from pathlib import Path
from typing import Callable

import pytest

from hermlcd.config import Settings
from hermlcd.core.code import LinearCode
from hermlcd.core.qmat import read_qmat
from hermlcd.services.corpus import Corpus
from hermlcd.services.weights import WeightEngine

DATA_DIR = Path(__file__).resolve().parents[1] / "data"
MATRICES_DIR = DATA_DIR / "matrices"


@pytest.fixture
def settings() -> Settings:
    return Settings(_env_file=None, data_dir=str(DATA_DIR), workers=2)


@pytest.fixture
def engine(settings: Settings):
    with WeightEngine(settings) as engine:
        yield engine


@pytest.fixture(scope="session")
def corpus() -> Corpus:
    return Corpus.load(DATA_DIR)


@pytest.fixture
def load_code() -> Callable[[str], LinearCode]:
    """Code spanned by a bundled matrix, e.g. ``load_code("g_7_19")``."""

    def _load(name: str) -> LinearCode:
        document = read_qmat(MATRICES_DIR / f"{name}.qmat")
        return LinearCode.from_generator(document.matrix, label=document.matrix_id)

    return _load


MINI_RECIPES = """\
id=base
op=matrix
matrix=s_2
expected_n=5
expected_k=2
expected_d=4
expected_lcd=false
expected_enum=1+15y^{4}

id=short
op=shorten
parent=base
coords=1
expected_n=4
expected_k=1
expected_d=4
expected_lcd=false

# the true distance is 3
id=wrong
op=puncture
parent=base
coords=1
expected_n=4
expected_k=2
expected_d=4

id=ghost
op=matrix
expected_n=9
expected_k=3

id=child
op=puncture
parent=ghost
coords=1
"""


@pytest.fixture
def mini_data_dir(tmp_path: Path) -> Path:
    """A corpus with one published matrix, one wrong claim and one unpublished parent."""
    (tmp_path / "matrices").mkdir()
    (tmp_path / "recipes").mkdir()
    (tmp_path / "bounds").mkdir()
    (tmp_path / "claims").mkdir()
    (tmp_path / "matrices" / "s_2.qmat").write_text((MATRICES_DIR / "s_2.qmat").read_text())
    (tmp_path / "recipes" / "mini.rcp").write_text(MINI_RECIPES)
    (tmp_path / "bounds" / "table3.tsv").write_text("n\tk\tlower\tupper\tbold\n4\t1\t3\t3\t0\n5\t2\t3\t3\t0\n")
    (tmp_path / "bounds" / "grassl_snapshot.tsv").write_text("# sample\nn\tk\td\n5\t2\t4\n4\t1\t4\n")
    (tmp_path / "claims" / "table1.tsv").write_text("n\tk\td\n5\t2\t3\n")
    return tmp_path
