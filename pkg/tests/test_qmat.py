from pathlib import Path

import pytest

from hermlcd.core.gf4 import Gf4Matrix
from hermlcd.core.qmat import QmatFormatError, dump_matrix, load_matrix, parse_qmat, read_qmat

MATRICES_DIR = Path(__file__).resolve().parents[1] / "data" / "matrices"

# Loaded (un-transposed) shape of every bundled matrix.
BUNDLED_SHAPES = {
    "s_2": (2, 5),
    "g_6_21": (6, 21),
    "g_6_24": (7, 24),
    "g_7_20": (7, 20),
    "g_8_25": (8, 25),
    "a_12_18": (18, 12),
    "a_11": (16, 11),
    "a_10": (20, 10),
    "b_16": (16, 13),
    "a_14": (16, 14),
    "a_15": (16, 15),
    "a_12_13": (13, 12),
    "g_7_24": (7, 24),
    "g_7_25": (7, 25),
    "g_7_19": (7, 19),
    "g_6_25": (6, 25),
}


def test_parse_with_comments():
    document = parse_qmat("# S_2\nqmat 2 5 s_2\n0 1 1 1 1\n\n1 0 1 2 3\n")
    assert document.matrix_id == "s_2"
    assert not document.transposed
    assert document.matrix.to_digits() == [[0, 1, 1, 1, 1], [1, 0, 1, 2, 3]]


def test_transposed_flag():
    document = parse_qmat("qmat 2 3 a transposed\n1 2 3\n0 0 1\n")
    assert document.transposed
    assert document.matrix.to_digits() == [[1, 0], [2, 0], [3, 1]]


@pytest.mark.parametrize(
    "text",
    [
        "",
        "# only a comment\n",
        "matrix 1 2 x\n0 1\n",
        "qmat 1 2\n0 1\n",
        "qmat one 2 x\n0 1\n",
        "qmat 0 2 x\n",
        "qmat 1 2 x flipped\n0 1\n",
        "qmat 2 2 x\n0 1\n",
        "qmat 1 2 x\n0 1 1\n",
        "qmat 1 2 x\n0 4\n",
        "qmat 1 2 x\n0 w\n",
    ],
)
def test_malformed_input(text):
    with pytest.raises(QmatFormatError):
        parse_qmat(text)


def test_error_names_the_source():
    with pytest.raises(QmatFormatError, match="g.qmat:2"):
        parse_qmat("qmat 1 2 x\n0 5\n", source="g.qmat")


def test_dump_is_readable_back():
    matrix = Gf4Matrix.random(4, 9, seed=3)
    text = dump_matrix(matrix, "sample")
    assert text.startswith("qmat 4 9 sample\n")
    assert text.endswith("\n")
    assert load_matrix(text) == matrix


def test_dump_rejects_bad_ids():
    with pytest.raises(QmatFormatError):
        dump_matrix(Gf4Matrix.identity(2), "two words")
    with pytest.raises(QmatFormatError):
        dump_matrix(Gf4Matrix.identity(2), "")


def test_bundled_matrices_have_printed_shapes():
    paths = sorted(MATRICES_DIR.glob("*.qmat"))
    assert {path.stem for path in paths} == set(BUNDLED_SHAPES)
    for path in paths:
        document = read_qmat(path)
        assert document.matrix_id == path.stem
        assert document.matrix.shape == BUNDLED_SHAPES[path.stem], path.name


def test_printed_g_6_24_repeats_g_7_24():
    assert read_qmat(MATRICES_DIR / "g_6_24.qmat").matrix == read_qmat(MATRICES_DIR / "g_7_24.qmat").matrix


def test_a_10_has_a_zero_column():
    matrix = read_qmat(MATRICES_DIR / "a_10.qmat").matrix
    assert matrix.select_columns([1]).is_zero()
