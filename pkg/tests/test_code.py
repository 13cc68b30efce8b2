import numpy as np
import pytest

from hermlcd.core.code import CodeError, CoordSet, LinearCode, identity_augment, simplex, simplex_matrix
from hermlcd.core.gf4 import Gf4Matrix


def random_code(rng: np.random.Generator, n_max: int = 20) -> LinearCode | None:
    n = int(rng.integers(2, n_max + 1))
    k = int(rng.integers(1, n + 1))
    matrix = Gf4Matrix.random(k, n, seed=rng)
    return LinearCode.from_generator(matrix) if matrix.rank else None


def random_codes(seed: int, count: int, n_max: int = 20):
    rng = np.random.default_rng(seed)
    codes = (random_code(rng, n_max) for _ in range(count))
    return [code for code in codes if code is not None], rng


# -- coordinates ----------------------------------------------------------------


def test_coordset_parse():
    coords = CoordSet.parse(" 6, 1,3")
    assert coords.indices == (1, 3, 6)
    assert str(coords) == "{1,3,6}"
    assert coords.zero_based() == [0, 2, 5]
    assert len(CoordSet.parse("")) == 0


@pytest.mark.parametrize("text", ["0", "1,1", "1,x", "-2"])
def test_coordset_rejects(text):
    with pytest.raises(CodeError):
        CoordSet.parse(text)


def test_coordset_out_of_range():
    with pytest.raises(CodeError):
        CoordSet([4]).validate(3)


# -- construction ---------------------------------------------------------------


def test_from_generator_drops_dependent_rows():
    code = LinearCode.from_generator(Gf4Matrix.from_digits([[1, 2, 0], [2, 3, 0], [0, 0, 1]]))
    assert (code.n, code.k) == (3, 2)


def test_zero_matrix_is_rejected():
    with pytest.raises(CodeError):
        LinearCode.from_generator(Gf4Matrix.zeros(2, 4))


def test_equal_row_spaces_give_equal_codes():
    matrix = Gf4Matrix.random(3, 7, seed=11)
    shuffled = matrix.select_rows([2, 0, 1]).scale(2)
    assert LinearCode.from_generator(matrix) == LinearCode.from_generator(shuffled)


def test_contains():
    code = LinearCode.from_generator(Gf4Matrix.from_digits([[1, 1, 0], [0, 1, 2]]))
    assert code.contains([2, 0, 3])  # ω·row1 + ω·row2
    assert not code.contains([0, 0, 1])
    with pytest.raises(CodeError):
        code.contains([1, 1])


def test_identity_augment():
    code = identity_augment(Gf4Matrix.from_digits([[1], [2]]))
    assert code.gen.to_digits() == [[1, 0, 1], [0, 1, 2]]


# -- duality --------------------------------------------------------------------


def test_full_space_is_lcd():
    code = LinearCode.full_space(4)
    assert code.is_lcd()
    assert code.hull_dimension() == 0
    with pytest.raises(CodeError):
        code.hermitian_dual()


def test_all_ones_line_depends_on_parity():
    odd = LinearCode.from_generator(Gf4Matrix.from_digits([[1, 1, 1]]))
    even = LinearCode.from_generator(Gf4Matrix.from_digits([[1, 1, 1, 1]]))
    assert odd.is_lcd()
    assert even.is_self_orthogonal()
    assert even.hull_dimension() == 1


def test_hermitian_dual_involution_and_orthogonality():
    codes, _ = random_codes(seed=1, count=500)
    for code in codes:
        if code.k == code.n:
            continue
        dual = code.hermitian_dual()
        assert code.k + dual.k == code.n
        assert (code.gen @ dual.gen.conj_transpose()).is_zero()
        assert dual.hermitian_dual() == code


def test_euclidean_dual_is_conjugate_of_hermitian_dual():
    codes, _ = random_codes(seed=2, count=500)
    for code in codes:
        if code.k == code.n:
            continue
        conjugated = LinearCode.from_generator(code.hermitian_dual().gen.conj())
        assert code.euclidean_dual() == conjugated


def test_lcd_criteria_agree():
    codes, _ = random_codes(seed=3, count=500)
    for code in codes:
        assert code.hull_dimension() == code.k - code.gram_rank
        assert code.is_lcd() == (code.hull_dimension() == 0) == (code.gram_rank == code.k)


def test_gram_rank_is_generator_independent():
    codes, rng = random_codes(seed=4, count=500)
    for code in codes:
        mixer = Gf4Matrix.random(code.k, code.k, seed=rng)
        if mixer.rank < code.k:
            continue
        other = mixer @ code.gen
        assert (other @ other.conj_transpose()).rank == code.gram_rank


# -- transformations -------------------------------------------------------------


def test_puncture_reports_true_dimension():
    code = LinearCode.from_generator(Gf4Matrix.from_digits([[1, 1, 0], [0, 0, 1]]))
    punctured = code.puncture(CoordSet([3]))
    assert (punctured.n, punctured.k) == (2, 1)


def test_puncture_errors():
    code = simplex(2)
    with pytest.raises(CodeError):
        code.puncture(CoordSet(range(1, 6)))
    with pytest.raises(CodeError):
        code.puncture(CoordSet([6]))
    assert code.puncture(CoordSet()) is code


def test_shorten_simplex():
    shortened = simplex(2).shorten(CoordSet([1]))
    assert shortened.gen.to_digits() == [[1, 1, 1, 1]]


def test_shorten_to_zero_fails():
    line = LinearCode.from_generator(Gf4Matrix.from_digits([[1, 1, 1]]))
    with pytest.raises(CodeError):
        line.shorten(CoordSet([1]))


def test_shorten_full_space():
    shortened = LinearCode.full_space(5).shorten(CoordSet([2, 4]))
    assert shortened == LinearCode.full_space(3)


def test_shorten_keeps_words_vanishing_on_the_set():
    codes, rng = random_codes(seed=5, count=60, n_max=12)
    for code in codes:
        if code.n < 4 or code.k < 3:
            continue
        coords = CoordSet(rng.choice(code.n, size=2, replace=False) + 1)
        shortened = code.shorten(coords)
        assert shortened.k >= code.k - 2
        for row in shortened.gen.to_digits():
            word = list(row)
            for index in coords.zero_based():
                word.insert(index, 0)
            assert code.contains(word)


def test_shorten_puncture_duality():
    codes, rng = random_codes(seed=6, count=500)
    checked = 0
    for code in codes:
        if min(code.k, code.n - code.k) < 2:
            continue
        # fewer than n - k coordinates, so the punctured dual is never zero
        size = int(rng.integers(1, min(code.k, code.n - code.k)))
        coords = CoordSet(rng.choice(code.n, size=size, replace=False) + 1)
        assert code.shorten(coords).hermitian_dual() == code.hermitian_dual().puncture(coords)
        checked += 1
    assert checked > 100


def test_extend_parity():
    extended = LinearCode.from_generator(Gf4Matrix.from_digits([[1, 2]])).extend_parity()
    assert extended.gen.to_digits() == [[1, 2, 3]]


def test_row_subcode():
    code = LinearCode.full_space(3)
    assert code.row_subcode([3, 1]).gen.to_digits() == [[1, 0, 0], [0, 0, 1]]
    with pytest.raises(CodeError):
        code.row_subcode([])
    with pytest.raises(CodeError):
        code.row_subcode([4])


def test_hyperplane_subcode():
    code = LinearCode.full_space(3)
    assert code.hyperplane_subcode([0, 0, 1]) == code.row_subcode([1, 2])
    assert code.hyperplane_subcode([1, 1, 0]).contains([1, 1, 0])
    assert not code.hyperplane_subcode([1, 1, 0]).contains([1, 0, 0])
    for normal in ([0, 0, 0], [1, 2], [1, 0, 4]):
        with pytest.raises(CodeError):
            code.hyperplane_subcode(normal)
    with pytest.raises(CodeError):
        simplex(2).row_subcode([1]).hyperplane_subcode([1])


def test_permute_and_conjugate():
    code = LinearCode.from_generator(Gf4Matrix.from_digits([[1, 0, 2], [0, 1, 1]]))
    moved = code.permute_and_conjugate([3, 1, 2], frobenius=True)
    assert moved.contains([3, 1, 0])
    assert moved.gram_rank == code.gram_rank
    with pytest.raises(CodeError):
        code.permute_and_conjugate([1, 1, 2])


# -- simplex --------------------------------------------------------------------


def test_simplex_seed_is_printed_s2(load_code):
    assert simplex(2) == load_code("s_2")


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_simplex_family(k):
    code = simplex(k)
    assert (code.n, code.k) == ((4**k - 1) // 3, k)
    assert code.gram_rank == 0


def test_simplex_columns_are_distinct_projective_points():
    columns = simplex_matrix(3).transpose().to_digits()
    normalised = set()
    for column in columns:
        lead = next(v for v in column if v)
        scaled = Gf4Matrix.from_digits([column]).scale({1: 1, 2: 3, 3: 2}[lead])
        normalised.add(tuple(scaled.to_digits()[0]))
    assert len(normalised) == len(columns) == 21


def test_simplex_limits():
    with pytest.raises(CodeError):
        simplex(1)
    with pytest.raises(CodeError):
        simplex(7, max_length=1365)
