import numpy as np
import pytest
from pydantic import ValidationError

from hermlcd.api.schemas import BoundsEntry, BoundsTable, WeightEnumerator, format_polynomial, parse_polynomial
from hermlcd.config import Settings
from hermlcd.core.code import CodeError, CoordSet, LinearCode, simplex
from hermlcd.core.gf4 import Gf4Matrix
from hermlcd.services.corpus import RecipeError, RecipeResolver, Unavailable
from hermlcd.services.weights import (
    BoundsError,
    EnumerationLimitError,
    MacWilliamsError,
    WeightEngine,
    classify_optimality,
    eaqecc_params,
    full_space_enumerator,
    krawtchouk,
    macwilliams_transform,
)

HAMMING_5_3 = [1, 0, 0, 30, 15, 18]

PRINTED = {
    "g_7_19": "1+195z^{9}+483z^{10}+888z^{11}+1479z^{12}+2361z^{13}+3165z^{14}+3327z^{15}+2508z^{16}"
    "+1368z^{17}+492z^{18}+117z^{19}",
    "g_7_20": "1+210z^{10}+594z^{11}+969z^{12}+1647z^{13}+2703z^{14}+3519z^{15}+3060z^{16}+2205z^{17}"
    "+1107z^{18}+291z^{19}+78z^{20}",
    "g_7_24": "1+384z^{13}+744z^{14}+888z^{15}+1746z^{16}+2544z^{17}+3156z^{18}+2928z^{19}+2118z^{20}"
    "+1200z^{21}+540z^{22}+120z^{23}+15z^{24}",
    "g_7_25": "1+189z^{13}+495z^{14}+750z^{15}+1179z^{16}+1908z^{17}+2577z^{18}+2967z^{19}+2667z^{20}"
    "+1932z^{21}+1092z^{22}+495z^{23}+117z^{24}+15z^{25}",
    "g_6_25": "1+48z^{14}+240z^{15}+432z^{16}+534z^{17}+573z^{18}+648z^{19}+657z^{20}+510z^{21}+363z^{22}"
    "+84z^{23}+6z^{24}",
}


def small_engine(**overrides) -> WeightEngine:
    values = dict(_env_file=None, inner_rows=3, workers=2) | overrides
    return WeightEngine(Settings(**values))


# -- polynomials and the enumerator model ------------------------------------------


def test_parse_printed_polynomial():
    assert parse_polynomial("1+207z^{14}+378z^15", n=16) == [1] + [0] * 13 + [207, 378, 0]
    assert parse_polynomial("1 + 15 y^4") == [1, 0, 0, 0, 15]
    assert parse_polynomial("1+3z") == [1, 3]
    assert parse_polynomial("1+15x^4") == [1, 0, 0, 0, 15]
    assert parse_polynomial("1 + 3W") == [1, 3]


@pytest.mark.parametrize("text", ["", "1+3z+3z", "1+3z^9", "1+abc", "1+3z+3y^2", "1+3\u03c9"])
def test_parse_polynomial_rejects(text):
    with pytest.raises(ValueError):
        parse_polynomial(text, n=5)


def test_format_polynomial():
    assert format_polynomial([1, 3]) == "1 + 3 z"
    assert format_polynomial([1, 0, 0, 0, 15]) == "1 + 15 z^4"


def test_enumerator_normalisation():
    with pytest.raises(ValidationError):
        WeightEnumerator(n=2, k=1, coeffs=[1, 3, 3])
    with pytest.raises(ValidationError):
        WeightEnumerator(n=2, k=1, coeffs=[1, 1, 2])
    with pytest.raises(ValidationError):
        WeightEnumerator(n=2, k=1, coeffs=[0, 0, 4])
    zero = WeightEnumerator(n=3, k=0, coeffs=[1, 0, 0, 0])
    assert zero.min_distance() is None


def test_digest_is_stable():
    a = WeightEnumerator(n=5, k=2, coeffs=[1, 0, 0, 0, 15, 0])
    b = WeightEnumerator.from_polynomial("1+15y^4", n=5, k=2)
    assert a.digest() == b.digest()
    assert len(a.digest()) == 16


# -- exact transforms -----------------------------------------------------------------


def test_krawtchouk_first_values():
    assert krawtchouk(5, 0, 3) == 1
    assert krawtchouk(5, 1, 2) == 3 * 5 - 4 * 2
    assert krawtchouk(5, 3, 4) == 14


def test_full_space_enumerator():
    assert full_space_enumerator(2).coeffs == [1, 6, 9]


def test_macwilliams_simplex_to_hamming():
    simplex_5 = WeightEnumerator(n=5, k=2, coeffs=[1, 0, 0, 0, 15, 0])
    dual = macwilliams_transform(simplex_5)
    assert (dual.n, dual.k) == (5, 3)
    assert dual.coeffs == HAMMING_5_3
    assert macwilliams_transform(dual) == simplex_5


def test_macwilliams_rejects_impossible_enumerator():
    with pytest.raises(MacWilliamsError):
        macwilliams_transform(WeightEnumerator(n=3, k=2, coeffs=[1, 0, 0, 15]))


# -- enumeration engine ----------------------------------------------------------------


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_simplex_enumerators(engine, k):
    n, weight = (4**k - 1) // 3, 4 ** (k - 1)
    enumerator = engine.weight_enumerator(simplex(k))
    assert enumerator.coeffs[weight] == 4**k - 1
    assert enumerator.min_distance() == weight
    assert sum(enumerator.coeffs) == 4**k
    assert len(enumerator.coeffs) == n + 1


def test_simplex_3_polynomial(engine):
    assert engine.weight_enumerator(simplex(3)).polynomial() == "1 + 63 z^16"


def test_simplex_5_polynomial(engine):
    assert engine.weight_enumerator(simplex(5)).polynomial() == "1 + 1023 z^256"


def test_hamming_code_enumerated_directly():
    with small_engine() as engine:
        hamming = simplex(2).hermitian_dual()
        assert engine.enumerate_weights(hamming).coeffs == HAMMING_5_3
        assert engine.min_distance(hamming) == 3


def test_identity_has_distance_one(engine):
    assert engine.min_distance(LinearCode.full_space(6)) == 1


def test_primal_and_dual_engines_agree():
    rng = np.random.default_rng(21)
    with small_engine() as engine:
        for _ in range(60):
            n = int(rng.integers(2, 11))
            k = int(rng.integers(1, n))
            matrix = Gf4Matrix.random(k, n, seed=rng)
            if not matrix.rank:
                continue
            code = LinearCode.from_generator(matrix)
            assert engine.enumerate_weights(code) == engine.weight_enumerator_via_dual(code)


@pytest.mark.slow
def test_primal_and_dual_engines_agree_up_to_length_16():
    rng = np.random.default_rng(25)
    checked = 0
    with small_engine(exhaustive_limit=16, inner_rows=8, workers=4) as engine:
        while checked < 100:
            n = int(rng.integers(2, 17))
            k = int(rng.integers(1, n))
            matrix = Gf4Matrix.random(k, n, seed=rng)
            if not matrix.rank:
                continue
            code = LinearCode.from_generator(matrix)
            assert engine.enumerate_weights(code) == engine.weight_enumerator_via_dual(code), code
            checked += 1


@pytest.mark.slow
def test_primal_and_dual_engines_agree_on_the_corpus(corpus, engine):
    resolver = RecipeResolver(corpus, engine)
    compared = []
    for recipe_id in sorted(corpus.recipes):
        try:
            code = resolver.resolve(recipe_id)
        except (RecipeError, CodeError):
            continue
        if isinstance(code, Unavailable) or code.k == code.n or max(code.k, code.n - code.k) > 10:
            continue
        assert engine.enumerate_weights(code) == engine.weight_enumerator_via_dual(code), recipe_id
        compared.append(recipe_id)
    assert compared


@pytest.mark.slow
def test_random_enumerators_are_normalised():
    rng = np.random.default_rng(26)
    with small_engine(inner_rows=8) as engine:
        for _ in range(500):
            n = int(rng.integers(2, 21))
            matrix = Gf4Matrix.random(int(rng.integers(1, n + 1)), n, seed=rng)
            if not matrix.rank:
                continue
            code = LinearCode.from_generator(matrix)
            enumerator = engine.weight_enumerator(code)
            assert enumerator.coeffs[0] == 1
            assert sum(enumerator.coeffs) == 4**code.k
            assert all(a % 3 == 0 for a in enumerator.coeffs[1:])


def test_double_macwilliams_is_identity():
    rng = np.random.default_rng(22)
    with small_engine() as engine:
        for _ in range(20):
            code = LinearCode.from_generator(Gf4Matrix.random(4, 9, seed=rng))
            enumerator = engine.enumerate_weights(code)
            assert macwilliams_transform(macwilliams_transform(enumerator)) == enumerator


def test_partitioning_does_not_change_the_result():
    code = LinearCode.from_generator(Gf4Matrix.random(8, 15, seed=23))
    with small_engine(inner_rows=2, workers=1) as narrow, small_engine(inner_rows=6, workers=3) as wide:
        assert narrow.enumerate_weights(code) == wide.enumerate_weights(code)


def test_enumerations_are_cached():
    with small_engine() as engine:
        code = simplex(3)
        first = engine.enumerate_weights(code)
        assert engine.cached_count == 1
        assert engine.enumerate_weights(code.relabel("again")) is first


def test_enumerator_cache_evicts_the_least_recent():
    with small_engine(enumerator_cache_size=2) as engine:
        s2, s3, hamming = simplex(2), simplex(3), simplex(2).hermitian_dual()
        first = engine.enumerate_weights(s2)
        evicted = engine.enumerate_weights(s3)
        assert engine.enumerate_weights(s2) is first
        engine.enumerate_weights(hamming)
        assert engine.cached_count == 2
        assert engine.enumerate_weights(s2) is first
        again = engine.enumerate_weights(s3)
        assert again == evicted
        assert again is not evicted
        assert engine.cached_count == 2


def test_enumeration_limit():
    code = LinearCode.from_generator(Gf4Matrix.random(4, 8, seed=24))
    with small_engine(exhaustive_limit=2) as engine:
        assert not engine.can_enumerate(code)
        with pytest.raises(EnumerationLimitError):
            engine.weight_enumerator(code)
        with pytest.raises(EnumerationLimitError):
            engine.weight_enumerator_via_dual(code)
        with pytest.raises(EnumerationLimitError):
            engine.enumerate_weights(code)


def test_engine_falls_back_to_the_dual_side():
    code = simplex(2).hermitian_dual()
    with small_engine(exhaustive_limit=2) as engine:
        assert engine.weight_enumerator(code).coeffs == HAMMING_5_3


# -- hyperplane subcodes -------------------------------------------------------------------


def test_hyperplane_subcodes_of_simplex_2(engine):
    assert len(engine.hyperplane_subcodes(simplex(2), 4)) == 5
    assert engine.hyperplane_subcodes(simplex(2), 5) == []


def test_hyperplane_subcodes_of_the_hamming_code(engine):
    hamming = simplex(2).hermitian_dual()
    normals = engine.hyperplane_subcodes(hamming, 4)
    assert len(normals) == 1
    assert hamming.hyperplane_subcode(normals[0]) == simplex(2)
    assert len(engine.hyperplane_subcodes(hamming, 3)) == 21


def test_hyperplane_subcodes_keep_the_distance(engine, load_code):
    code = load_code("g_8_25")
    normals = engine.hyperplane_subcodes(code, 13)
    assert len(normals) < (4**8 - 1) // 3
    for normal in normals[:5]:
        assert engine.min_distance(code.hyperplane_subcode(normal)) >= 13


def test_no_hyperplane_of_g_7_24_reaches_14(engine, load_code):
    code = load_code("g_7_24")
    assert engine.hyperplane_subcodes(code, 14) == []
    assert len(engine.hyperplane_subcodes(code, 13)) == 5461


def test_hyperplane_search_limits():
    with small_engine(inner_rows=3) as engine:
        with pytest.raises(EnumerationLimitError):
            engine.hyperplane_subcodes(simplex(4), 1)
        with pytest.raises(CodeError):
            engine.hyperplane_subcodes(LinearCode.full_space(1), 1)


# -- printed codes ------------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(PRINTED))
def test_printed_enumerators(engine, load_code, name):
    code = load_code(name)
    expected = WeightEnumerator.from_polynomial(PRINTED[name], n=code.n, k=code.k)
    assert engine.weight_enumerator(code) == expected


def test_g_6_21_is_an_lcd_21_6_12(engine, load_code):
    code = load_code("g_6_21")
    assert code.is_lcd()
    assert engine.min_distance(code) == 12


def test_punctured_g_7_19_matches_printed(engine, load_code):
    code = load_code("g_7_19").puncture(CoordSet([1]))
    expected = WeightEnumerator.from_polynomial(
        "1+393z^{9}+666z^{10}+1245z^{11}+2193z^{12}+3315z^{13}+3597z^{14}+2799z^{15}+1554z^{16}+504z^{17}+117z^{18}",
        n=18,
        k=7,
    )
    assert code.is_lcd()
    assert engine.weight_enumerator(code) == expected


def test_g_8_25_distance_and_normalised_enumerator(engine, load_code):
    enumerator = engine.weight_enumerator(load_code("g_8_25"))
    assert enumerator.min_distance() == 12
    assert sum(enumerator.coeffs) == 4**8


# -- derived parameters -------------------------------------------------------------------


@pytest.mark.parametrize(
    ("name", "coords", "expected"),
    [
        ("g_7_19", [], "[[19,7,9;12]]"),
        ("g_7_19", [1], "[[18,7,9;11]]"),
        ("g_7_20", [], "[[20,7,10;13]]"),
    ],
)
def test_eaqecc_from_lcd_codes(engine, load_code, name, coords, expected):
    code = load_code(name).puncture(CoordSet(coords))
    params = eaqecc_params(code, engine.min_distance(code))
    assert str(params) == expected
    assert params.c == code.n - code.k


def test_eaqecc_of_a_self_orthogonal_code():
    assert str(eaqecc_params(simplex(2), 4)) == "[[5,0,4;1]]"


def test_classify_optimality():
    bounds = BoundsTable(entries=[BoundsEntry(n=20, k=7, linear_best=10), BoundsEntry(n=21, k=12, linear_best=7)])
    assert classify_optimality(20, 7, 10, bounds).status == "optimal-LCD"
    assert classify_optimality(21, 12, 6, bounds).status == "nearly-optimal-LCD"
    assert classify_optimality(21, 12, 5, bounds).status == "below-bounds"
    assert classify_optimality(21, 12, 8, bounds).status == "above-table"
    with pytest.raises(BoundsError):
        classify_optimality(22, 7, 10, bounds)
