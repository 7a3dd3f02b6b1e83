import pytest

from congsub.cosets import (
    CosetCeilingError,
    CosetTable,
    congruence_table,
    deserialize_table,
    enumerate_cosets,
    tables_isomorphic,
)
from congsub.matgroup import Mat2, PslElement, matrix_to_word, psl_index_formula
from congsub.rewriting import schreier_generators


def all_pairs(max_m):
    for m in range(1, max_m + 1):
        for n in range(1, m + 1):
            if m % n == 0:
                yield m, n


def test_congruence_table_sizes():
    for m, n in all_pairs(10):
        t = congruence_table(m, n)
        assert t.n == psl_index_formula(m, n), (m, n)
        t.validate()


def test_serialize_round_trip():
    t = congruence_table(4, 2)
    t2 = deserialize_table(t.serialize())
    assert t2.s == t.s and t2.u == t.u


def test_deserialize_rejects_garbage():
    with pytest.raises(ValueError):
        deserialize_table("nonsense\n")
    # S action not an involution
    with pytest.raises(ValueError):
        deserialize_table("cosets 2\n0 1 0\n1 1 1\n")


def test_validate_rejects_intransitive():
    with pytest.raises(ValueError):
        CosetTable((0, 1), (0, 1)).validate()


def test_tables_isomorphic():
    t = congruence_table(3, 3)
    assert tables_isomorphic(t, t)
    assert not tables_isomorphic(congruence_table(2, 1), congruence_table(3, 3))


def test_enumerate_whole_group():
    t = enumerate_cosets(["S", "U"])
    assert t.n == 1


def test_enumerate_level_two():
    # images of (1 2; 0 1) and (1 0; 2 1) generate the level-2 subgroup
    gens = [
        matrix_to_word(PslElement(Mat2(1, 2, 0, 1))),
        matrix_to_word(PslElement(Mat2(1, 0, 2, 1))),
    ]
    t = enumerate_cosets(gens)
    assert t.n == 6
    assert tables_isomorphic(t, congruence_table(2, 2))


def test_enumerate_upper_unipotent_level_two():
    gens = [
        matrix_to_word(PslElement(Mat2(1, 2, 0, 1))),
        matrix_to_word(PslElement(Mat2(1, 2, -1, -1))),
    ]
    t = enumerate_cosets(gens)
    assert t.n == 3
    assert tables_isomorphic(t, congruence_table(2, 1))


@pytest.mark.parametrize("m,n", [(2, 1), (2, 2), (3, 1), (3, 3), (4, 2), (5, 1), (6, 2)])
def test_enumerate_agrees_with_oracle(m, n):
    # derive generator words from the oracle table, then re-enumerate
    oracle = congruence_table(m, n)
    words = [w for w, _ in schreier_generators(oracle)]
    t = enumerate_cosets(words)
    assert tables_isomorphic(t, oracle)


def test_ceiling():
    gens = [matrix_to_word(PslElement(Mat2(1, 12, 0, 1)))]
    with pytest.raises(CosetCeilingError):
        enumerate_cosets(gens, ceiling=5)
