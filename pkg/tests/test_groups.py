import json
import random
from fractions import Fraction

import pytest

from hermi.errors import PreconditionError
from hermi.experiments import random_hermitian, random_sl2o, random_sl2z
from hermi.groups import (GroupMatrix, LevelIdeal, MennickePair, alternating, complete_pair,
                          congruence_generators, epsilon, format_entry, hermitian_basis,
                          in_congruence, iota, iota1, iota2, iota_preimage, is_hermitian,
                          is_unitary, load_matrix, lower_translation, only_unit_one, parse_entry,
                          random_word, standard_generators, swap_matrix, upper_translation)
from hermi.iquad import QuadRat, make_order

o4 = make_order(-4)


def test_unitary_examples():
    assert is_unitary(alternating(o4, 2))
    assert is_unitary(GroupMatrix.identity(o4, 4))
    D = GroupMatrix(o4, [[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert not is_unitary(D)


def test_congruence_examples():
    S = hermitian_basis(o4)[3].scale(4)
    assert in_congruence(upper_translation(S), 4)
    assert in_congruence(GroupMatrix.identity(o4, 4), LevelIdeal(4))
    assert not in_congruence(swap_matrix(o4), 4)
    with pytest.raises(PreconditionError):
        in_congruence(GroupMatrix(o4, [[Fraction(1, 2), 0], [0, 2]]), 4)


@pytest.mark.parametrize("q", [2, 0, -4, 6])
def test_level_validation(q):
    with pytest.raises(PreconditionError):
        LevelIdeal(q)


def test_only_unit_one():
    assert only_unit_one(o4, 4)
    assert only_unit_one(make_order(-3), 4)


def test_determinant_and_inverse():
    rng = random.Random(0)
    for _ in range(50):
        U = random_sl2o(o4, rng)
        assert U.det().is_one()
        assert (U @ U.inverse()).is_identity()
        M = iota(U) @ upper_translation(random_hermitian(o4, rng))
        assert (M @ M.inverse()).is_identity()
        assert M.det() == 1


@pytest.mark.parametrize("d", [-4, -3, -7])
def test_generators_unitary(d):
    o = make_order(d)
    gens = standard_generators(2, 4, o)
    assert "I" in gens and "P" in gens
    assert all(is_unitary(g) for g in gens.values())
    outside = {k for k, g in gens.items() if not in_congruence(g, 4)}
    assert outside == {"I", "P"}
    assert set(congruence_generators(2, 4, o)) == set(gens) - outside
    rng = random.Random(d)
    for _ in range(20):
        M = random_word(congruence_generators(2, 4, o), rng)
        assert is_unitary(M) and in_congruence(M, 4)


def test_degree_one_generators():
    g = standard_generators(1, 8, o4)
    assert g["T"] == GroupMatrix(o4, [[1, 8], [0, 1]])
    assert g["L"] == GroupMatrix(o4, [[1, 0], [8, 1]])
    with pytest.raises(PreconditionError):
        standard_generators(3, 4, o4)


def test_iota_homomorphism_and_unitarity():
    rng = random.Random(1)
    for _ in range(50):
        U, V = random_sl2o(o4, rng), random_sl2o(o4, rng)
        assert iota(U @ V) == iota(U) @ iota(V)
        assert is_unitary(iota(U))
        assert epsilon(iota(U)) == U.det()
    assert iota(GroupMatrix.identity(o4, 2)).is_identity()
    U = GroupMatrix(o4, [[1, 4], [0, 1]])
    assert iota(U).block(0, 0) == GroupMatrix(o4, [[1, 0], [-4, 1]])


def test_iota_nu_conjugation():
    rng = random.Random(2)
    P = swap_matrix(o4)
    for _ in range(100):
        m = GroupMatrix(o4, random_sl2z(rng))
        a, b = GroupMatrix(o4, random_sl2z(rng)), m
        assert P @ iota1(m) @ P.inverse() == iota2(m)
        assert iota1(a @ b) == iota1(a) @ iota1(b)
        assert is_unitary(iota1(m)) and is_unitary(iota2(m))
        assert iota_preimage(iota1(m))[1] == m
    I2 = GroupMatrix(o4, [[0, -1], [1, 0]])
    assert list(iota1(I2).rows[1]) == [QuadRat.lift(x, o4) for x in (0, 1, 0, 0)]
    with pytest.raises(PreconditionError):
        iota1(GroupMatrix(o4, [[2, 0], [0, 1]]))


def test_epsilon():
    S = hermitian_basis(o4)[0]
    assert epsilon(upper_translation(S)) == 1
    with pytest.raises(PreconditionError):
        epsilon(alternating(o4, 2))


def test_translations_require_hermitian():
    with pytest.raises(PreconditionError):
        upper_translation(GroupMatrix(o4, [[0, 1], [0, 0]]))
    for S in hermitian_basis(o4):
        assert is_hermitian(S)
        assert is_unitary(lower_translation(S))


def test_complete_pair_examples():
    M = complete_pair(MennickePair(o4(5), o4(4), 4))
    assert M == GroupMatrix(o4, [[5, 16], [4, 13]])
    assert complete_pair(MennickePair(o4(1), o4(0), 4)).is_identity()
    assert complete_pair(MennickePair(o4(1), o4(4), 4)) == GroupMatrix(o4, [[1, 0], [4, 1]])


def test_pair_validation():
    with pytest.raises(PreconditionError):
        MennickePair(o4(3), o4(4), 4)
    with pytest.raises(PreconditionError):
        MennickePair(o4(5), o4(2), 4)
    with pytest.raises(PreconditionError):
        MennickePair(o4(9), o4(12), 4)  # common factor 3


def test_entry_parsing():
    assert parse_entry(o4, "3") == QuadRat.lift(3, o4)
    assert parse_entry(o4, "-w") == QuadRat.lift(o4(0, -1), o4)
    assert parse_entry(o4, "1/2-3/4*w").coords() == (QuadRat.from_fractions(o4, "1/2", "-3/4")).coords()
    assert parse_entry(o4, "2*w+1") == QuadRat.lift(o4(1, 2), o4)
    for bad in ("", "x", "1//2", "2w+", "1 2"):
        with pytest.raises(ValueError):
            parse_entry(o4, bad)
    x = QuadRat.from_fractions(o4, "-7/3", "5/2")
    assert parse_entry(o4, format_entry(x)) == x


def test_matrix_json_roundtrip(tmp_path):
    rng = random.Random(3)
    M = iota(random_sl2o(o4, rng)) @ upper_translation(random_hermitian(o4, rng))
    data = M.to_json()
    assert GroupMatrix.from_json(o4, data) == M
    p = tmp_path / "m.json"
    p.write_text(json.dumps(data))
    assert load_matrix(o4, str(p)) == M
    assert load_matrix(o4, json.dumps(data)) == M
