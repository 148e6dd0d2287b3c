import itertools

import numpy as np
import pytest

from nestcat.core.errors import CapacityError, ConstructionError, UsageError
from nestcat.core.linear_code import (
    LinearCode,
    ZeroCode,
    code_intersection,
    code_sum,
    contains_code,
    hamming_distance,
    hamming_weight,
    identity_code,
    null_space,
    rank,
    repetition_code,
    same_rowspace,
)
from nestcat.core.finite_field import GF2, parse_poly, to_ints

HAMMING_G = [
    [1, 1, 0, 1, 0, 0, 0],
    [0, 1, 1, 0, 1, 0, 0],
    [0, 0, 1, 1, 0, 1, 0],
    [0, 0, 0, 1, 1, 0, 1],
]


@pytest.fixture(scope="module")
def hamming():
    return LinearCode(GF2, HAMMING_G, name="Hamming(7,4)")


def all_vectors(n):
    return np.array(list(itertools.product([0, 1], repeat=n)), dtype=np.int64)


def test_rank_deficient_generator_rejected():
    with pytest.raises(ConstructionError):
        LinearCode(GF2, [[1, 1, 0], [1, 1, 0]])


def test_from_span_drops_dependent_rows():
    code = LinearCode.from_span(GF2, [[1, 1, 0], [1, 1, 0], [0, 1, 1]])
    assert code.k == 2


def test_from_span_of_nothing_is_zero_code():
    code = LinearCode.from_span(GF2, [[0, 0, 0]])
    assert isinstance(code, ZeroCode)
    assert code.k == 0


def test_parity_check_annihilates_generator(hamming):
    assert not np.any(to_ints(hamming.generator @ hamming.parity_check.T))
    assert hamming.parity_check.shape == (3, 7)


def test_null_space_dimension(gf8):
    m = gf8.gf([[1, 2, 3, 4], [0, 1, 5, 6]])
    basis = null_space(m)
    assert basis.shape == (2, 4)
    assert not np.any(to_ints(m @ basis.T))


def test_encode_and_message_of(hamming):
    for msg in all_vectors(4):
        c = hamming.encode(msg)
        assert hamming.contains(c)
        assert to_ints(hamming.message_of(c)).tolist() == msg.tolist()


def test_encode_length_checked(hamming):
    with pytest.raises(UsageError):
        hamming.encode([1, 0, 1])


def test_hamming_parameters(hamming):
    assert hamming.min_distance() == 3
    assert hamming.covering_radius() == 1
    assert len(hamming.coset_leaders()) == 8


def test_hamming_coset_leaders_are_unit_vectors(hamming):
    weights = sorted(c.weight for c in hamming.coset_leaders())
    assert weights == [0] + [1] * 7


def test_nearest_codeword_methods_agree(hamming):
    for y in all_vectors(7):
        by_cosets = hamming.nearest_codeword(y, method="cosets")
        by_words = hamming.nearest_codeword(y, method="codewords")
        assert by_cosets[1] == by_words[1]
        assert np.array_equal(to_ints(by_cosets[0]), to_ints(by_words[0]))
        assert by_cosets[1] <= 1


def test_nearest_codeword_tie_break_is_lexicographic():
    rep = repetition_code(4)
    c, d = rep.nearest_codeword([1, 1, 0, 0])
    assert d == 2
    assert to_ints(c).tolist() == [0, 0, 0, 0]


def test_nearest_in_coset_breaks_ties_on_the_member():
    rep = repetition_code(4)
    member, d = rep.nearest_in_coset([1, 1, 0, 0], shift=[1, 0, 1, 0])
    # coset {1010, 0101}: both at distance 2 from 1100
    assert d == 2
    assert to_ints(member).tolist() == [0, 1, 0, 1]


def test_nearest_codewords_returns_every_tie():
    rep = repetition_code(4)
    words, d = rep.nearest_codewords([1, 1, 0, 0])
    assert d == 2
    assert sorted(map(tuple, words.tolist())) == [(0, 0, 0, 0), (1, 1, 1, 1)]


def test_deep_hole_is_at_covering_radius(gf8):
    code = LinearCode.cyclic(gf8, 7, parse_poly("3,1", gf8) * parse_poly("5,1", gf8))
    hole = code.deep_hole()
    _, d = code.nearest_codeword(hole)
    assert d == code.covering_radius()


def test_sum_and_intersection():
    a = LinearCode(GF2, [[1, 1, 0, 0], [0, 0, 1, 1]])
    b = LinearCode(GF2, [[1, 1, 1, 1], [1, 0, 1, 0]])
    assert code_sum(a, b).k == 3
    common = code_intersection(a, b)
    assert common.k == 1
    assert to_ints(common.generator).tolist() == [[1, 1, 1, 1]]


def test_trivial_intersection_is_zero_code():
    a = LinearCode(GF2, [[1, 0, 0]])
    b = LinearCode(GF2, [[0, 1, 0]])
    assert isinstance(code_intersection(a, b), ZeroCode)


def test_containment_and_rowspace():
    big = identity_code(3)
    small = LinearCode(GF2, [[1, 1, 1]])
    assert contains_code(big, small)
    assert not contains_code(small, big)
    assert same_rowspace(big, LinearCode(GF2, [[1, 1, 0], [0, 1, 1], [0, 0, 1]]))


def test_incompatible_codes_rejected(gf8):
    with pytest.raises(UsageError):
        code_sum(identity_code(3), LinearCode(gf8, [[1, 2, 3]]))


def test_capacity_guard():
    huge = identity_code(30)
    with pytest.raises(CapacityError):
        huge.codebook


def test_hamming_helpers():
    assert hamming_weight([0, 1, 1, 0]) == 2
    assert hamming_distance([0, 1, 1, 0], [1, 1, 0, 0]) == 2
    assert rank(GF2.gf([[1, 1], [1, 1]])) == 1
