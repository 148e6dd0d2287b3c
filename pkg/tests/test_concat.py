import itertools

import numpy as np
import pytest

from nestcat.core.concat import (
    InnerPair,
    concatenate,
    distance_bound,
    group_distance,
    phi,
    phi_inv,
    psi_star,
    psi_star_inv,
    verify_preservation,
)
from nestcat.core.errors import ConstructionError, UsageError
from nestcat.core.finite_field import GF2, FieldParams, to_ints
from nestcat.core.linear_code import LinearCode, identity_code, repetition_code
from nestcat.core.nested_cyclic import FactorSplit, build_nested
from nestcat.core.rs_codes import rs_build

GF8 = FieldParams(3)

PAIR_ROWS = [
    [1, 0, 1, 1, 1, 0, 0],
    [0, 1, 0, 1, 1, 1, 0],
    [0, 0, 1, 0, 1, 1, 1],
]


def test_phi_is_lsb_first():
    assert to_ints(phi(GF8.gf([1, 6]), GF8)).tolist() == [1, 0, 0, 0, 1, 1]
    assert to_ints(phi_inv([1, 0, 0, 0, 1, 1], GF8)).tolist() == [1, 6]


def test_phi_inv_needs_whole_symbols():
    with pytest.raises(UsageError):
        phi_inv([1, 0], GF8)


def test_psi_star_groups_and_inverts(cyclic73):
    u = np.array([1, 0, 1, 0, 1, 1])
    c = psi_star(u, cyclic73, 2)
    assert c.shape == (14,)
    assert to_ints(psi_star_inv(c, cyclic73, 2)).tolist() == u.tolist()


def test_psi_star_checks_group_length(cyclic73):
    with pytest.raises(UsageError):
        psi_star(np.zeros(8, dtype=np.int64), cyclic73, 2)


def test_hamming_concat_parameters(hamming_concat):
    assert (hamming_concat.N, hamming_concat.K, hamming_concat.K1, hamming_concat.K2) == (21, 4, 1, 3)
    assert hamming_concat.eq.min_distance() >= 9


def test_rs_concat_parameters(rs_concat):
    assert (rs_concat.N, rs_concat.K, rs_concat.K1, rs_concat.K2) == (49, 15, 3, 12)


def test_desk_concats_preserve_nesting(hamming_concat, rs_concat):
    for code in (hamming_concat, rs_concat):
        report = verify_preservation(code)
        assert report.passed, report.render()


def test_encode_decode_outer(rs_concat, rs_nested):
    v = rs_nested.c.encode(GF8.gf([1, 2, 3, 4, 5]))
    c = rs_concat.encode_outer(v)
    assert rs_concat.eq.contains(c)
    assert np.array_equal(to_ints(rs_concat.decode_outer(c)), to_ints(v))


def _nested_outer_cases():
    cases = []
    for split in ([1], [0], [2]), ([2], [0], [1]), ([0], [1], [2]), ([0], [2], [1]):
        for inner, l in ((repetition_code(3), 7), (identity_code(1), 7), (repetition_code(5), 7)):
            cases.append((FieldParams(1), 7, split, inner, l))
    for split in ([1, 2], [0], [3, 4, 5, 6]), ([0], [1, 2], [3, 4, 5, 6]), ([3], [4, 5], [0, 1, 2, 6]):
        cases.append((GF8, 7, split, LinearCode(GF2, PAIR_ROWS, name="cyclic(7,3)"), 7))
        cases.append((GF8, 7, split, identity_code(3), 7))
        cases.append((GF8, 7, split, identity_code(21), 1))
    return cases


NESTED_OUTER_CASES = _nested_outer_cases()


@pytest.mark.parametrize("params, n, split, inner, l", NESTED_OUTER_CASES)
def test_nested_outer_preservation(params, n, split, inner, l):
    outer = build_nested(n, params, FactorSplit.of(*split))
    code = concatenate(outer, inner, l)
    report = verify_preservation(code)
    assert report.passed, report.render()
    assert code.K == outer.k * params.m
    assert code.K1 == outer.k1 * params.m
    assert code.K2 == outer.k2 * params.m


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_nested_inner_pair_preservation(k):
    pair = InnerPair(LinearCode(GF2, PAIR_ROWS[:1]), LinearCode(GF2, PAIR_ROWS[1:]))
    code = concatenate(rs_build(7, k, GF8).linear, pair, 7)
    report = verify_preservation(code)
    assert report.passed, report.render()
    assert code.K == 3 * k
    assert code.K1 + code.K2 >= code.K


def test_preservation_suite_is_large_enough():
    assert len(NESTED_OUTER_CASES) + 4 >= 20


def test_overlapping_inner_pair_rejected():
    with pytest.raises(ConstructionError):
        InnerPair(LinearCode(GF2, PAIR_ROWS[:1]), LinearCode(GF2, [PAIR_ROWS[0], PAIR_ROWS[1]]))


def test_overlapping_inner_pair_fails_clause_2_when_unchecked():
    pair = InnerPair(LinearCode(GF2, PAIR_ROWS[:1]), LinearCode(GF2, [PAIR_ROWS[0], PAIR_ROWS[1]]), check=False)
    code = concatenate(rs_build(7, 5, GF8).linear, pair, 7, check_inner=False)
    report = verify_preservation(code)
    assert "2" in report.failed


def test_inner_dimension_must_match(hamming_nested):
    with pytest.raises(UsageError):
        concatenate(hamming_nested, repetition_code(3), 1)


def test_inner_pair_needs_plain_outer(hamming_nested):
    pair = InnerPair(LinearCode(GF2, [[1, 0]]), LinearCode(GF2, [[0, 1]]))
    with pytest.raises(UsageError):
        concatenate(hamming_nested, pair, 7)


@pytest.mark.parametrize(
    "outer_k, inner",
    [
        (5, LinearCode(GF2, PAIR_ROWS)),
        (4, LinearCode(GF2, PAIR_ROWS)),
        (3, LinearCode(GF2, PAIR_ROWS)),
    ],
)
def test_distance_bound_rs_with_cyclic_inner(outer_k, inner):
    code = concatenate(rs_build(7, outer_k, GF8).linear, inner, 7)
    assert code.eq.min_distance() >= distance_bound(code) == 4 * (8 - outer_k)


@pytest.mark.parametrize("inner_n", [1, 3, 5])
def test_distance_bound_hamming_with_repetition(hamming_nested, inner_n):
    code = concatenate(hamming_nested, repetition_code(inner_n), 7)
    assert code.eq.min_distance() >= distance_bound(code) == 3 * inner_n


def test_concatenated_codewords_decompose(hamming_concat, hamming_nested):
    for i1, i2 in itertools.product(itertools.product([0, 1], repeat=1), itertools.product([0, 1], repeat=3)):
        v1 = hamming_nested.c1.encode(list(i1))
        v2 = hamming_nested.c2.encode(list(i2))
        c = hamming_concat.encode_outer(v1 + v2)
        assert np.array_equal(
            to_ints(c), to_ints(hamming_concat.encode_outer(v1) + hamming_concat.encode_outer(v2))
        )
        assert hamming_concat.eq1.contains(hamming_concat.encode_outer(v1))
        assert hamming_concat.eq2.contains(hamming_concat.encode_outer(v2))


def _parity_code(k):
    return LinearCode(GF2, np.hstack([np.eye(k, dtype=np.int64), np.ones((k, 1), dtype=np.int64)]), name=f"parity({k + 1},{k})")


def test_identity_inner_gives_binary_image_of_plain_outer():
    outer = rs_build(7, 5, GF8).linear
    code = concatenate(outer, identity_code(3), 7)
    assert (code.N, code.K, code.K1, code.K2) == (21, 15, 15, 0)
    assert verify_preservation(code).passed
    rng = np.random.default_rng(8)
    for _ in range(20):
        v = outer.encode(GF8.gf(rng.integers(0, 8, size=5)))
        c = code.encode_outer(v)
        assert np.array_equal(to_ints(c), to_ints(phi(v, GF8)))
        assert code.eq.contains(c)
        assert np.array_equal(to_ints(code.decode_outer(c)), to_ints(v))


def test_group_distance_is_symbol_distance_without_folding(rs_concat):
    assert group_distance(rs_concat.params) == 3


def test_distance_bound_in_folded_regime(hamming_nested):
    code = concatenate(hamming_nested, _parity_code(7), 1)
    # one group: the parity inner code extends Hamming(7,4) to (8,4)
    assert code.eq.min_distance() == 4
    assert distance_bound(code) == 2 * group_distance(code.params) == 2
    assert code.eq.min_distance() < 2 * hamming_nested.c.min_distance()


@pytest.mark.parametrize("inner", [identity_code(7), _parity_code(7)], ids=["identity", "parity"])
def test_distance_bound_rs_outer_three_groups(rs_nested, inner):
    code = concatenate(rs_nested, inner, 3)
    assert code.K == 15
    assert 1 <= group_distance(code.params) <= 3
    assert code.eq.min_distance() >= distance_bound(code)
    assert verify_preservation(code).passed
