"""Strategy-space enumeration, indexing, and size arithmetic."""

import math

import numpy as np
import pytest

from arasim.strategies import (
    TOTAL_TENTHS,
    SpaceIndex,
    computation_size,
    count,
    enumerate_space,
    format_allocation,
    neighbors,
    parse_allocation,
    validate_allocation,
)

# Known space sizes: C(9 + n, n - 1) — stars and bars with 10 indivisible
# tenth-units over n targets.
KNOWN_COUNTS = {1: 1, 2: 11, 3: 66, 4: 286, 5: 1001}


def test_count_known_values():
    for n, expected in KNOWN_COUNTS.items():
        assert count(n) == expected


def test_count_matches_combinatorial_formula_further_out():
    for n in range(1, 12):
        assert count(n) == math.comb(TOTAL_TENTHS - 1 + n, n - 1)


def test_count_rejects_nonpositive():
    with pytest.raises(ValueError):
        count(0)


def test_enumeration_is_complete_and_lexicographic():
    for n in (1, 2, 3, 4):
        space = enumerate_space(n)
        assert len(space) == count(n)
        assert len(set(space)) == len(space)
        assert space == sorted(space)
        for alloc in space:
            assert len(alloc) == n
            assert sum(alloc) == TOTAL_TENTHS
            assert all(0 <= t <= TOTAL_TENTHS for t in alloc)


def test_enumeration_brute_force_oracle_n3():
    # Independent generation: filter the full cube instead of recursing.
    brute = sorted(
        (i, j, TOTAL_TENTHS - i - j)
        for i in range(TOTAL_TENTHS + 1)
        for j in range(TOTAL_TENTHS + 1)
        if TOTAL_TENTHS - i - j >= 0
    )
    assert enumerate_space(3) == brute


def test_space_index_round_trip():
    for n in (1, 2, 3):
        space = SpaceIndex.build(n)
        assert len(space) == count(n)
        for ordinal, alloc in enumerate(space):
            assert space.ordinal(alloc) == ordinal
        assert space.tenths.shape == (count(n), n)
        assert np.array_equal(space.tenths[0], np.array(space.strategies[0]))


def test_space_index_rejects_foreign_allocation():
    space = SpaceIndex.build(2)
    with pytest.raises(ValueError):
        space.ordinal((3, 3))
    with pytest.raises(ValueError):
        space.ordinal((5, 5, 0))


def test_validate_allocation_errors():
    with pytest.raises(ValueError):
        validate_allocation((5, 4))  # sums to 9
    with pytest.raises(ValueError):
        validate_allocation((11, -1))
    with pytest.raises(ValueError):
        validate_allocation((5, 5), n=3)


def test_neighbors_edge_cases():
    assert neighbors((10,)) == []
    assert neighbors((10, 0)) == [(9, 1)]
    assert neighbors((0, 10)) == [(1, 9)]
    mid = neighbors((5, 5))
    assert mid == [(4, 6), (6, 4)]


def test_neighbors_are_valid_sorted_and_exclude_self():
    space = SpaceIndex.build(3)
    for alloc in space:
        moves = neighbors(alloc)
        assert alloc not in moves
        assert moves == sorted(moves)
        assert len(moves) == len(set(moves))
        for move in moves:
            assert sum(move) == TOTAL_TENTHS
            # exactly one unit moved between two positions
            diff = np.array(move) - np.array(alloc)
            assert sorted(diff) == [-1] + [0] * (len(alloc) - 2) + [1]


def test_neighbor_relation_is_symmetric():
    space = SpaceIndex.build(3)
    for alloc in space:
        for move in neighbors(alloc):
            assert alloc in neighbors(move)


def test_format_parse_round_trip():
    for n in (1, 2, 3):
        for alloc in enumerate_space(n):
            text = format_allocation(alloc)
            assert parse_allocation(text) == alloc


def test_format_is_decimal_fractions():
    assert format_allocation((7, 0, 3)) == "0.7,0.0,0.3"
    assert format_allocation((10,)) == "1.0"


def test_parse_rejects_bad_fields():
    with pytest.raises(ValueError):
        parse_allocation("0.7,x")
    with pytest.raises(ValueError):
        parse_allocation("0.75,0.25")  # not a tenth
    with pytest.raises(ValueError):
        parse_allocation("0.7,0.2")  # sums to 0.9


def test_computation_size_known_values():
    # |F|^2 * (1 + N_R) * N_S^n, all exact integers
    assert computation_size(1, 10, 10) == 1 * 1 * 11 * 10
    assert computation_size(2, 100, 10) == 11 * 11 * 101 * 100
    assert computation_size(3, 1000, 10) == 66 * 66 * 1001 * 1000
    assert computation_size(5, 10**5, 10) == 10_020_110_200_100_000


def test_computation_size_accepts_zero_traits_and_rejects_bad_n():
    assert computation_size(1, 0, 10) == 1 * 1 * 1 * 10
    with pytest.raises(ValueError):
        computation_size(0, 10, 10)
    with pytest.raises(ValueError):
        computation_size(2, -1, 10)
