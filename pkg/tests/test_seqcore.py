from __future__ import annotations

import itertools
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from insdelq.seqcore import (
    BudgetExceeded,
    adjacent_equal_family,
    delete,
    deletion_ball,
    detecting_sequences,
    detects_deletions,
    format_sequence,
    index_set,
    indel_ball,
    insert,
    monotone_periodic,
    parse_sequences,
    sequence,
    transposition_family,
)

words = st.lists(st.integers(0, 2), min_size=0, max_size=7).map(tuple)


def test_sequence_validates_alphabet():
    assert sequence([0, 2, 1], q=3) == (0, 2, 1)
    with pytest.raises(ValueError):
        sequence([0, 3], q=3)


def test_index_set_sorted_and_bounded():
    assert index_set([3, 1], 4) == (1, 3)
    with pytest.raises(ValueError):
        index_set([1, 1], 4)
    with pytest.raises(ValueError):
        index_set([0], 4)
    with pytest.raises(ValueError):
        index_set([5], 4)


def test_delete_and_insert_examples():
    assert delete((0, 1, 2, 0, 1), (2, 4)) == (0, 2, 1)
    assert delete((0, 1, 2), ()) == (0, 1, 2)
    assert insert((0, 2), (2,), (1,)) == (0, 1, 2)
    assert insert((0, 1), (1, 4), (7, 9)) == (7, 0, 1, 9)


@given(words, st.data())
def test_insert_then_delete_roundtrip(x, data):
    k = data.draw(st.integers(0, 3))
    S = tuple(sorted(data.draw(st.sets(st.integers(1, len(x) + k), min_size=k, max_size=k)))) if k else ()
    syms = data.draw(st.lists(st.integers(0, 2), min_size=k, max_size=k))
    assert delete(insert(x, S, syms), S) == x


def test_monotone_periodic():
    assert monotone_periodic(7, 2) == (0, 1, 2, 0, 1, 2, 0)
    assert monotone_periodic(5, 3) == (0, 1, 2, 3, 0)
    with pytest.raises(ValueError):
        monotone_periodic(0, 2)


@pytest.mark.parametrize("n,t", [(5, 2), (8, 2), (6, 3), (10, 3)])
def test_monotone_periodic_detects(n, t):
    assert detects_deletions(monotone_periodic(n, t), t)
    assert len(deletion_ball(monotone_periodic(n, t), t)) == comb(n, t)


def test_detecting_sequences_counts():
    # frozen from exhaustive enumeration
    assert detecting_sequences(5, 2, 2) == []
    assert len(detecting_sequences(5, 3, 2)) == 6
    assert len(detecting_sequences(8, 3, 2)) == 6
    assert detecting_sequences(5, 3, 3) == []
    assert monotone_periodic(6, 2) in detecting_sequences(6, 3, 2)


def test_detecting_sequences_budget():
    with pytest.raises(BudgetExceeded):
        detecting_sequences(10, 3, 2, budget=1000)


def test_indel_ball_small():
    ball = indel_ball((0, 1), 1, 2)
    assert (0, 1) not in ball
    assert all(len(z) == 2 for z in ball)
    # brute force: one insertion then one deletion
    brute = set()
    for i in range(1, 4):
        for a in range(2):
            grown = insert((0, 1), (i,), (a,))
            for j in range(1, 4):
                brute.add(delete(grown, (j,)))
    assert ball == brute - {(0, 1)}


def test_transposition_family():
    fam = transposition_family((0, 1, 2))
    assert fam == {1: (1, 0, 2), 2: (0, 2, 1)}


def test_adjacent_equal_family_requires_detecting():
    with pytest.raises(ValueError):
        adjacent_equal_family((0, 0, 0, 0, 0), 3, t=2)
    fam, union = adjacent_equal_family(monotone_periodic(5, 2), 3, t=2)
    assert set(fam) == {1, 2, 3, 4}
    assert all(z[i - 1] == z[i] for i, zs in fam.items() for z in zs)
    assert union == set().union(*fam.values())


def test_parse_sequences():
    text = "# header\n0 1 2\n\n1,1, 2\n"
    assert parse_sequences(text, 3) == [(0, 1, 2), (1, 1, 2)]
    assert format_sequence((0, 1, 2)) == "0 1 2"


@pytest.mark.parametrize("text,where", [
    ("0 x 2", "line 1, column 3"),
    ("0 1\n2  5", "line 2, column 4"),
    ("-1", "line 1, column 1"),
])
def test_parse_errors_locate(text, where):
    with pytest.raises(ValueError, match=where):
        parse_sequences(text, 3)


@settings(max_examples=60)
@given(words, st.integers(0, 2))
def test_deletion_ball_matches_brute_force(x, t):
    if t > len(x):
        return
    brute = {delete(x, S) for S in itertools.combinations(range(1, len(x) + 1), t)}
    assert deletion_ball(x, t) == brute
