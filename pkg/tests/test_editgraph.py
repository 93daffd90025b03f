from __future__ import annotations

import itertools
import random
from collections import deque

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from insdelq import checks
from insdelq.editgraph import (
    BOT_ORDER,
    DIAG,
    LEFT,
    TOP_ORDER,
    UP,
    PathBudgetExceeded,
    build_graph,
    candidate_insertion_indices,
    edit_matrix,
    enumerate_paths,
    f_delete,
    format_matrix,
    indel_distance,
    oracle_J,
    path_bot,
    path_top,
    poset_leq,
)
from insdelq.seqcore import indel_ball, monotone_periodic

X0, Y0 = (0, 1, 2), (1, 1, 2)
FIG_MATRIX = [[0, 1, 2, 3], [1, 2, 3, 4], [2, 1, 2, 3], [3, 2, 3, 2]]

short = st.lists(st.integers(0, 2), max_size=6).map(tuple)


def bfs_distance(x, y, q=3):
    """Shortest sequence of single insertions/deletions, by BFS over words."""
    if x == y:
        return 0
    limit = len(x) + len(y)
    seen = {x}
    frontier = deque([(x, 0)])
    while frontier:
        w, d = frontier.popleft()
        nbrs = {w[:i] + w[i + 1:] for i in range(len(w))}
        if len(w) < limit:
            nbrs |= {w[:i] + (a,) + w[i:] for i in range(len(w) + 1) for a in range(q)}
        for z in nbrs:
            if z == y:
                return d + 1
            if z not in seen:
                seen.add(z)
                frontier.append((z, d + 1))
    raise AssertionError("unreachable")


def test_worked_example_matrix():
    h = edit_matrix(X0, Y0)
    assert h.tolist() == FIG_MATRIX
    assert format_matrix(h).splitlines()[-1] == "3 2 3 2"


def test_worked_example_paths():
    bot, top = path_bot(X0, Y0), path_top(X0, Y0)
    assert str(bot) == "v3,3 v2,2 v1,1 v0,1 v0,0"
    assert str(top) == "v3,3 v2,2 v2,1 v1,0 v0,0"
    assert candidate_insertion_indices(X0, Y0) == ((1,), (2,))
    assert oracle_J(X0, Y0) == (1, 2)
    assert f_delete(bot) == (1,) and f_delete(top) == (1,)
    assert len(enumerate_paths(build_graph(X0, Y0))) == 3


def test_identical_words_have_no_candidates():
    x = monotone_periodic(6, 2)
    assert candidate_insertion_indices(x, x) == ((), ())
    assert path_bot(x, x).types == (DIAG,) * 6


def test_matrix_against_bfs_oracle():
    rng = random.Random(7)
    for _ in range(500):
        x = tuple(rng.randrange(3) for _ in range(rng.randint(0, 4)))
        y = tuple(rng.randrange(3) for _ in range(rng.randint(0, 4)))
        assert indel_distance(x, y) == bfs_distance(x, y), (x, y)


@given(short, short)
def test_matrix_symmetry_and_parity(x, y):
    h = edit_matrix(x, y)
    assert np.array_equal(h, edit_matrix(y, x).T)
    d = int(h[-1, -1])
    assert (d - len(x) - len(y)) % 2 == 0
    assert abs(len(x) - len(y)) <= d <= len(x) + len(y)


@settings(max_examples=80)
@given(short, short)
def test_path_properties_hold(x, y):
    assert checks.check_out_degree(x, y) == []
    assert checks.check_paths(x, y) == []


def test_arc_counts_worked_example():
    for p in enumerate_paths(build_graph(X0, Y0)):
        assert (len(p.arcs(UP)), len(p.arcs(DIAG)), len(p.arcs(LEFT))) == (1, 2, 1)


def test_poset_orders_bot_below_top():
    bot, top = path_bot(X0, Y0), path_top(X0, Y0)
    assert poset_leq(bot, top)
    assert not poset_leq(top, bot)


@pytest.mark.parametrize("t", [2, 3])
def test_candidates_on_monotone_neighbourhood(t):
    x = monotone_periodic(7, t)
    for y in indel_ball(x, 1, t + 1):
        assert checks.check_candidates(x, y) == []


def test_swapped_priorities_break_extremality():
    x = monotone_periodic(6, 2)
    bad = list(itertools.chain.from_iterable(
        checks.check_paths(x, y, orders=(TOP_ORDER, BOT_ORDER)) for y in indel_ball(x, 1, 3)
    ))
    assert any(b["check"] == "extremality" for b in bad)


def test_diagonal_first_breaks_candidates():
    x = monotone_periodic(6, 2)
    bad = [b for y in indel_ball(x, 1, 3) for b in checks.check_candidates(x, y, orders=((2, 1, 3), (2, 3, 1)))]
    assert bad


def test_oracle_j_needs_equal_lengths():
    with pytest.raises(ValueError):
        oracle_J((0, 1), (0,))


def test_path_enumeration_cap():
    with pytest.raises(PathBudgetExceeded):
        enumerate_paths(build_graph(tuple(range(9)), tuple(range(9))), cap=8)
    with pytest.raises(PathBudgetExceeded):
        enumerate_paths(build_graph((0, 0, 0), (1, 1, 1)), budget=10)


def test_graph_dict_is_json_ready():
    d = build_graph(X0, Y0).to_dict()
    assert d["matrix"] == FIG_MATRIX
    assert [[2, 1], [1, 0]] in d["arcs"]["2"]
