"""Brute-force property checks over DP paths and single-indel neighbourhoods.

Each ``check_*`` function returns a list of counterexample dicts (empty when
the property holds).  Counterexamples carry enough data to replay the case.
"""

from __future__ import annotations

from .editgraph import (
    BOT_ORDER,
    DIAG,
    LEFT,
    TOP_ORDER,
    UP,
    build_graph,
    edit_matrix,
    enumerate_paths,
    f_delete,
    f_insert,
    oracle_J,
    poset_leq,
    trace_path,
)
from .seqcore import Sequence, adjacent_equal_family, delete, deletion_ball, transposition_family


def _cx(check: str, x: Sequence, y: Sequence | None = None, **detail) -> dict:
    out = {"check": check, "x": list(x)}
    if y is not None:
        out["y"] = list(y)
    out.update(detail)
    return out


def check_out_degree(x: Sequence, y: Sequence) -> list[dict]:
    """Every vertex except the origin has an outgoing arc."""
    g = build_graph(x, y)
    bad = []
    for i in range(len(x) + 1):
        for j in range(len(y) + 1):
            if (i, j) != (0, 0) and not g.out_arcs((i, j)):
                bad.append(_cx("out_degree", x, y, vertex=[i, j]))
    return bad


def check_paths(
    x: Sequence,
    y: Sequence,
    orders=(BOT_ORDER, TOP_ORDER),
    cap: int = 8,
) -> list[dict]:
    """Arc counts, insertion/deletion read-off, and extremality over every path."""
    h = edit_matrix(x, y)
    g = build_graph(x, y, h)
    n, m = len(x), len(y)
    d = int(h[n, m])
    bot = trace_path(x, y, h, orders[0])
    top = trace_path(x, y, h, orders[1])
    paths = enumerate_paths(g, cap=cap)
    bad = []
    want = {UP: (d + n - m) // 2, DIAG: (-d + n + m) // 2, LEFT: (d - n + m) // 2}
    for p in paths:
        counts = {k: len(p.arcs(k)) for k in (UP, DIAG, LEFT)}
        if counts != want:
            bad.append(_cx("arc_counts", x, y, path=str(p), counts=counts, expected=want))
        fi, fd = f_insert(p), f_delete(p)
        if len(fi) != counts[LEFT] or len(fd) != counts[UP]:
            bad.append(_cx("readoff_size", x, y, path=str(p)))
        if delete(y, fi) != delete(x, fd):
            bad.append(_cx("readoff_common", x, y, path=str(p), f_insert=fi, f_delete=fd))
        if not (poset_leq(bot, p) and poset_leq(p, top)):
            bad.append(_cx("extremality", x, y, path=str(p), bot=str(bot), top=str(top)))
    if bot.vertices not in {p.vertices for p in paths}:
        bad.append(_cx("bot_not_a_path", x, y, bot=str(bot)))
    if top.vertices not in {p.vertices for p in paths}:
        bad.append(_cx("top_not_a_path", x, y, top=str(top)))
    return bad


def check_candidates(x: Sequence, y: Sequence, orders=(BOT_ORDER, TOP_ORDER)) -> list[dict]:
    """Union of the two candidate sets equals the brute-force set and has size <= 2."""
    h = edit_matrix(x, y)
    s1 = f_insert(trace_path(x, y, h, orders[0]))
    s2 = f_insert(trace_path(x, y, h, orders[1]))
    union = tuple(sorted(set(s1) | set(s2)))
    j = oracle_J(x, y)
    bad = []
    if union != j or len(union) > 2 or len(s1) != 1 or len(s2) != 1:
        bad.append(_cx("candidates", x, y, S1=s1, S2=s2, J=j))
    return bad


def check_close_repeats(x: Sequence, t: int) -> list[dict]:
    """Equal symbols in a detecting word are more than ``t`` positions apart."""
    n = len(x)
    return [
        _cx("close_repeat", x, i=i, j=j)
        for i in range(1, n + 1)
        for j in range(i + 1, min(n, i + t) + 1)
        if x[i - 1] == x[j - 1]
    ]


def check_common_deletions(x: Sequence, ball: set[Sequence]) -> list[dict]:
    """Swapped neighbours share exactly two single deletions with ``x``; others share one."""
    dx = deletion_ball(x, 1)
    swaps = transposition_family(x)
    bad = []
    for i, ti in swaps.items():
        want = {delete(x, [i]), delete(x, [i + 1])}
        got = dx & deletion_ball(ti, 1)
        if got != want:
            bad.append(_cx("swap_intersection", x, ti, i=i, got=sorted(got), expected=sorted(want)))
    swapped = set(swaps.values())
    for y in ball - swapped:
        got = dx & deletion_ball(y, 1)
        if len(got) != 1:
            bad.append(_cx("singleton_intersection", x, y, got=sorted(got)))
    return bad


def check_repeated_neighbours(x: Sequence, q: int, ball: set[Sequence]) -> list[dict]:
    """Where a neighbour repeats a symbol, the common deletion is reached only through that pair."""
    n = len(x)
    dx = deletion_ball(x, 1)
    fam, union = adjacent_equal_family(x, q)
    bad = []
    for i, members in fam.items():
        for y in members:
            common = dx & deletion_ball(y, 1)
            if len(common) != 1:
                bad.append(_cx("repeat_singleton", x, y, i=i, got=sorted(common)))
                continue
            (z,) = common
            others = [j for j in range(1, n + 1) if j not in (i, i + 1) and delete(y, [j]) == z]
            if delete(y, [i]) != z or delete(y, [i + 1]) != z or others:
                bad.append(_cx("repeat_positions", x, y, i=i, z=list(z), others=others))
    for y in ball - union:
        for z in dx & deletion_ball(y, 1):
            hits = [j for j in range(1, n + 1) if delete(y, [j]) == z]
            if len(hits) != 1:
                bad.append(_cx("unique_position", x, y, z=list(z), positions=hits))
    swaps = set(transposition_family(x).values())
    if swaps & union:
        bad.append(_cx("swap_repeat_overlap", x, overlap=sorted(swaps & union)))
    return bad
