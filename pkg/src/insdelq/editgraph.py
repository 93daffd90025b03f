"""Indel-distance DP table, its typed-arc digraph, and extremal corner-to-corner paths.

Rows index prefixes of ``x`` and columns index prefixes of ``y``.  Arc types:

* 1 -- up, ``v[i,j] -> v[i-1,j]`` (a symbol of ``x`` is deleted)
* 2 -- diagonal, ``v[i,j] -> v[i-1,j-1]`` with ``x_i == y_j``
* 3 -- left, ``v[i,j] -> v[i,j-1]`` (a symbol of ``y`` is inserted)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .seqcore import IndexSet, Sequence, delete, deletion_ball

UP, DIAG, LEFT = 1, 2, 3

# Branch priorities of the two backtracking subroutines.
BOT_ORDER = (UP, DIAG, LEFT)
TOP_ORDER = (LEFT, DIAG, UP)

DEFAULT_PATH_CAP = 8
DEFAULT_PATH_BUDGET = 200_000

Vertex = tuple[int, int]


class PathBudgetExceeded(RuntimeError):
    pass


def edit_matrix(x: Sequence, y: Sequence) -> np.ndarray:
    """Return the (n+1) x (m+1) table whose (i, j) entry is d(x[:i], y[:j])."""
    n, m = len(x), len(y)
    h = np.zeros((n + 1, m + 1), dtype=np.int64)
    h[:, 0] = np.arange(n + 1)
    h[0, :] = np.arange(m + 1)
    for i in range(1, n + 1):
        xi = x[i - 1]
        for j in range(1, m + 1):
            h[i, j] = min(
                h[i, j - 1] + 1,
                h[i - 1, j] + 1,
                h[i - 1, j - 1] + (0 if xi == y[j - 1] else 2),
            )
    return h


def indel_distance(x: Sequence, y: Sequence) -> int:
    """Smallest number of single-symbol insertions plus deletions turning x into y."""
    return int(edit_matrix(x, y)[len(x), len(y)])


def _has_arc(x: Sequence, y: Sequence, h: np.ndarray, i: int, j: int, kind: int) -> bool:
    if kind == UP:
        return i >= 1 and h[i, j] == h[i - 1, j] + 1
    if kind == DIAG:
        return i >= 1 and j >= 1 and x[i - 1] == y[j - 1]
    return j >= 1 and h[i, j] == h[i, j - 1] + 1


def _step(i: int, j: int, kind: int) -> Vertex:
    if kind == UP:
        return i - 1, j
    if kind == DIAG:
        return i - 1, j - 1
    return i, j - 1


@dataclass(frozen=True)
class EditGraph:
    x: Sequence
    y: Sequence
    h: np.ndarray
    arcs: dict[int, frozenset[tuple[Vertex, Vertex]]]

    def out_arcs(self, v: Vertex) -> list[tuple[int, Vertex]]:
        """Outgoing ``(type, head)`` pairs of ``v``, ordered by arc type."""
        i, j = v
        return [
            (kind, _step(i, j, kind))
            for kind in (UP, DIAG, LEFT)
            if _has_arc(self.x, self.y, self.h, i, j, kind)
        ]

    def to_dict(self) -> dict:
        return {
            "x": list(self.x),
            "y": list(self.y),
            "matrix": self.h.tolist(),
            "arcs": {
                str(kind): sorted([list(a), list(b)] for a, b in self.arcs[kind])
                for kind in (UP, DIAG, LEFT)
            },
        }


def build_graph(x: Sequence, y: Sequence, h: np.ndarray | None = None) -> EditGraph:
    if h is None:
        h = edit_matrix(x, y)
    n, m = len(x), len(y)
    if h.shape != (n + 1, m + 1):
        raise ValueError(f"matrix shape {h.shape} does not match lengths ({n}, {m})")
    arcs: dict[int, set] = {UP: set(), DIAG: set(), LEFT: set()}
    for i in range(n + 1):
        for j in range(m + 1):
            for kind in (UP, DIAG, LEFT):
                if _has_arc(x, y, h, i, j, kind):
                    arcs[kind].add(((i, j), _step(i, j, kind)))
    return EditGraph(x, y, h, {k: frozenset(v) for k, v in arcs.items()})


@dataclass(frozen=True)
class DPPath:
    """A path from ``v[n,m]`` to ``v[0,0]``; ``types[k]`` labels the arc leaving ``vertices[k]``."""

    vertices: tuple[Vertex, ...]
    types: tuple[int, ...]

    def arcs(self, kind: int | None = None) -> list[tuple[Vertex, Vertex]]:
        return [
            (self.vertices[k], self.vertices[k + 1])
            for k, t in enumerate(self.types)
            if kind is None or t == kind
        ]

    def __str__(self) -> str:
        return " ".join(f"v{i},{j}" for i, j in self.vertices)


def trace_path(x: Sequence, y: Sequence, h: np.ndarray, order: tuple[int, int, int]) -> DPPath:
    """Backtrack from the corner, taking the first applicable arc type in ``order``.

    ``BOT_ORDER`` gives the first subroutine and ``TOP_ORDER`` the second.
    """
    i, j = len(x), len(y)
    verts = [(i, j)]
    types = []
    while i >= 1 or j >= 1:
        for kind in order:
            if _has_arc(x, y, h, i, j, kind):
                i, j = _step(i, j, kind)
                verts.append((i, j))
                types.append(kind)
                break
        else:
            raise AssertionError(f"no outgoing arc at v[{i},{j}]; DP table is inconsistent")
    return DPPath(tuple(verts), tuple(types))


def path_bot(x: Sequence, y: Sequence, h: np.ndarray | None = None) -> DPPath:
    return trace_path(x, y, edit_matrix(x, y) if h is None else h, BOT_ORDER)


def path_top(x: Sequence, y: Sequence, h: np.ndarray | None = None) -> DPPath:
    return trace_path(x, y, edit_matrix(x, y) if h is None else h, TOP_ORDER)


def f_insert(path: DPPath) -> IndexSet:
    """Columns ``j`` of the left arcs ``v[i,j] -> v[i,j-1]`` on the path."""
    return tuple(sorted({a[1] for a, _ in path.arcs(LEFT)}))


def f_delete(path: DPPath) -> IndexSet:
    """Rows ``i`` of the up arcs ``v[i,j] -> v[i-1,j]`` on the path."""
    return tuple(sorted({a[0] for a, _ in path.arcs(UP)}))


def candidate_insertion_indices(
    x: Sequence,
    y: Sequence,
    h: np.ndarray | None = None,
    orders: tuple[tuple[int, int, int], tuple[int, int, int]] = (BOT_ORDER, TOP_ORDER),
) -> tuple[IndexSet, IndexSet]:
    """Return ``(S1, S2)``, the insertion columns read off the bottom and top paths.

    ``orders`` exists so that verification runs can inject wrong priorities.
    """
    if h is None:
        h = edit_matrix(x, y)
    return f_insert(trace_path(x, y, h, orders[0])), f_insert(trace_path(x, y, h, orders[1]))


def oracle_J(x: Sequence, y: Sequence) -> IndexSet:
    """Positions ``j`` of ``y`` whose deletion lands in the single-deletion ball of ``x``."""
    if len(x) != len(y):
        raise ValueError(f"lengths differ: {len(x)} vs {len(y)}")
    ball = deletion_ball(x, 1)
    return tuple(j for j in range(1, len(y) + 1) if delete(y, [j]) in ball)


def enumerate_paths(
    g: EditGraph, cap: int = DEFAULT_PATH_CAP, budget: int = DEFAULT_PATH_BUDGET
) -> list[DPPath]:
    """Every path from ``v[n,m]`` to ``v[0,0]``, by depth-first search.

    Only meant as an oracle on small tables.  Arcs are explored in type order,
    which fixes the output ordering.
    """
    n, m = len(g.x), len(g.y)
    if n > cap or m > cap:
        raise PathBudgetExceeded(f"lengths ({n}, {m}) exceed path enumeration cap {cap}")
    out: list[DPPath] = []
    verts: list[Vertex] = [(n, m)]
    types: list[int] = []

    def walk(v: Vertex) -> None:
        if v == (0, 0):
            if len(out) >= budget:
                raise PathBudgetExceeded(f"more than {budget} paths")
            out.append(DPPath(tuple(verts), tuple(types)))
            return
        for kind, w in g.out_arcs(v):
            verts.append(w)
            types.append(kind)
            walk(w)
            verts.pop()
            types.pop()

    walk((n, m))
    return out


def column_extent(path: DPPath, ncols: int) -> tuple[list[int], list[int]]:
    """Per column ``j``, the minimum and maximum row visited by ``path``."""
    lo = [None] * ncols
    hi = [None] * ncols
    for i, j in path.vertices:
        lo[j] = i if lo[j] is None else min(lo[j], i)
        hi[j] = i if hi[j] is None else max(hi[j], i)
    return lo, hi


def poset_leq(p: DPPath, q: DPPath) -> bool:
    """Columnwise comparison of both the lowest and highest visited rows."""
    ncols = p.vertices[0][1] + 1
    if q.vertices[0] != p.vertices[0]:
        raise ValueError("paths belong to different graphs")
    plo, phi = column_extent(p, ncols)
    qlo, qhi = column_extent(q, ncols)
    return all(a <= b for a, b in zip(plo, qlo)) and all(a <= b for a, b in zip(phi, qhi))


def format_matrix(h: np.ndarray) -> str:
    return "\n".join(" ".join(str(int(v)) for v in row) for row in h)
