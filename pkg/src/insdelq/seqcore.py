"""Classical sequences over Z_q: deletions, insertions, balls and deletion-index detection.

Sequences are plain tuples of ints and index sets are sorted tuples of 1-based
positions.  Everything here is a pure function over immutable values.
"""

from __future__ import annotations

import itertools
import re
from collections.abc import Iterable, Iterator
from math import comb

Sequence = tuple[int, ...]
IndexSet = tuple[int, ...]

DEFAULT_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    """An exhaustive enumeration would exceed its configured budget."""


def sequence(symbols: Iterable[int], q: int | None = None) -> Sequence:
    """Validate ``symbols`` as a word over Z_q and return it as a tuple."""
    x = tuple(int(s) for s in symbols)
    if q is not None:
        if q < 1:
            raise ValueError(f"alphabet size must be positive, got {q}")
        for pos, s in enumerate(x, start=1):
            if not 0 <= s < q:
                raise ValueError(f"symbol {s} at position {pos} outside Z_{q}")
    return x


def index_set(indices: Iterable[int], bound: int) -> IndexSet:
    """Normalize ``indices`` to a strictly increasing tuple within [1, bound]."""
    raw = [int(i) for i in indices]
    s = tuple(sorted(raw))
    if len(set(s)) != len(s):
        raise ValueError(f"duplicate indices in {raw}")
    for i in s:
        if not 1 <= i <= bound:
            raise ValueError(f"index {i} outside [1, {bound}]")
    return s


def delete(x: Sequence, S: Iterable[int]) -> Sequence:
    """Drop the (1-based) positions ``S`` from ``x``."""
    S = index_set(S, len(x))
    drop = set(S)
    return tuple(s for pos, s in enumerate(x, start=1) if pos not in drop)


def insert(x: Sequence, S: Iterable[int], symbols: Iterable[int]) -> Sequence:
    """Insert ``symbols`` so that they occupy positions ``S`` of the result.

    Insertions are applied in increasing index order, so the k-th smallest
    index of ``S`` receives the k-th symbol.
    """
    lam = tuple(int(s) for s in symbols)
    S = list(S)
    if len(S) != len(lam):
        raise ValueError(f"{len(S)} indices but {len(lam)} symbols")
    S = index_set(S, len(x) + len(lam))
    out = list(x)
    for s, sym in zip(S, lam):
        out.insert(s - 1, sym)
    return tuple(out)


def _single_deletions(x: Sequence) -> Iterator[Sequence]:
    for i in range(len(x)):
        yield x[:i] + x[i + 1:]


def deletion_ball(x: Sequence, t: int) -> set[Sequence]:
    """All distinct words reachable from ``x`` by exactly ``t`` deletions."""
    n = len(x)
    if not 0 <= t <= n:
        raise ValueError(f"t={t} outside [0, {n}]")
    if t == 1:
        return set(_single_deletions(x))
    return {delete(x, S) for S in itertools.combinations(range(1, n + 1), t)}


def indel_ball(x: Sequence, t: int, q: int) -> set[Sequence]:
    """Words obtained by ``t`` insertions followed by ``t`` deletions, minus ``x`` itself."""
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    n = len(x)
    inserted = set()
    for T in itertools.combinations(range(1, n + t + 1), t):
        for lam in itertools.product(range(q), repeat=t):
            inserted.add(insert(x, T, lam))
    out: set[Sequence] = set()
    for z in inserted:
        out |= deletion_ball(z, t)
    out.discard(tuple(x))
    return out


def monotone_periodic(n: int, t: int) -> Sequence:
    """The word (0, 1, ..., t, 0, 1, ...) of length ``n`` over Z_{t+1}."""
    if n < 1 or t < 0:
        raise ValueError(f"need n >= 1 and t >= 0, got n={n}, t={t}")
    return tuple((i - 1) % (t + 1) for i in range(1, n + 1))


def detects_deletions(x: Sequence, t: int) -> bool:
    """True iff every set of ``t`` deletion positions is recoverable from the result.

    Formally: ``S -> delete(x, S)`` is injective on ``t``-subsets of positions.
    """
    n = len(x)
    if not 0 <= t <= n:
        raise ValueError(f"t={t} outside [0, {n}]")
    return len(deletion_ball(x, t)) == comb(n, t)


def detecting_sequences(n: int, q: int, t: int, budget: int = DEFAULT_BUDGET) -> list[Sequence]:
    """Enumerate every length-``n`` word over Z_q that detects ``t`` deletion indices."""
    if q**n > budget:
        raise BudgetExceeded(f"q^n = {q**n} words exceeds budget {budget}")
    return [x for x in itertools.product(range(q), repeat=n) if detects_deletions(x, t)]


def transposition_family(x: Sequence) -> dict[int, Sequence]:
    """Map ``i`` in [1, n-1] to ``x`` with positions ``i`` and ``i+1`` swapped."""
    if len(x) < 2:
        raise ValueError("need a word of length at least 2")
    out = {}
    for i in range(1, len(x)):
        z = list(x)
        z[i - 1], z[i] = z[i], z[i - 1]
        out[i] = tuple(z)
    return out


def adjacent_equal_family(
    x: Sequence, q: int, t: int | None = None
) -> tuple[dict[int, set[Sequence]], set[Sequence]]:
    """Split the single-indel ball of ``x`` by where a repeated adjacent pair sits.

    Returns ``(U, union)`` where ``U[i]`` holds the members ``z`` with
    ``z_i == z_{i+1}``.  When ``t`` is given, ``x`` is checked to detect
    ``t`` deletion indices first.
    """
    if t is not None and not detects_deletions(x, t):
        raise ValueError(f"{x} does not detect {t} deletion indices")
    ball = indel_ball(x, 1, q)
    fam = {i: {z for z in ball if z[i - 1] == z[i]} for i in range(1, len(x))}
    union = set().union(*fam.values()) if fam else set()
    return fam, union


def parse_sequences(text: str, q: int | None = None) -> list[Sequence]:
    """Parse one sequence per non-blank line; symbols split by whitespace or commas.

    Lines starting with ``#`` are skipped.  Parse errors report line and column.
    """
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        symbols = []
        for match in re.finditer(r"[^\s,]+", line):
            token, col = match.group(), match.start() + 1
            try:
                value = int(token)
            except ValueError:
                raise ValueError(f"line {lineno}, column {col}: not an integer: {token!r}") from None
            if value < 0:
                raise ValueError(f"line {lineno}, column {col}: negative symbol {value}")
            if q is not None and value >= q:
                raise ValueError(f"line {lineno}, column {col}: symbol {value} outside Z_{q}")
            symbols.append(value)
        out.append(tuple(symbols))
    return out


def format_sequence(x: Sequence) -> str:
    return " ".join(str(s) for s in x)
