# %% [markdown]
# # Locating one insertion and one deletion with DP paths
#
# Two words of equal length that differ by one insertion and one deletion.
# The indel table plus two greedy backtracks give at most two candidate
# positions for the inserted symbol.

# %%
from insdelq import checks
from insdelq.editgraph import (
    build_graph, candidate_insertion_indices, edit_matrix, enumerate_paths,
    format_matrix, oracle_J, path_bot, path_top, poset_leq,
)
from insdelq.seqcore import delete, indel_ball, insert, monotone_periodic

x, y = (0, 1, 2), (1, 1, 2)
h = edit_matrix(x, y)
print(format_matrix(h))

# %%
bot, top = path_bot(x, y, h), path_top(x, y, h)
print("bottom:", bot)
print("top:   ", top)
print("S1, S2 =", candidate_insertion_indices(x, y, h), " brute force J =", oracle_J(x, y))

# %% [markdown]
# Every corner-to-corner path lies between the two extremes.

# %%
paths = enumerate_paths(build_graph(x, y, h))
for p in paths:
    print(p, poset_leq(bot, p) and poset_leq(p, top))

# %% [markdown]
# On the residue signature the candidates always hit the inserted symbol.

# %%
m = monotone_periodic(8, 2)
r = delete(insert(m, [3], [2]), [7])
print("m =", m)
print("r =", r)
print(candidate_insertion_indices(m, r), oracle_J(m, r))

bad = [b for z in indel_ball(m, 1, 3) for b in checks.check_candidates(m, z)]
print(len(indel_ball(m, 1, 3)), "neighbours checked,", len(bad), "counterexamples")
