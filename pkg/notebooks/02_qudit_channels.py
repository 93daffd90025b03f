# %% [markdown]
# # Ensembles, deletion and insertion
#
# States are weighted lists of pure vectors.  Deleting a site splits each
# component into conditional states, so nothing larger than a vector is built.

# %%
import numpy as np

from insdelq.qsim import (
    Ensemble, PureState, delete_qudits, fidelity, insert_qudits,
    measure_branches, mt_family,
)

psi = PureState.from_amplitudes((2, 2, 2), [1, 0, 0, 0, 0, 0, 0, 1])  # GHZ
rho = delete_qudits(psi, [2])
print(rho.rank_bound, "components")
print(np.round(rho.density_matrix().real, 3))

# %%
sigma = Ensemble.maximally_mixed((2,))
grown = insert_qudits(psi, [2], sigma)
print("dims after insert:", grown.dims)
print("delete at the same slot gives back psi:", fidelity(psi, delete_qudits(grown, [2])))

# %% [markdown]
# Residue measurement on one embedded site (dimension 6 = 2 * 3).

# %%
site = PureState.from_amplitudes((6,), [1, 1, 0, 0, 1, 0])
for k, p, post in measure_branches(site, 1, mt_family(2, 2)):
    print(f"residue {k}: p = {p:.3f}")
