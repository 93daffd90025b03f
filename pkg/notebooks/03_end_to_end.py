# %% [markdown]
# # Encoding, one insertion plus one deletion, decoding
#
# Base code: the five-qubit code, embedded into six levels per site so that
# residues mod 3 tag each position.

# %%
from insdelq import five_qudit_code
from insdelq.decoder import ChannelSpec, apply_insdel, decode, decode_branches
from insdelq.harness import ExperimentConfig, cmd_experiment
from insdelq.mhcode import MHCode, mh_encode
from insdelq.qsim import Ensemble, PureState, fidelity

code = MHCode(5, 2, 2, five_qudit_code())
mu = PureState.random((2,), 1)
cw = mh_encode(code, mu)
print("codeword dims:", cw.dims)

# %% [markdown]
# Insert |5> before site 2, then lose site 5.

# %%
rho = apply_insdel(cw, ChannelSpec(insert_at=2, delete_at=5, sigma=Ensemble.pure(PureState.basis((6,), (5,)))))
msg, report = decode(code, rho, rng=0)
print(report.to_dict())
print("fidelity:", fidelity(mu, msg))

# %% [markdown]
# Every measurement branch at once, for a maximally mixed insertion.

# %%
rho = apply_insdel(cw, ChannelSpec(4, 1, Ensemble.maximally_mixed((6,))))
for _, rep in decode_branches(code, rho, mu):
    print(rep.results, rep.branch, rep.S1, rep.S2, f"p={rep.probability:.3f}", f"F={rep.fidelity:.12f}")

# %% [markdown]
# A small sweep through the harness.

# %%
rep = cmd_experiment(ExperimentConfig(messages=1, sigma_catalogue=["basis"]))
print(rep.summary())
