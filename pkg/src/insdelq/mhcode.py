"""Deletion-correcting codes built by embedding each base-code qudit into a residue class.

Site ``i`` of a base codeword (dimension ``l``) is mapped into dimension
``l*(t+1)`` by ``|j> -> |j*(t+1) + r_i>`` with ``r_i = (i-1) % (t+1)``.
Measuring residues then reveals the monotone periodic word, and any deletions
show up as deletions of that word, which locates them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import basecode
from .basecode import CodeIsometry, DecodingError
from .qsim import Ensemble, PureState, apply_site_operator, as_ensemble, insert_qudits, measure_site, mt_family
from .seqcore import IndexSet, Sequence, delete, monotone_periodic

SUPPORT_TOL = 1e-9


@dataclass(frozen=True)
class MHCode:
    n: int
    l: int
    t: int
    base: CodeIsometry

    def __post_init__(self):
        if self.base.n0 != self.n or self.base.l != self.l:
            raise ValueError(
                f"base code has n0={self.base.n0}, l={self.base.l}; expected n={self.n}, l={self.l}"
            )
        if self.t < 1:
            raise ValueError(f"t must be at least 1, got {self.t}")
        if self.base.erasures < self.t:
            raise ValueError(f"base code corrects {self.base.erasures} erasures, need {self.t}")

    @property
    def site_dim(self) -> int:
        return self.l * (self.t + 1)

    @property
    def signature(self) -> Sequence:
        """Residue pattern every codeword produces under measurement."""
        return monotone_periodic(self.n, self.t)

    def residue(self, site: int) -> int:
        return (site - 1) % (self.t + 1)

    def measurement(self):
        return mt_family(self.l, self.t)


def embedding(l: int, t: int, residue: int) -> np.ndarray:
    """The ``l*(t+1) x l`` isometry ``|j> -> |j*(t+1) + residue>``."""
    if not 0 <= residue <= t:
        raise ValueError(f"residue {residue} outside [0, {t}]")
    E = np.zeros((l * (t + 1), l), dtype=complex)
    for j in range(l):
        E[j * (t + 1) + residue, j] = 1
    return E


def eta_embed(state: PureState | Ensemble, site: int, l: int, t: int, residue: int | None = None) -> Ensemble:
    """Embed one site; the residue defaults to the one site ``site`` carries in a codeword."""
    r = (site - 1) % (t + 1) if residue is None else residue
    return apply_site_operator(state, site, embedding(l, t, r))


def eta_unembed(state: PureState | Ensemble, site: int, l: int, t: int, residue: int | None = None) -> Ensemble:
    """Inverse of :func:`eta_embed`; the site must lie in the residue subspace."""
    ens = as_ensemble(state)
    r = (site - 1) % (t + 1) if residue is None else residue
    E = embedding(l, t, r)
    arr = ens.vectors.reshape((len(ens.weights),) + ens.dims)
    outside = np.moveaxis(arr, site, 1).copy()
    outside[:, E.argmax(axis=0)] = 0
    outside = outside.reshape(len(ens.weights), -1)
    leak = float(ens.weights @ np.einsum("kd,kd->k", outside.conj(), outside).real)
    if leak > SUPPORT_TOL:
        raise DecodingError(f"site {site} has weight {leak:.2e} outside residue class {r}")
    return apply_site_operator(ens, site, E.conj().T)


def mh_encode(code: MHCode, message: PureState) -> PureState:
    state = as_ensemble(basecode.encode(code.base, message))
    for site in range(1, code.n + 1):
        state = eta_embed(state, site, code.l, code.t)
    return PureState(state.dims, state.vectors[0])


def detect_deletion_positions(r_obs: Sequence, n: int, t: int) -> IndexSet:
    """The unique set ``S`` with ``delete(m, S) == r_obs`` for the monotone periodic ``m``."""
    m = monotone_periodic(n, t)
    d = n - len(r_obs)
    if d < 0:
        raise DecodingError(f"observed word is longer ({len(r_obs)}) than the code ({n})")
    if d > t:
        raise DecodingError(f"{d} deletions exceed capability t={t}")
    r_obs = tuple(r_obs)
    hits = [S for S in itertools.combinations(range(1, n + 1), d) if delete(m, S) == r_obs]
    if not hits:
        raise DecodingError(f"{r_obs} is not a deletion of {m}")
    if len(hits) > 1:
        raise AssertionError(f"deletion positions of {r_obs} are ambiguous: {hits}")
    return hits[0]


def measure_residues(code: MHCode, state: PureState | Ensemble, rng=None) -> tuple[Sequence, Ensemble]:
    """Measure every site left to right; returns the outcome word and the post-measurement state."""
    gen = np.random.default_rng(rng)
    fam = code.measurement()
    ens = as_ensemble(state)
    results = []
    for site in range(1, ens.nsites + 1):
        k, _, ens = measure_site(ens, site, fam, gen)
        results.append(k)
    return tuple(results), ens


def mh_deletion_decode(
    code: MHCode, state: PureState | Ensemble, rng=None, results: Sequence | None = None
) -> Ensemble:
    """Decode a codeword that lost up to ``t`` sites at unknown positions.

    ``results`` may carry residue outcomes already measured upstream; otherwise
    the sites are measured here.  Pass ``rng=None`` with ``results`` to run the
    base recovery as a full channel.
    """
    ens = as_ensemble(state)
    if results is None:
        results, ens = measure_residues(code, ens, rng)
    if len(results) != ens.nsites:
        raise ValueError(f"{len(results)} results for {ens.nsites} sites")
    S = detect_deletion_positions(results, code.n, code.t)
    # After refilling S, position i holds original site i again.
    fresh = [code.residue(j) for j in S]
    if S:
        filler = PureState.basis((code.site_dim,) * len(S), fresh)
        ens = insert_qudits(ens, S, filler)
    for site in range(1, code.n + 1):
        ens = eta_unembed(ens, site, code.l, code.t, code.residue(site))
    return basecode.correct_erasures(code.base, ens, S, rng)


def mh_unitary_decode(code: MHCode, state: PureState | Ensemble, rng=None) -> Ensemble:
    """Decode a state whose residue word equals the signature but one site may be corrupted."""
    ens = as_ensemble(state)
    if ens.nsites != code.n:
        raise ValueError(f"expected {code.n} sites, got {ens.nsites}")
    for site in range(1, code.n + 1):
        ens = eta_unembed(ens, site, code.l, code.t, code.residue(site))
    return basecode.correct_single_error(code.base, ens, rng)
