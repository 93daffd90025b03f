"""Single-insertion-plus-single-deletion channel and its six-step decoder."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .editgraph import candidate_insertion_indices, edit_matrix
from .mhcode import MHCode, mh_deletion_decode, mh_unitary_decode
from .qsim import Ensemble, PureState, as_ensemble, delete_qudits, fidelity, insert_qudits, measure_branches, measure_site
from .seqcore import IndexSet, Sequence, delete, monotone_periodic

UNITARY_PATH = "unitary-path"
DELETION_PATH = "deletion-path"


class PreconditionError(ValueError):
    """The received state cannot come from one insertion followed by one deletion."""


@dataclass(frozen=True)
class ChannelSpec:
    """Insert ``sigma`` at ``insert_at`` (1-based, in the grown system), then delete site ``delete_at``."""

    insert_at: int
    delete_at: int
    sigma: Ensemble

    def validate(self, n: int) -> None:
        for name, idx in (("insert_at", self.insert_at), ("delete_at", self.delete_at)):
            if not 1 <= idx <= n + 1:
                raise ValueError(f"{name}={idx} outside [1, {n + 1}]")
        if self.sigma.nsites != 1:
            raise ValueError("inserted state must occupy exactly one site")

    @property
    def realized_insertion(self) -> int | None:
        """Position of the inserted site after the deletion, or None if it was the one deleted."""
        if self.delete_at == self.insert_at:
            return None
        return self.insert_at - (self.delete_at < self.insert_at)


@dataclass
class DecodeReport:
    results: Sequence
    branch: str
    S1: IndexSet = ()
    S2: IndexSet = ()
    deleted_total: IndexSet = ()
    probability: float = 1.0
    fidelity: float | None = None
    seed: int | None = None
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "results": list(self.results),
            "branch": self.branch,
            "S1": list(self.S1),
            "S2": list(self.S2),
            "deleted_total": list(self.deleted_total),
            "probability": self.probability,
            "fidelity": self.fidelity,
            "seed": self.seed,
            "config": self.config,
        }


def apply_insdel(codeword: PureState | Ensemble, ch: ChannelSpec) -> Ensemble:
    """Insert ``ch.sigma`` and then delete one site."""
    ens = as_ensemble(codeword)
    ch.validate(ens.nsites)
    if len(set(ens.dims)) == 1 and ch.sigma.dims[0] != ens.dims[0]:
        raise ValueError(f"inserted site has dimension {ch.sigma.dims[0]}, code sites have {ens.dims[0]}")
    return delete_qudits(insert_qudits(ens, [ch.insert_at], ch.sigma), [ch.delete_at])


def classify_branch(r: Sequence, n: int, t: int) -> str:
    if len(r) != n:
        raise ValueError(f"result word has length {len(r)}, expected {n}")
    return UNITARY_PATH if tuple(r) == monotone_periodic(n, t) else DELETION_PATH


def _finish(code: MHCode, r: Sequence, sigma: Ensemble, rng, report: DecodeReport) -> Ensemble:
    """Steps 2-6, given the residue word ``r`` and the post-measurement state."""
    report.branch = classify_branch(r, code.n, code.t)
    if report.branch == UNITARY_PATH:
        return mh_unitary_decode(code, sigma, rng)
    m = code.signature
    h = edit_matrix(m, r)
    if h[code.n, code.n] != 2:
        raise PreconditionError(f"residue word {r} is not one insertion and one deletion away from {m}")
    S1, S2 = candidate_insertion_indices(m, r, h)
    S = tuple(sorted(set(S1) | set(S2)))
    report.S1, report.S2, report.deleted_total = S1, S2, S
    reduced = delete_qudits(sigma, S)
    return mh_deletion_decode(code, reduced, rng, results=delete(r, S))


def decode(code: MHCode, received: PureState | Ensemble, rng=None) -> tuple[Ensemble, DecodeReport]:
    """Measure residues site by site (sampling outcomes) and decode.

    ``rng`` is an int seed or a ``np.random.Generator``.
    """
    if code.t < 2:
        raise ValueError("decoding one insertion plus one deletion needs t >= 2")
    seed = rng if isinstance(rng, (int, np.integer)) else None
    gen = np.random.default_rng(rng)
    ens = as_ensemble(received)
    if ens.nsites != code.n:
        raise PreconditionError(f"received {ens.nsites} sites, expected {code.n}")
    fam = code.measurement()
    results = []
    prob = 1.0
    for site in range(1, code.n + 1):
        k, p, ens = measure_site(ens, site, fam, gen)
        results.append(k)
        prob *= p
    report = DecodeReport(tuple(results), "", probability=prob, seed=None if seed is None else int(seed))
    return _finish(code, tuple(results), ens, gen, report), report


def decode_branches(
    code: MHCode, received: PureState | Ensemble, target: PureState | None = None
) -> list[tuple[Ensemble, DecodeReport]]:
    """Follow every residue-measurement branch and decode each one without sampling.

    Base-code recovery runs as a full channel, so the output per branch is exact.
    """
    if code.t < 2:
        raise ValueError("decoding one insertion plus one deletion needs t >= 2")
    ens = as_ensemble(received)
    if ens.nsites != code.n:
        raise PreconditionError(f"received {ens.nsites} sites, expected {code.n}")
    fam = code.measurement()
    frontier = [((), 1.0, ens)]
    for site in range(1, code.n + 1):
        frontier = [
            (prefix + (k,), prob * p, post)
            for prefix, prob, state in frontier
            for k, p, post in measure_branches(state, site, fam)
        ]
    out = []
    for r, prob, state in frontier:
        report = DecodeReport(r, "", probability=prob)
        message = _finish(code, r, state, None, report)
        if target is not None:
            report.fidelity = fidelity(target, message)
        out.append((message, report))
    return out
