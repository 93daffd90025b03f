"""Qudit states as weighted pure-state ensembles, with deletion/insertion channels and measurement.

A density operator is stored as ``sum_k w_k |phi_k><phi_k|``: a weight vector
plus a stack of normalized amplitude vectors.  Site 1 is the most significant
tensor factor, and per-site dimensions may differ.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from math import prod

import numpy as np

NORM_TOL = 1e-9
DROP_TOL = 1e-12


def _check_dims(dims: Iterable[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise ValueError(f"site dimensions must be positive, got {dims}")
    return dims


@dataclass(frozen=True, eq=False)
class PureState:
    dims: tuple[int, ...]
    vector: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dims", _check_dims(self.dims))
        vec = np.asarray(self.vector, dtype=complex).reshape(-1)
        if vec.size != prod(self.dims):
            raise ValueError(f"{vec.size} amplitudes for dims {self.dims}")
        if abs(np.vdot(vec, vec).real - 1) > NORM_TOL:
            raise ValueError("state vector is not normalized")
        object.__setattr__(self, "vector", vec)

    @classmethod
    def basis(cls, dims: Sequence[int], digits: Sequence[int]) -> PureState:
        """The computational basis ket ``|digits>``."""
        dims = _check_dims(dims)
        if len(digits) != len(dims):
            raise ValueError("one digit per site required")
        vec = np.zeros(prod(dims), dtype=complex)
        vec[np.ravel_multi_index(tuple(digits), dims) if dims else 0] = 1
        return cls(dims, vec)

    @classmethod
    def from_amplitudes(cls, dims: Sequence[int], amplitudes) -> PureState:
        """Normalize ``amplitudes`` and wrap them."""
        vec = np.asarray(amplitudes, dtype=complex).reshape(-1)
        return cls(dims, vec / np.linalg.norm(vec))

    @classmethod
    def random(cls, dims: Sequence[int], rng) -> PureState:
        """Haar-random pure state drawn from ``np.random.default_rng(rng)``."""
        rng = np.random.default_rng(rng)
        d = prod(_check_dims(dims))
        return cls.from_amplitudes(dims, rng.normal(size=d) + 1j * rng.normal(size=d))

    @property
    def nsites(self) -> int:
        return len(self.dims)


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Convex mixture of pure states on sites of dimensions ``dims``.

    ``weights`` has shape (K,) and ``vectors`` has shape (K, prod(dims)).
    """

    dims: tuple[int, ...]
    weights: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dims", _check_dims(self.dims))
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        v = np.asarray(self.vectors, dtype=complex).reshape(len(w), -1)
        if v.shape[1] != prod(self.dims):
            raise ValueError(f"vectors of length {v.shape[1]} for dims {self.dims}")
        if len(w) == 0:
            raise ValueError("ensemble has no components")
        if np.any(w <= 0) or abs(w.sum() - 1) > NORM_TOL:
            raise ValueError("weights must be positive and sum to 1")
        norms = np.einsum("kd,kd->k", v.conj(), v).real
        if np.any(np.abs(norms - 1) > NORM_TOL):
            raise ValueError("component states are not normalized")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "vectors", v)

    @classmethod
    def pure(cls, state: PureState) -> Ensemble:
        return cls(state.dims, np.ones(1), state.vector[None, :])

    @classmethod
    def mixture(cls, dims: Sequence[int], weights, vectors) -> Ensemble:
        """Build from unnormalized vectors and weights, dropping negligible components."""
        return normalize_mixture(_check_dims(dims), np.asarray(weights, float), np.asarray(vectors, complex))

    @classmethod
    def maximally_mixed(cls, dims: Sequence[int]) -> Ensemble:
        dims = _check_dims(dims)
        d = prod(dims)
        return cls(dims, np.full(d, 1 / d), np.eye(d, dtype=complex))

    @property
    def nsites(self) -> int:
        return len(self.dims)

    @property
    def rank_bound(self) -> int:
        return len(self.weights)

    def trace(self) -> float:
        return float(self.weights.sum())

    def components(self) -> list[tuple[float, PureState]]:
        return [(float(w), PureState(self.dims, v)) for w, v in zip(self.weights, self.vectors)]

    def density_matrix(self) -> np.ndarray:
        """Dense ``rho``; only for small systems."""
        return (self.vectors.T * self.weights) @ self.vectors.conj()

    def tensor(self, other: Ensemble) -> Ensemble:
        w = np.outer(self.weights, other.weights).reshape(-1)
        v = np.einsum("ka,lb->klab", self.vectors, other.vectors).reshape(len(w), -1)
        return Ensemble(self.dims + other.dims, w, v)


def as_ensemble(state: PureState | Ensemble) -> Ensemble:
    return Ensemble.pure(state) if isinstance(state, PureState) else state


def normalize_mixture(dims, weights, vectors) -> Ensemble:
    """Fold vector norms into weights, drop negligible components, rescale to trace 1."""
    norms2 = np.einsum("kd,kd->k", vectors.conj(), vectors).real
    w = weights * norms2
    keep = w > DROP_TOL
    if not np.any(keep):
        raise ValueError("every component has negligible weight")
    w, vectors, norms2 = w[keep], vectors[keep], norms2[keep]
    vectors = vectors / np.sqrt(norms2)[:, None]
    return Ensemble(dims, w / w.sum(), vectors)


def tensor(a: PureState, b: PureState) -> PureState:
    return PureState(a.dims + b.dims, np.kron(a.vector, b.vector))


def _site_axis(dims: tuple[int, ...], site: int) -> int:
    if not 1 <= site <= len(dims):
        raise ValueError(f"site {site} outside [1, {len(dims)}]")
    return site  # axis 0 of the reshaped stack is the component index


def apply_site_operator(state: PureState | Ensemble, site: int, op: np.ndarray) -> Ensemble:
    """Apply ``op`` (shape d_out x d_in) to one site of every component, then renormalize.

    Rectangular operators change that site's dimension, which is how the
    residue embeddings are applied.
    """
    ens = as_ensemble(state)
    op = np.asarray(op, dtype=complex)
    axis = _site_axis(ens.dims, site)
    if op.shape[1] != ens.dims[site - 1]:
        raise ValueError(f"operator acts on dimension {op.shape[1]}, site has {ens.dims[site - 1]}")
    arr = ens.vectors.reshape((len(ens.weights),) + ens.dims)
    out = np.moveaxis(np.tensordot(op, arr, axes=([1], [axis])), 0, axis)
    dims = ens.dims[: site - 1] + (op.shape[0],) + ens.dims[site:]
    return normalize_mixture(dims, ens.weights, out.reshape(len(ens.weights), -1))


def delete_qudits(state: PureState | Ensemble, J: Iterable[int]) -> Ensemble:
    """Trace out the sites ``J``.

    Each component splits into conditional states, one per basis value of the
    traced sites, weighted by its conditional probability.
    """
    ens = as_ensemble(state)
    J = sorted(set(int(j) for j in J))
    for j in J:
        _site_axis(ens.dims, j)
    if len(J) == len(ens.dims):
        raise ValueError("cannot delete every site")
    if not J:
        return ens
    K = len(ens.weights)
    keep = [s for s in range(1, len(ens.dims) + 1) if s not in J]
    arr = ens.vectors.reshape((K,) + ens.dims).transpose([0] + J + keep)
    traced = prod(ens.dims[j - 1] for j in J)
    dims = tuple(ens.dims[s - 1] for s in keep)
    vectors = arr.reshape(K * traced, prod(dims))
    weights = np.repeat(ens.weights, traced)
    return normalize_mixture(dims, weights, vectors)


def index_permute(state: PureState | Ensemble, tau: Sequence[int]) -> Ensemble:
    """Relabel sites so that site ``k`` of the result is site ``tau[k-1]`` of the input."""
    ens = as_ensemble(state)
    tau = [int(s) for s in tau]
    if sorted(tau) != list(range(1, len(ens.dims) + 1)):
        raise ValueError(f"{tau} is not a permutation of 1..{len(ens.dims)}")
    K = len(ens.weights)
    arr = ens.vectors.reshape((K,) + ens.dims).transpose([0] + tau)
    dims = tuple(ens.dims[s - 1] for s in tau)
    return Ensemble(dims, ens.weights, arr.reshape(K, -1))


def inverse_permutation(tau: Sequence[int]) -> list[int]:
    inv = [0] * len(tau)
    for k, s in enumerate(tau, start=1):
        inv[s - 1] = k
    return inv


def insertion_permutation(J: Sequence[int], total: int) -> list[int]:
    """The relabelling that moves the leading ``len(J)`` sites to positions ``J``."""
    J = sorted(J)
    tau = [0] * total
    for k, j in enumerate(J, start=1):
        tau[j - 1] = k
    rest = iter(range(len(J) + 1, total + 1))
    return [s if s else next(rest) for s in tau]


def insert_qudits(state: PureState | Ensemble, J: Iterable[int], sigma: PureState | Ensemble) -> Ensemble:
    """Place ``sigma`` at positions ``J`` of a system that otherwise holds ``state``.

    Deleting ``J`` from the result gives back ``state``.
    """
    ens, sig = as_ensemble(state), as_ensemble(sigma)
    J = sorted(int(j) for j in J)
    total = len(ens.dims) + len(J)
    if len(J) != len(sig.dims) or len(set(J)) != len(J):
        raise ValueError(f"{len(sig.dims)} inserted sites but indices {J}")
    if any(not 1 <= j <= total for j in J):
        raise ValueError(f"insertion indices {J} outside [1, {total}]")
    return index_permute(sig.tensor(ens), insertion_permutation(J, total))


@dataclass(frozen=True, eq=False)
class MeasurementFamily:
    """Projective measurement on one site; outcome ``k`` is ``projectors[k]``."""

    projectors: tuple[np.ndarray, ...]

    def __post_init__(self):
        ps = tuple(np.asarray(p, dtype=complex) for p in self.projectors)
        d = ps[0].shape[0]
        for p in ps:
            if p.shape != (d, d):
                raise ValueError("projectors must be square and of equal size")
            if np.abs(p @ p - p).max() > 1e-10 or np.abs(p - p.conj().T).max() > 1e-10:
                raise ValueError("not an orthogonal projector")
        if np.abs(sum(ps) - np.eye(d)).max() > 1e-10:
            raise ValueError("projectors do not sum to the identity")
        object.__setattr__(self, "projectors", ps)

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]


def mt_family(l: int, t: int) -> MeasurementFamily:
    """Residue-class measurement on dimension ``l*(t+1)``: outcome k keeps levels j*(t+1)+k."""
    if l < 2 or t < 1:
        raise ValueError(f"need l >= 2 and t >= 1, got l={l}, t={t}")
    d = l * (t + 1)
    ps = []
    for k in range(t + 1):
        p = np.zeros((d, d), dtype=complex)
        for j in range(l):
            p[j * (t + 1) + k, j * (t + 1) + k] = 1
        ps.append(p)
    return MeasurementFamily(tuple(ps))


def computational_family(d: int) -> MeasurementFamily:
    return MeasurementFamily(tuple(np.diag(np.eye(d)[k]).astype(complex) for k in range(d)))


def measure_branches(
    state: PureState | Ensemble, site: int, fam: MeasurementFamily, threshold: float = DROP_TOL
) -> list[tuple[int, float, Ensemble]]:
    """Every outcome with probability above ``threshold``, in outcome order."""
    ens = as_ensemble(state)
    axis = _site_axis(ens.dims, site)
    if fam.dim != ens.dims[site - 1]:
        raise ValueError(f"measurement on dimension {fam.dim}, site has {ens.dims[site - 1]}")
    K = len(ens.weights)
    arr = ens.vectors.reshape((K,) + ens.dims)
    out = []
    for k, p in enumerate(fam.projectors):
        proj = np.moveaxis(np.tensordot(p, arr, axes=([1], [axis])), 0, axis).reshape(K, -1)
        norms2 = np.einsum("kd,kd->k", proj.conj(), proj).real
        prob = float(ens.weights @ norms2)
        if prob > threshold:
            out.append((k, prob, normalize_mixture(ens.dims, ens.weights, proj)))
    if not out:
        raise ValueError("no outcome has non-negligible probability")
    return out


def measure_site(
    state: PureState | Ensemble, site: int, fam: MeasurementFamily, rng=None
) -> tuple[int, float, Ensemble]:
    """Sample one outcome by the Born rule.

    ``rng`` is a seed or ``np.random.Generator``; the outcome is found by
    inverse CDF over the branch probabilities in outcome order.
    """
    branches = measure_branches(state, site, fam)
    if len(branches) == 1:
        return branches[0]
    probs = np.array([b[1] for b in branches])
    u = np.random.default_rng(rng).random() * probs.sum()
    idx = min(int(np.searchsorted(np.cumsum(probs), u, side="right")), len(branches) - 1)
    return branches[idx]


def fidelity(target: PureState, state: PureState | Ensemble) -> float:
    """``<target|rho|target>``."""
    ens = as_ensemble(state)
    if target.dims != ens.dims:
        raise ValueError(f"dims differ: {target.dims} vs {ens.dims}")
    overlaps = np.abs(ens.vectors.conj() @ target.vector) ** 2
    return float(min(1.0, max(0.0, ens.weights @ overlaps)))


def hs_distance(a: PureState | Ensemble, b: PureState | Ensemble) -> float:
    """Hilbert-Schmidt distance between the two density operators, without forming them."""
    a, b = as_ensemble(a), as_ensemble(b)
    if a.dims != b.dims:
        raise ValueError(f"dims differ: {a.dims} vs {b.dims}")

    def inner(p: Ensemble, q: Ensemble) -> float:
        g = np.abs(p.vectors.conj() @ q.vectors.T) ** 2
        return float(p.weights @ g @ q.weights)

    return float(np.sqrt(max(0.0, inner(a, a) + inner(b, b) - 2 * inner(a, b))))


def _canonical_order(ens: Ensemble) -> list[int]:
    keys = []
    for k, (w, v) in enumerate(zip(ens.weights, ens.vectors)):
        amps = tuple(x for z in v for x in (round(z.real, 12), round(z.imag, 12)))
        keys.append((-round(float(w), 12), amps, k))
    return [k for *_, k in sorted(keys)]


def ensemble_to_dict(state: PureState | Ensemble) -> dict:
    """JSON-ready dump; components sorted by descending weight, then amplitudes."""
    ens = as_ensemble(state)
    comps = []
    for k in _canonical_order(ens):
        v = ens.vectors[k]
        comps.append({
            "weight": float(ens.weights[k]),
            "amplitudes": [[float(z.real), float(z.imag)] for z in v],
        })
    return {"dims": list(ens.dims), "components": comps}


def ensemble_from_dict(data: dict) -> Ensemble:
    dims = data["dims"]
    weights = [c["weight"] for c in data["components"]]
    vectors = [[complex(re, im) for re, im in c["amplitudes"]] for c in data["components"]]
    return Ensemble.mixture(dims, weights, vectors)


def dumps(state: PureState | Ensemble) -> str:
    return json.dumps(ensemble_to_dict(state), indent=1)
