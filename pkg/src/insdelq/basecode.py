"""Base quantum codes as explicit encoding isometries, with error and erasure recovery.

Recovery is built numerically from the Knill-Laflamme matrix of the error set:
diagonalizing ``C_ab`` (from ``V^dag E_a^dag E_b V = C_ab I``) gives error
combinations ``F_k`` whose images ``F_k V`` are mutually orthogonal.  Measuring
which image the state lies in is the syndrome measurement, and
``(F_k V)^dag / sqrt(d_k)`` undoes the error and reads out the logical state in
one step.  For a nondegenerate stabilizer code such as the five-qubit code the
``F_k`` are just the correctable Paulis and this is ordinary syndrome lookup.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .qsim import Ensemble, PureState, as_ensemble, normalize_mixture

KL_TOL = 1e-10
# Probability mass allowed outside every syndrome subspace before input is rejected.
CAPTURE_TOL = 1e-8


class DecodingError(RuntimeError):
    """The received state is outside what the recovery can handle."""


def shift(l: int) -> np.ndarray:
    """Generalized X: ``|j> -> |j+1 mod l>``."""
    return np.roll(np.eye(l, dtype=complex), 1, axis=0)


def clock(l: int) -> np.ndarray:
    """Generalized Z: ``|j> -> w^j |j>``."""
    return np.diag(np.exp(2j * np.pi * np.arange(l) / l))


def error_basis(l: int) -> list[np.ndarray]:
    """The ``l**2`` operators ``X^a Z^b``; the first one is the identity."""
    x, z = shift(l), clock(l)
    return [
        np.linalg.matrix_power(x, a) @ np.linalg.matrix_power(z, b)
        for a in range(l)
        for b in range(l)
    ]


def embed_operator(ops: dict[int, np.ndarray], n: int, l: int) -> np.ndarray:
    """Tensor ``ops`` (keyed by 1-based site) with identities on the other sites."""
    eye = np.eye(l, dtype=complex)
    return reduce(np.kron, [ops.get(s, eye) for s in range(1, n + 1)])


def paulis_on(sites, n: int, l: int) -> list[np.ndarray]:
    """All generalized Pauli products supported on ``sites`` (identity included)."""
    basis = error_basis(l)
    sites = list(sites)
    return [
        embed_operator(dict(zip(sites, choice)), n, l)
        for choice in itertools.product(basis, repeat=len(sites))
    ]


def weight_one_errors(n: int, l: int) -> list[np.ndarray]:
    """Identity plus every non-identity generalized Pauli on a single site."""
    basis = error_basis(l)
    out = [np.eye(l**n, dtype=complex)]
    for s in range(1, n + 1):
        out += [embed_operator({s: e}, n, l) for e in basis[1:]]
    return out


@dataclass(frozen=True, eq=False)
class CodeIsometry:
    """Encoder ``V`` mapping ``k`` logical qudits into ``n0`` physical ones, all of dimension ``l``."""

    n0: int
    l: int
    k: int
    encoder: np.ndarray
    erasures: int = 0
    errors: int = 0
    name: str = "custom"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        V = np.asarray(self.encoder, dtype=complex)
        if V.shape != (self.l**self.n0, self.l**self.k):
            raise ValueError(f"encoder shape {V.shape} does not match n0={self.n0}, l={self.l}, k={self.k}")
        object.__setattr__(self, "encoder", V)

    @property
    def projector(self) -> np.ndarray:
        return self.encoder @ self.encoder.conj().T

    def isometry_defect(self) -> float:
        V = self.encoder
        return float(np.abs(V.conj().T @ V - np.eye(V.shape[1])).max())

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n0": self.n0,
            "l": self.l,
            "k": self.k,
            "erasures": self.erasures,
            "errors": self.errors,
            "encoder": [[[float(z.real), float(z.imag)] for z in row] for row in self.encoder],
        }

    @classmethod
    def from_dict(cls, data: dict) -> CodeIsometry:
        enc = np.array([[complex(re, im) for re, im in row] for row in data["encoder"]])
        return cls(
            n0=data["n0"], l=data["l"], k=data["k"], encoder=enc,
            erasures=data.get("erasures", 0), errors=data.get("errors", 0),
            name=data.get("name", "custom"),
        )


def five_qudit_code() -> CodeIsometry:
    """The [[5,1,3]] perfect code with stabilizers generated by cyclic shifts of XZZXI."""
    x, z = shift(2), clock(2)
    gens = [embed_operator({(s + i) % 5 + 1: op for i, op in enumerate((x, z, z, x))}, 5, 2)
            for s in range(4)]
    proj = reduce(lambda a, b: a @ b, [(np.eye(32) + g) / 2 for g in gens])
    zero = proj[:, 0] / np.linalg.norm(proj[:, 0])
    one = embed_operator({s: x for s in range(1, 6)}, 5, 2) @ zero
    return CodeIsometry(5, 2, 1, np.stack([zero, one], axis=1), erasures=2, errors=1, name="five_qudit")


BUILTIN_CODES = {"five_qudit": five_qudit_code}


def builtin_code(name: str) -> CodeIsometry:
    try:
        return BUILTIN_CODES[name]()
    except KeyError:
        raise ValueError(f"unknown base code {name!r}; known: {sorted(BUILTIN_CODES)}") from None


def load_code(path) -> CodeIsometry:
    with open(path) as fh:
        return CodeIsometry.from_dict(json.load(fh))


def kl_matrix(code: CodeIsometry, errors: list[np.ndarray]) -> tuple[np.ndarray, float]:
    """Return ``(C, residual)`` where ``V^dag E_a^dag E_b V ~ C_ab I``."""
    V = code.encoder
    images = [E @ V for E in errors]
    dk = V.shape[1]
    C = np.zeros((len(errors), len(errors)), dtype=complex)
    residual = 0.0
    eye = np.eye(dk)
    for a, A in enumerate(images):
        for b, B in enumerate(images):
            block = A.conj().T @ B
            C[a, b] = np.trace(block) / dk
            residual = max(residual, float(np.abs(block - C[a, b] * eye).max()))
    return C, residual


def kl_verify(code: CodeIsometry, errors: list[np.ndarray], tol: float = KL_TOL) -> bool:
    """True iff ``P E_a^dag E_b P = c_ab P`` holds for every pair of errors."""
    return kl_matrix(code, errors)[1] < tol


def recovery_kraus(code: CodeIsometry, errors: list[np.ndarray]) -> list[np.ndarray]:
    """Kraus operators (logical <- physical) of the canonical recovery for ``errors``."""
    C, residual = kl_matrix(code, errors)
    if residual > 1e-8:
        raise DecodingError(f"error set violates the Knill-Laflamme conditions (residual {residual:.2e})")
    d, U = np.linalg.eigh(C)
    V = code.encoder
    kraus = []
    for idx in np.flatnonzero(d > KL_TOL):
        F = sum(U[a, idx] * E for a, E in enumerate(errors))
        kraus.append((F @ V).conj().T / np.sqrt(d[idx]))
    return kraus


def _recover(ens: Ensemble, kraus: list[np.ndarray], logical_dims: tuple[int, ...], rng) -> Ensemble:
    branches = [ens.vectors @ R.T for R in kraus]
    probs = np.array([ens.weights @ np.einsum("kd,kd->k", b.conj(), b).real for b in branches])
    if probs.sum() < 1 - CAPTURE_TOL:
        raise DecodingError(f"syndrome outside the correctable set (captured weight {probs.sum():.3e})")
    if rng is None:
        return normalize_mixture(logical_dims, np.tile(ens.weights, len(branches)), np.concatenate(branches))
    gen = np.random.default_rng(rng)
    idx = min(int(np.searchsorted(np.cumsum(probs), gen.random() * probs.sum(), side="right")),
              len(branches) - 1)
    return normalize_mixture(logical_dims, ens.weights, branches[idx])


def _logical_dims(code: CodeIsometry) -> tuple[int, ...]:
    return (code.l,) * code.k


def _check_physical(code: CodeIsometry, ens: Ensemble) -> None:
    if ens.dims != (code.l,) * code.n0:
        raise ValueError(f"state dims {ens.dims} do not match code ({code.n0} sites of dim {code.l})")


def encode(code: CodeIsometry, message: PureState) -> PureState:
    if message.dims != _logical_dims(code):
        raise ValueError(f"message dims {message.dims} do not match {_logical_dims(code)}")
    return PureState((code.l,) * code.n0, code.encoder @ message.vector)


def correct_single_error(code: CodeIsometry, state: PureState | Ensemble, rng=None) -> Ensemble:
    """Undo an arbitrary channel on at most one site and return the logical state.

    With ``rng=None`` the recovery channel is applied as a whole; otherwise one
    syndrome outcome is sampled.
    """
    ens = as_ensemble(state)
    _check_physical(code, ens)
    if code.errors < 1:
        raise DecodingError(f"code {code.name} does not correct single-site errors")
    if "single" not in code._cache:
        code._cache["single"] = recovery_kraus(code, weight_one_errors(code.n0, code.l))
    return _recover(ens, code._cache["single"], _logical_dims(code), rng)


def correct_erasures(code: CodeIsometry, state: PureState | Ensemble, J, rng=None) -> Ensemble:
    """Recover the logical state when the sites ``J`` were lost and re-initialized."""
    ens = as_ensemble(state)
    _check_physical(code, ens)
    J = tuple(sorted(set(int(j) for j in J)))
    if len(J) > code.erasures:
        raise DecodingError(f"{len(J)} erasures exceed capability {code.erasures} of {code.name}")
    if any(not 1 <= j <= code.n0 for j in J):
        raise ValueError(f"erasure positions {J} outside [1, {code.n0}]")
    key = ("erasure", J)
    if key not in code._cache:
        code._cache[key] = recovery_kraus(code, paulis_on(J, code.n0, code.l))
    return _recover(ens, code._cache[key], _logical_dims(code), rng)


def logical_readout(code: CodeIsometry, state: PureState | Ensemble) -> Ensemble:
    """Project onto the code space and map back to logical qudits (error-free decode)."""
    ens = as_ensemble(state)
    _check_physical(code, ens)
    return _recover(ens, [code.encoder.conj().T], _logical_dims(code), None)

