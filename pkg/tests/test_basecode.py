from __future__ import annotations

import itertools
import json

import numpy as np
import pytest

from insdelq import basecode
from insdelq.basecode import (
    CodeIsometry,
    DecodingError,
    builtin_code,
    correct_erasures,
    correct_single_error,
    embed_operator,
    encode,
    error_basis,
    five_qudit_code,
    kl_matrix,
    kl_verify,
    load_code,
    logical_readout,
    paulis_on,
    weight_one_errors,
)
from insdelq.qsim import PureState, apply_site_operator, delete_qudits, fidelity, insert_qudits

CODE = five_qudit_code()
THRESH = 1 - 1e-9


def message(seed):
    return PureState.random((2,), seed)


def test_error_basis_is_orthogonal():
    for l in (2, 3):
        ops = error_basis(l)
        assert len(ops) == l * l
        assert np.allclose(ops[0], np.eye(l))
        gram = np.array([[np.trace(a.conj().T @ b) for b in ops] for a in ops])
        assert np.allclose(gram, l * np.eye(l * l))


def test_stabilizers_fix_the_code():
    x, z = basecode.shift(2), basecode.clock(2)
    for s in range(5):
        g = embed_operator({(s + i) % 5 + 1: op for i, op in enumerate((x, z, z, x))}, 5, 2)
        assert np.allclose(g @ CODE.encoder, CODE.encoder)


def test_isometry_and_kl():
    assert CODE.isometry_defect() < 1e-10
    C, residual = kl_matrix(CODE, weight_one_errors(5, 2))
    assert residual < 1e-10
    # nondegenerate: distinct single-site Paulis map the code to orthogonal spaces
    assert np.allclose(C, np.eye(16), atol=1e-10)


def test_kl_fails_for_some_weight_three_pair():
    """Distance 3: some pair of weight-<=2 errors, i.e. a weight-<=4 product, is detected as logical."""
    assert not kl_verify(CODE, paulis_on([1, 2], 5, 2) + paulis_on([4, 5], 5, 2))
    bad = None
    for sites in itertools.combinations(range(1, 6), 3):
        for choice in itertools.product(error_basis(2)[1:], repeat=3):
            E = embed_operator(dict(zip(sites, choice)), 5, 2)
            block = CODE.encoder.conj().T @ E @ CODE.encoder
            if np.abs(block - block[0, 0] * np.eye(2)).max() > 1e-6:
                bad = sites
                break
        if bad:
            break
    assert bad is not None


@pytest.mark.parametrize("J", list(itertools.combinations(range(1, 6), 2)))
def test_every_double_erasure_recovers(J):
    for seed in range(3):
        mu = message(seed)
        psi = encode(CODE, mu)
        state = insert_qudits(delete_qudits(psi, J), J, PureState.basis((2, 2), (1, 0)))
        assert fidelity(mu, correct_erasures(CODE, state, J)) >= THRESH
        assert fidelity(mu, correct_erasures(CODE, state, J, rng=seed)) >= THRESH


def test_every_single_pauli_recovers():
    mu = message(11)
    psi = encode(CODE, mu)
    for site in range(1, 6):
        for E in error_basis(2):
            out = correct_single_error(CODE, apply_site_operator(psi, site, E))
            assert fidelity(mu, out) >= THRESH


def test_single_site_channel_recovers():
    mu = message(4)
    psi = encode(CODE, mu)
    U = np.linalg.qr(np.random.default_rng(0).normal(size=(2, 2)) + 0j)[0]
    assert fidelity(mu, correct_single_error(CODE, apply_site_operator(psi, 3, U), rng=5)) >= THRESH


def test_two_site_error_is_not_corrected():
    mu = message(8)
    psi = encode(CODE, mu)
    x = basecode.shift(2)
    bad = apply_site_operator(apply_site_operator(psi, 1, x), 2, x)
    assert fidelity(mu, correct_single_error(CODE, bad)) < 0.99


def test_too_many_erasures_rejected():
    psi = encode(CODE, message(0))
    with pytest.raises(DecodingError):
        correct_erasures(CODE, psi, [1, 2, 3])
    with pytest.raises(ValueError):
        correct_erasures(CODE, psi, [6])


def test_logical_readout_and_dims():
    mu = message(2)
    assert fidelity(mu, logical_readout(CODE, encode(CODE, mu))) >= THRESH
    with pytest.raises(ValueError):
        encode(CODE, PureState.basis((3,), (0,)))


def test_serialization_roundtrip(tmp_path):
    path = tmp_path / "code.json"
    path.write_text(json.dumps(CODE.to_dict()))
    back = load_code(path)
    assert np.allclose(back.encoder, CODE.encoder)
    assert (back.erasures, back.errors, back.name) == (2, 1, "five_qudit")
    with pytest.raises(ValueError):
        CodeIsometry(5, 2, 1, np.zeros((4, 2)))
    with pytest.raises(ValueError):
        builtin_code("steane")
