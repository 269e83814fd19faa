import warnings

import numpy as np
import pytest

from jdlgkit.algebra import BlockAlgebra, NormalState, StateFamily
from jdlgkit.channel import ChannelMap, from_kraus
from jdlgkit.corpus import classical_cycle, dephasing, flip_pinch, random_unital
from jdlgkit.errors import HypothesisError
from jdlgkit.gns import (
    HypothesisWarning, compare_peripheral_spectra, gns_basis, gns_matrix, support_projection, verify_hypothesis,
)
from jdlgkit._linalg import match_multisets

from conftest import X, Y, Z, I2
from test_channel import amplitude_damping


def test_support_faithful():
    phi = NormalState.maximally_mixed(BlockAlgebra([2]))
    s = support_projection(phi)
    assert s.faithful
    assert s.projection.allclose(phi.algebra.unit())


def test_support_pure_state():
    A = BlockAlgebra([2])
    phi = NormalState(A, [np.diag([1.0, 0.0])])
    s = support_projection(phi)
    np.testing.assert_allclose(s.projection.blocks[0], np.diag([1, 0]))
    assert len(s.L_basis) == 2
    for l in s.L_basis:
        assert abs(phi(l.adj() @ l)) < 1e-15
        # L_phi is the second column of matrices
        assert np.allclose(l.blocks[0][:, 0], 0)
    p = s.projection
    assert (p @ p).allclose(p) and p.adj().allclose(p)


def test_support_classical():
    A = BlockAlgebra([1, 1])
    s = support_projection(NormalState(A, [np.ones((1, 1)), np.zeros((1, 1))]))
    assert len(s.L_basis) == 1
    np.testing.assert_allclose(s.L_basis[0].vector, [0, 1])


def test_gns_examples():
    assert np.allclose(gns_matrix(from_kraus([I2]), NormalState.maximally_mixed(BlockAlgebra([2]))).matrix, np.eye(4))
    e = dephasing(0.75)
    paulis = [e.channel.algebra.element([m]) for m in (I2, X, Y, Z)]
    M = gns_matrix(e.channel, e.state, basis=paulis).matrix
    np.testing.assert_allclose(M, np.diag([1, 0.5, 0.5, 1]), atol=1e-15)
    c = classical_cycle(3)
    B = [c.channel.algebra.from_vector(np.sqrt(3) * np.eye(3)[k]) for k in range(3)]
    M = gns_matrix(c.channel, c.state, basis=B).matrix
    np.testing.assert_allclose(M, c.channel.superoperator.T.conj().T, atol=1e-14)
    assert np.allclose(np.abs(M), M) and np.allclose(M.sum(axis=0), 1) and np.allclose(M.sum(axis=1), 1)


def test_gns_is_homomorphism(rng):
    e = random_unital(3, seed=4)
    T = e.channel
    M1 = gns_matrix(T, e.state).matrix
    M2 = gns_matrix(T @ T, e.state).matrix
    np.testing.assert_allclose(M2, M1 @ M1, atol=1e-10)


def test_gns_similarity_for_faithful(corpus):
    for e in corpus:
        w1 = np.linalg.eigvals(e.channel.superoperator)
        w2 = np.linalg.eigvals(gns_matrix(e.channel, e.state).matrix)
        assert match_multisets(w1, w2)[1] <= 1e-9, e.name


def test_nonfaithful_compression():
    T = amplitude_damping(0.3)
    phi = NormalState(T.algebra, [np.diag([1.0, 0.0])])
    op = gns_matrix(T, phi)
    assert op.matrix.shape == (2, 2)
    assert op.norm <= 1 + 1e-12
    basis = gns_basis(phi)
    assert basis[0].allclose(support_projection(phi).projection)


def test_nonfaithful_not_invariant():
    # unitary that rotates the support away leaves L_phi not invariant
    H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    T = from_kraus([H])
    phi = NormalState(T.algebra, [np.diag([1.0, 0.0])])
    with pytest.raises(HypothesisError, match="L_phi"):
        gns_matrix(T, phi)
    assert not verify_hypothesis(T, phi).passed


def test_compression_idempotent():
    phi = NormalState.maximally_mixed(BlockAlgebra([2]))
    assert gns_basis(phi)[0].allclose(phi.algebra.unit())
    s1 = support_projection(phi)
    s2 = support_projection(phi)
    assert s1.projection.allclose(s2.projection)


def test_hypothesis_examples(corpus):
    for e in corpus:
        d = verify_hypothesis(e.channel, e.state)
        assert d.passed and d.max_norm <= 1 + 1e-9, e.name
    phi = NormalState.maximally_mixed(BlockAlgebra([2]))
    assert verify_hypothesis(from_kraus([I2]), phi).norms == pytest.approx([1.0], abs=1e-15)
    d = verify_hypothesis(ChannelMap(phi.algebra, 2 * np.eye(4)), phi)
    assert not d.passed and np.isclose(d.max_norm, 2)


def test_hypothesis_family():
    A = BlockAlgebra([1, 1])
    T = ChannelMap(A, np.array([[0, 1], [1, 0]], dtype=complex))
    fam = StateFamily([NormalState(A, [np.full((1, 1), 0.5)] * 2),
                       NormalState(A, [np.full((1, 1), 0.9), np.full((1, 1), 0.1)])])
    d = verify_hypothesis(T, fam)
    assert not d.passed
    assert d.norms[0] <= 1 + 1e-12 and d.norms[1] > 1


def test_hypothesis_clamp_warning():
    phi = NormalState.maximally_mixed(BlockAlgebra([2]))
    T = ChannelMap(phi.algebra, (1 + 1e-11) * np.eye(4))
    with pytest.warns(HypothesisWarning):
        d = verify_hypothesis(T, phi, tol=1e-9)
    assert d.passed


@pytest.mark.parametrize("entry, expected", [
    (dephasing(), [1, 1]),
    (classical_cycle(3), list(np.exp(2j * np.pi * np.arange(3) / 3))),
    (flip_pinch(), [1, -1]),
])
def test_three_way_spectra(entry, expected):
    r = compare_peripheral_spectra(entry.channel, entry.state)
    assert r.coincide
    for s in (r.superoperator, r.preadjoint, r.gns):
        assert match_multisets(s, np.array(expected, dtype=complex))[1] < 1e-9


def test_three_way_refuses_noncontraction():
    phi = NormalState.maximally_mixed(BlockAlgebra([2]))
    with pytest.raises(HypothesisError):
        compare_peripheral_spectra(ChannelMap(phi.algebra, 2 * np.eye(4)), phi)
