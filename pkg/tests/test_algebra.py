import numpy as np
import pytest

from jdlgkit.algebra import BlockAlgebra, NormalState, StateFamily, basis_matrix, inner_phi, mul, orthonormal_basis
from jdlgkit.errors import NotFaithfulError, StructuralError, ValidationError

from conftest import X, Y, Z, I2


def test_dims_and_offsets():
    A = BlockAlgebra([1, 2, 3])
    assert A.dim == 1 + 4 + 9
    assert A.hilbert_dim == 6
    assert not A.is_commutative
    assert BlockAlgebra([1, 1, 1]).is_commutative


@pytest.mark.parametrize("dims", [[], [0], [2, -1]])
def test_bad_block_dims(dims):
    with pytest.raises(StructuralError):
        BlockAlgebra(dims)


def test_unit_law(rng):
    A = BlockAlgebra([2, 1])
    x = A.random_element(rng)
    assert mul(A.unit(), x).allclose(x)
    assert mul(x, A.unit()).allclose(x)
    assert A.unit().adj().allclose(A.unit())


def test_pauli_square():
    A = BlockAlgebra([2])
    x = A.element([X])
    assert mul(x, x).allclose(A.unit())


def test_blockwise_product_matches_embedding(rng):
    A = BlockAlgebra([1, 2])
    x, y = A.random_element(rng), A.random_element(rng)
    flat = A.embed(x) @ A.embed(y)
    assert flat.shape == (3, 3)
    np.testing.assert_allclose(A.embed(mul(x, y)), flat, atol=1e-14)
    assert A.from_embedded(flat).allclose(mul(x, y))


def test_from_embedded_rejects_off_block():
    A = BlockAlgebra([1, 2])
    m = np.zeros((3, 3))
    m[0, 2] = 1
    with pytest.raises(StructuralError):
        A.from_embedded(m)


def test_shape_mismatch():
    A, B = BlockAlgebra([2]), BlockAlgebra([1, 1])
    with pytest.raises(StructuralError):
        A.element([np.eye(3)])
    with pytest.raises(StructuralError):
        mul(A.unit(), B.unit())


def test_vector_roundtrip_column_major():
    A = BlockAlgebra([2])
    x = A.element([np.array([[1, 2], [3, 4]])])
    np.testing.assert_array_equal(x.vector, [1, 3, 2, 4])
    assert A.from_vector(x.vector).allclose(x)


def test_elements_are_immutable(rng):
    x = BlockAlgebra([2]).random_element(rng)
    with pytest.raises(AttributeError):
        x.blocks = ()
    with pytest.raises(ValueError):
        x.blocks[0][0, 0] = 1


def test_cstar_norm():
    A = BlockAlgebra([1, 2])
    x = A.element([np.array([[3.0]]), np.diag([1.0, -2.0])])
    assert np.isclose(x.norm(), 3.0)


def test_inner_phi_examples(rng):
    A = BlockAlgebra([2])
    phi = NormalState.maximally_mixed(A)
    one = A.unit()
    assert np.isclose(inner_phi(phi, one, one), 1)
    assert abs(inner_phi(phi, A.element([X]), A.element([Z]))) < 1e-15
    for _ in range(100):
        x = A.random_element(rng)
        v = inner_phi(phi, x, x)
        assert v.real >= 0 and abs(v.imag) < 1e-12
        assert np.isclose(v, phi(x.adj() @ x))


def test_state_validation():
    A = BlockAlgebra([2])
    with pytest.raises(ValidationError):
        NormalState(A, [np.diag([1.5, -0.5])])
    with pytest.raises(ValidationError):
        NormalState(A, [np.diag([0.5, 0.6])])
    with pytest.raises(ValidationError):
        NormalState(A, [np.array([[0.5, 1.0], [0.0, 0.5]])])
    s = NormalState(A, [np.diag([2.0, 2.0])], normalize=True)
    assert np.isclose(s(A.unit()), 1)


def test_faithfulness_flag():
    A = BlockAlgebra([2])
    assert not NormalState(A, [np.diag([1.0, 0.0])]).faithful
    eps = 1e-6
    assert NormalState(A, [np.diag([1.0, eps])], normalize=True).faithful
    assert not NormalState(A, [np.diag([1.0, 1e-13])], normalize=True).faithful


def test_joint_faithfulness():
    A = BlockAlgebra([2])
    p0 = NormalState(A, [np.diag([1.0, 0.0])])
    p1 = NormalState(A, [np.diag([0.0, 1.0])])
    assert StateFamily([p0, p1]).jointly_faithful
    assert not StateFamily([p0, p0]).jointly_faithful


def test_orthonormal_basis_scalar():
    A = BlockAlgebra([1])
    b = orthonormal_basis(A, NormalState.maximally_mixed(A))
    assert len(b) == 1 and np.isclose(b[0].vector[0], 1)


def test_pauli_basis_orthonormal():
    A = BlockAlgebra([2])
    phi = NormalState.maximally_mixed(A)
    paulis = [A.element([m]) for m in (I2, X, Y, Z)]
    gram = np.array([[inner_phi(phi, a, b) for b in paulis] for a in paulis])
    np.testing.assert_allclose(gram, np.eye(4), atol=1e-15)


@pytest.mark.parametrize("dims", [[2], [1, 2], [3], [1, 1, 1]])
def test_orthonormal_basis_gram(dims, rng):
    A = BlockAlgebra(dims)
    blocks = []
    for n in dims:
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        blocks.append(g @ g.conj().T + 0.1 * np.eye(n))
    phi = NormalState(A, blocks, normalize=True)
    basis = orthonormal_basis(A, phi)
    assert len(basis) == A.dim
    assert basis[0].allclose(A.unit())
    B = basis_matrix(basis)
    np.testing.assert_allclose(B.conj().T @ phi.metric() @ B, np.eye(A.dim), atol=1e-10)


def test_orthonormal_basis_needs_faithful():
    A = BlockAlgebra([2])
    with pytest.raises(NotFaithfulError, match="support_projection"):
        orthonormal_basis(A, NormalState(A, [np.diag([1.0, 0.0])]))


def test_metric_matches_definition(rng):
    A = BlockAlgebra([1, 2])
    phi = NormalState(A, [np.array([[0.3]]), np.array([[0.4, 0.1j], [-0.1j, 0.3]])])
    x, y = A.random_element(rng), A.random_element(rng)
    assert np.isclose(y.vector.conj() @ phi.metric() @ x.vector, phi(y.adj() @ x))
    L = phi.sqrt_metric()
    np.testing.assert_allclose(L.conj().T @ L, phi.metric(), atol=1e-14)
    np.testing.assert_allclose(phi.sqrt_metric(inverse=True) @ L, np.eye(A.dim), atol=1e-12)
