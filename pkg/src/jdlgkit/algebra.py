"""Finite-dimensional W*-algebras as direct sums of full matrix blocks.

Elements are stored blockwise. The coordinate vector of an element stacks
each block column-major and concatenates the blocks in order; every
superoperator in the package acts on these coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .config import DEFAULT
from .errors import NotFaithfulError, StructuralError, ValidationError


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class BlockAlgebra:
    """The algebra M_{n_1}(C) + ... + M_{n_k}(C)."""

    block_dims: tuple

    def __init__(self, block_dims: Sequence[int]):
        dims = tuple(int(n) for n in block_dims)
        if not dims or any(n < 1 for n in dims):
            raise StructuralError(f"block dimensions must be positive, got {list(block_dims)}")
        object.__setattr__(self, "block_dims", dims)

    @cached_property
    def dim(self) -> int:
        """Coordinate dimension N = sum n_i^2."""
        return sum(n * n for n in self.block_dims)

    @cached_property
    def offsets(self) -> tuple:
        out, pos = [], 0
        for n in self.block_dims:
            out.append(pos)
            pos += n * n
        return tuple(out)

    @property
    def is_commutative(self) -> bool:
        return all(n == 1 for n in self.block_dims)

    @property
    def hilbert_dim(self) -> int:
        """Size of the block-diagonal embedding."""
        return sum(self.block_dims)

    def block_slice(self, i: int) -> slice:
        return slice(self.offsets[i], self.offsets[i] + self.block_dims[i] ** 2)

    def element(self, blocks) -> AlgebraElement:
        return AlgebraElement(self, blocks)

    def unit(self) -> AlgebraElement:
        return AlgebraElement(self, [np.eye(n) for n in self.block_dims])

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, [np.zeros((n, n)) for n in self.block_dims])

    def from_vector(self, v) -> AlgebraElement:
        v = np.asarray(v, dtype=complex).reshape(-1)
        if v.size != self.dim:
            raise StructuralError(f"coordinate vector of length {v.size}, algebra has N={self.dim}")
        return AlgebraElement(
            self,
            [v[self.block_slice(i)].reshape((n, n), order="F") for i, n in enumerate(self.block_dims)],
        )

    def unit_vector(self) -> np.ndarray:
        return self.unit().vector

    def matrix_units(self) -> list:
        """Matrix units E_ab of every block, in coordinate order."""
        return [self.from_vector(e) for e in np.eye(self.dim)]

    def random_element(self, rng: np.random.Generator) -> AlgebraElement:
        blocks = [rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) for n in self.block_dims]
        return AlgebraElement(self, blocks)

    def embed(self, x: AlgebraElement) -> np.ndarray:
        """Block-diagonal matrix of size sum n_i."""
        from scipy.linalg import block_diag

        return block_diag(*x.blocks)

    def from_embedded(self, m, *, check: bool = True, tol: float = 1e-10) -> AlgebraElement:
        """Read the diagonal blocks of a (sum n_i)-square matrix."""
        m = np.asarray(m, dtype=complex)
        D = self.hilbert_dim
        if m.shape != (D, D):
            raise StructuralError(f"expected a {D}x{D} matrix, got {m.shape}")
        blocks, pos = [], 0
        for n in self.block_dims:
            blocks.append(m[pos:pos + n, pos:pos + n])
            pos += n
        x = AlgebraElement(self, blocks)
        if check:
            off = np.linalg.norm(m - self.embed(x))
            if off > tol * max(1.0, np.linalg.norm(m)):
                raise StructuralError(f"matrix leaves the block-diagonal algebra (off-block norm {off:.3e})")
        return x


class AlgebraElement:
    """An element of a BlockAlgebra; immutable."""

    __slots__ = ("algebra", "blocks")

    def __init__(self, algebra: BlockAlgebra, blocks):
        blocks = tuple(_frozen(b) for b in blocks)
        if len(blocks) != len(algebra.block_dims) or any(
            b.shape != (n, n) for b, n in zip(blocks, algebra.block_dims)
        ):
            raise StructuralError(
                f"block shapes {[b.shape for b in blocks]} do not match block_dims {list(algebra.block_dims)}"
            )
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "blocks", blocks)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraElement is immutable")

    def _check(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        if other.algebra != self.algebra:
            raise StructuralError(
                f"elements of different algebras {list(self.algebra.block_dims)} and {list(other.algebra.block_dims)}"
            )
        return other

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([b.reshape(-1, order="F") for b in self.blocks])

    def adj(self) -> AlgebraElement:
        return AlgebraElement(self.algebra, [b.conj().T for b in self.blocks])

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return AlgebraElement(self.algebra, [a + b for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return AlgebraElement(self.algebra, [a - b for a, b in zip(self.blocks, other.blocks)])

    def __neg__(self):
        return AlgebraElement(self.algebra, [-b for b in self.blocks])

    def __mul__(self, c):
        if isinstance(c, AlgebraElement):
            raise TypeError("use @ or mul() for the algebra product")
        return AlgebraElement(self.algebra, [c * b for b in self.blocks])

    __rmul__ = __mul__

    def __truediv__(self, c):
        return AlgebraElement(self.algebra, [b / c for b in self.blocks])

    def __matmul__(self, other):
        return mul(self, other)

    def norm(self) -> float:
        """C*-norm: largest spectral norm over the blocks."""
        return max(np.linalg.norm(b, 2) for b in self.blocks)

    def fro(self) -> float:
        return float(np.sqrt(sum(np.sum(np.abs(b) ** 2) for b in self.blocks)))

    def min_eigenvalue(self) -> float:
        """Smallest eigenvalue of the Hermitian part."""
        return min(np.linalg.eigvalsh((b + b.conj().T) / 2)[0] for b in self.blocks)

    def allclose(self, other, atol=1e-10) -> bool:
        return (self - other).fro() <= atol

    def __repr__(self):
        return f"AlgebraElement(block_dims={list(self.algebra.block_dims)}, blocks={[b.tolist() for b in self.blocks]})"


def mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Blockwise product xy."""
    if x._check(y) is NotImplemented:
        raise StructuralError("mul expects two AlgebraElements")
    return AlgebraElement(x.algebra, [a @ b for a, b in zip(x.blocks, y.blocks)])


class NormalState:
    """phi(x) = sum_i tr(rho_i x_i) for block density matrices rho_i."""

    def __init__(self, algebra: BlockAlgebra, blocks, *, tol=None, normalize: bool = False):
        tol = DEFAULT if tol is None else tol
        blocks = [np.asarray(b, dtype=complex) for b in blocks]
        probe = AlgebraElement(algebra, blocks)  # shape check
        blocks = [(b + b.conj().T) / 2 for b in probe.blocks]
        for i, (b, raw) in enumerate(zip(blocks, probe.blocks)):
            if np.linalg.norm(raw - b) > 1e-10 * max(1.0, np.linalg.norm(raw)):
                raise ValidationError(f"density block {i} is not Hermitian")
        total = sum(np.trace(b).real for b in blocks)
        if normalize:
            if total <= 0:
                raise ValidationError("cannot normalize a state of zero trace")
            blocks = [b / total for b in blocks]
            total = 1.0
        scale = max(np.linalg.eigvalsh(b)[-1] for b in blocks)
        for i, b in enumerate(blocks):
            lo = np.linalg.eigvalsh(b)[0]
            if lo < -1e-10 * max(scale, 1e-300):
                raise ValidationError(f"density block {i} has negative eigenvalue {lo:.3e}")
        if abs(total - 1.0) > 1e-12:
            raise ValidationError(f"state is not normalized: phi(1) = {total!r}")
        self.algebra = algebra
        self.blocks = tuple(_frozen(b) for b in blocks)
        self.tol = tol

    @classmethod
    def maximally_mixed(cls, algebra: BlockAlgebra) -> NormalState:
        D = algebra.hilbert_dim
        return cls(algebra, [np.eye(n) / D for n in algebra.block_dims])

    @classmethod
    def from_vector(cls, algebra, v, **kw) -> NormalState:
        return cls(algebra, algebra.from_vector(v).blocks, **kw)

    @property
    def vector(self) -> np.ndarray:
        return AlgebraElement(self.algebra, self.blocks).vector

    def __call__(self, x: AlgebraElement) -> complex:
        if x.algebra != self.algebra:
            raise StructuralError("state and element live on different algebras")
        return complex(sum(np.trace(r @ b) for r, b in zip(self.blocks, x.blocks)))

    @property
    def faithful(self) -> bool:
        for b in self.blocks:
            w = np.linalg.eigvalsh(b)
            if not w[0] > self.tol.faithful * w[-1] or w[-1] <= 0:
                return False
        return True

    def metric(self) -> np.ndarray:
        """Gram matrix G with <x, y>_phi = vec(y)^H G vec(x)."""
        from scipy.linalg import block_diag

        return block_diag(*[np.kron(r.T, np.eye(len(r))) for r in self.blocks])

    def sqrt_metric(self, inverse: bool = False) -> np.ndarray:
        """G^{1/2} (or G^{-1/2}); maps coordinates to an orthonormal GNS frame."""
        from scipy.linalg import block_diag

        if inverse and not self.faithful:
            raise NotFaithfulError("G^{-1/2} needs a faithful state")
        parts = []
        for r in self.blocks:
            w, v = np.linalg.eigh(r)
            w = np.clip(w, 0.0, None)
            s = (v * (w ** (-0.5 if inverse else 0.5))) @ v.conj().T
            parts.append(np.kron(s.T, np.eye(len(r))))
        return block_diag(*parts)

    def __repr__(self):
        return f"NormalState(block_dims={list(self.algebra.block_dims)}, faithful={self.faithful})"


class StateFamily:
    """A finite family of normal states on one algebra."""

    def __init__(self, states):
        states = tuple(states)
        if not states:
            raise ValidationError("a state family needs at least one state")
        alg = states[0].algebra
        if any(s.algebra != alg for s in states):
            raise StructuralError("states of a family must share the algebra")
        self.states = states
        self.algebra = alg

    def __iter__(self):
        return iter(self.states)

    def __len__(self):
        return len(self.states)

    def mean_state(self) -> NormalState:
        k = len(self.states)
        blocks = [sum(s.blocks[i] for s in self.states) / k for i in range(len(self.algebra.block_dims))]
        return NormalState(self.algebra, blocks, tol=self.states[0].tol)

    @property
    def jointly_faithful(self) -> bool:
        # support of the mean is the supremum of the supports
        return self.mean_state().faithful


def inner_phi(phi: NormalState, x: AlgebraElement, y: AlgebraElement) -> complex:
    """<x, y>_phi = phi(y* x)."""
    return phi(y.adj() @ x)


def _gram_schmidt(cands, G, drop_tol=1e-10):
    out = []
    for v in cands:
        w = v.astype(complex)
        for _ in range(2):
            for q in out:
                w = w - (q.conj() @ G @ w) * q
        nrm2 = (w.conj() @ G @ w).real
        ref = (v.conj() @ G @ v).real
        if nrm2 > drop_tol * max(ref, 1e-300) and nrm2 > 0:
            out.append(w / np.sqrt(nrm2))
    return out


def orthonormal_basis(A: BlockAlgebra, phi: NormalState) -> list:
    """phi-orthonormal basis of A, starting with the unit.

    Raises NotFaithfulError when phi has a kernel; compress with
    ``gns.support_projection`` in that case.
    """
    if phi.algebra != A:
        raise StructuralError("state belongs to a different algebra")
    if not phi.faithful:
        raise NotFaithfulError("phi is not faithful; use gns.support_projection to split off its kernel")
    G = phi.metric()
    cands = [A.unit_vector()] + list(np.eye(A.dim, dtype=complex))
    vecs = _gram_schmidt(cands, G)
    if len(vecs) != A.dim:
        raise NotFaithfulError(f"only {len(vecs)} of {A.dim} basis vectors survived orthonormalisation")
    return [A.from_vector(v) for v in vecs]


def basis_matrix(elements) -> np.ndarray:
    """Stack coordinate vectors of elements as columns."""
    return np.column_stack([e.vector for e in elements])
