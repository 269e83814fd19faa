"""Linear maps on block algebras: superoperators, Kraus and Choi forms.

A ChannelMap acts in the Heisenberg picture, x -> T(x). With Kraus
operators K_j (square matrices on the block-diagonal embedding) it is
x -> sum_j K_j x K_j^*. The Choi matrix of a map on M_n is
C = sum_ij E_ij (x) T(E_ij). The preadjoint is taken with respect to
the Hilbert-Schmidt pairing tr(a^* b), so in coordinates it is the
conjugate transpose of the superoperator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._linalg import numerical_rank, spectral_projection
from .algebra import AlgebraElement, BlockAlgebra, NormalState
from .errors import (
    CommutationError,
    NoInvariantStateError,
    StructuralError,
    UnsupportedRepresentationError,
)


def _embedding(algebra: BlockAlgebra) -> np.ndarray:
    """0/1 matrix taking algebra coordinates to vec of the block-diagonal embedding."""
    D = algebra.hilbert_dim
    E = np.zeros((D * D, algebra.dim))
    pos = 0
    for i, n in enumerate(algebra.block_dims):
        off = algebra.offsets[i]
        for b in range(n):
            for a in range(n):
                E[(pos + a) + (pos + b) * D, off + a + b * n] = 1.0
        pos += n
    return E


class ChannelMap:
    """A linear map on a BlockAlgebra stored as an N x N superoperator."""

    def __init__(self, algebra: BlockAlgebra, superoperator, *, kraus=None, choi=None, name="", provenance=""):
        S = np.array(superoperator, dtype=complex)
        if S.shape != (algebra.dim, algebra.dim):
            raise StructuralError(f"superoperator shape {S.shape} does not match N={algebra.dim}")
        S.setflags(write=False)
        self.algebra = algebra
        self.superoperator = S
        self.kraus = None if kraus is None else tuple(np.array(k, dtype=complex) for k in kraus)
        self.choi = None if choi is None else np.array(choi, dtype=complex)
        self.name = name
        self.provenance = provenance

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def __call__(self, x: AlgebraElement) -> AlgebraElement:
        if x.algebra != self.algebra:
            raise StructuralError("element and map live on different algebras")
        return self.algebra.from_vector(self.superoperator @ x.vector)

    def __matmul__(self, other: ChannelMap) -> ChannelMap:
        """Composition self o other."""
        if other.algebra != self.algebra:
            raise StructuralError("cannot compose maps on different algebras")
        return ChannelMap(self.algebra, self.superoperator @ other.superoperator, name=f"{self.name}*{other.name}")

    def power(self, n: int) -> ChannelMap:
        return ChannelMap(self.algebra, np.linalg.matrix_power(self.superoperator, n), name=f"{self.name}^{n}")

    def scaled(self, c) -> ChannelMap:
        return ChannelMap(self.algebra, c * self.superoperator, name=f"{c}*{self.name}")

    def unital_residual(self) -> float:
        one = self.algebra.unit()
        return (self(one) - one).fro()

    def __repr__(self):
        return f"ChannelMap(name={self.name!r}, block_dims={list(self.algebra.block_dims)})"


def from_superoperator(algebra: BlockAlgebra, S, **meta) -> ChannelMap:
    return ChannelMap(algebra, S, **meta)


def from_kraus(kraus, algebra: BlockAlgebra | None = None, *, name="", tol=1e-10) -> ChannelMap:
    """Map x -> sum_j K_j x K_j^* for square Kraus matrices on the block-diagonal embedding."""
    kraus = [np.atleast_2d(np.asarray(k, dtype=complex)) for k in kraus]
    if not kraus:
        raise StructuralError("at least one Kraus operator is required")
    D = kraus[0].shape[0]
    if any(k.shape != (D, D) for k in kraus):
        raise StructuralError(f"Kraus operators must all be {D}x{D}: {[k.shape for k in kraus]}")
    if algebra is None:
        algebra = BlockAlgebra([D])
    if algebra.hilbert_dim != D:
        raise StructuralError(f"Kraus size {D} does not match algebra embedding size {algebra.hilbert_dim}")
    full = sum(np.kron(k.conj(), k) for k in kraus)
    E = _embedding(algebra)
    image = full @ E
    S = E.T @ image
    leak = np.linalg.norm(image - E @ S)
    if leak > tol * max(1.0, np.linalg.norm(image)):
        raise StructuralError(f"Kraus map does not preserve the block structure (leak {leak:.3e})")
    return ChannelMap(algebra, S, kraus=kraus, name=name, provenance="kraus")


def to_choi(T: ChannelMap) -> np.ndarray:
    """C = sum_ij E_ij (x) T(E_ij) for a map on a single full matrix block."""
    if len(T.algebra.block_dims) != 1:
        raise UnsupportedRepresentationError("Choi matrix is only defined here for a single full matrix block")
    return _pair_choi(T, 0, 0)


def from_choi(C, *, name="") -> ChannelMap:
    C = np.asarray(C, dtype=complex)
    n = int(round(np.sqrt(C.shape[0])))
    if C.shape != (n * n, n * n):
        raise UnsupportedRepresentationError(f"Choi matrix shape {C.shape} is not (n^2, n^2)")
    alg = BlockAlgebra([n])
    S = np.zeros((n * n, n * n), dtype=complex)
    for i in range(n):
        for j in range(n):
            S[:, i + j * n] = C[i * n:(i + 1) * n, j * n:(j + 1) * n].reshape(-1, order="F")
    return ChannelMap(alg, S, choi=C, name=name, provenance="choi")


def _pair_choi(T: ChannelMap, i: int, j: int) -> np.ndarray:
    """Choi matrix of the component map from block j to block i."""
    alg = T.algebra
    ni, nj = alg.block_dims[i], alg.block_dims[j]
    S = T.superoperator[alg.block_slice(i), alg.block_slice(j)]
    C = np.zeros((nj * ni, nj * ni), dtype=complex)
    for a in range(nj):
        for b in range(nj):
            C[a * ni:(a + 1) * ni, b * ni:(b + 1) * ni] = S[:, a + b * nj].reshape((ni, ni), order="F")
    return C


@dataclass
class CPDiagnostic:
    completely_positive: bool
    min_eigenvalue: float
    per_block_pair: dict = field(default_factory=dict)


def is_completely_positive(T: ChannelMap, tol: float = 1e-10) -> CPDiagnostic:
    """Choi test, blockwise for direct sums (T is CP iff every block component is)."""
    k = len(T.algebra.block_dims)
    mins = {}
    for i in range(k):
        for j in range(k):
            C = _pair_choi(T, i, j)
            mins[(i, j)] = float(np.linalg.eigvalsh((C + C.conj().T) / 2)[0])
    lo = min(mins.values())
    return CPDiagnostic(lo >= -tol, lo, mins)


def preadjoint(T: ChannelMap) -> ChannelMap:
    """T_* with tr((T_* rho)^* x) = tr(rho^* T(x))."""
    kraus = None if T.kraus is None else [k.conj().T for k in T.kraus]
    return ChannelMap(T.algebra, T.superoperator.conj().T, kraus=kraus, name=f"{T.name}_*", provenance="preadjoint")


def is_hermiticity_preserving(T: ChannelMap, tol: float = 1e-10) -> bool:
    for e in T.algebra.matrix_units():
        h = e + e.adj()
        y = T(h)
        if (y - y.adj()).fro() > tol * max(1.0, y.fro()):
            return False
    return True


@dataclass
class InvariantState:
    state: NormalState
    fixed_dim: int
    faithful: bool
    residual: float


def find_invariant_state(T: ChannelMap, tol: float = 1e-9) -> InvariantState:
    """A density matrix fixed by the preadjoint.

    The fixed-point projection of T_* is applied to the maximally mixed
    state. Its image dominates every invariant state, so it has maximal
    support among them.
    """
    alg = T.algebra
    A = T.superoperator.conj().T
    E, k = spectral_projection(A, lambda z: abs(z - 1) <= 1e-6)
    if k == 0:
        raise NoInvariantStateError(f"preadjoint of {T.name or 'map'} has no eigenvalue 1")
    fixed_dim = alg.dim - numerical_rank(A - np.eye(alg.dim))
    rho = alg.from_vector(E @ NormalState.maximally_mixed(alg).vector)
    rho = (rho + rho.adj()) * 0.5
    tr = sum(np.trace(b).real for b in rho.blocks)
    if tr <= tol:
        raise NoInvariantStateError("fixed space of the preadjoint contains no state")
    rho = rho / tr
    if rho.min_eigenvalue() < -1e-8:
        raise NoInvariantStateError(f"fixed point is not positive (min eigenvalue {rho.min_eigenvalue():.3e})")
    blocks = []
    for b in rho.blocks:
        w, v = np.linalg.eigh(b)
        blocks.append((v * np.clip(w, 0.0, None)) @ v.conj().T)
    state = NormalState(alg, blocks, normalize=True)
    residual = float(np.linalg.norm(A @ state.vector - state.vector))
    if residual > tol:
        raise NoInvariantStateError(f"invariant-state residual {residual:.3e} exceeds {tol:.1e}")
    return InvariantState(state, fixed_dim, state.faithful, residual)


@dataclass
class InvarianceDiagnostic:
    per_block: list
    residual: float

    def ok(self, tol: float = 1e-9) -> bool:
        return self.residual <= tol


def check_invariance(T: ChannelMap, phi: NormalState) -> InvarianceDiagnostic:
    """||T_* rho_phi - rho_phi|| per block (Frobenius)."""
    alg = T.algebra
    moved = alg.from_vector(T.superoperator.conj().T @ phi.vector)
    per = [float(np.linalg.norm(a - b)) for a, b in zip(moved.blocks, phi.blocks)]
    return InvarianceDiagnostic(per, float(np.sqrt(sum(p * p for p in per))))


def schwarz_defect(T: ChannelMap, x: AlgebraElement) -> AlgebraElement:
    """T(x^* x) - T(x)^* T(x); positive for Schwarz maps."""
    tx = T(x)
    return T(x.adj() @ x) - tx.adj() @ tx


def schwarz_check(T: ChannelMap, samples: int = 100, seed: int = 0) -> float:
    """Smallest eigenvalue of the Schwarz defect over random samples, relative to ||x||^2."""
    rng = np.random.default_rng(seed)
    worst = np.inf
    for _ in range(samples):
        x = T.algebra.random_element(rng)
        worst = min(worst, schwarz_defect(T, x).min_eigenvalue() / x.norm() ** 2)
    return float(worst)


def representation_discrepancy(T: ChannelMap) -> float:
    """Largest disagreement between the stored representations of T."""
    worst = 0.0
    if T.kraus is not None:
        worst = max(worst, float(np.linalg.norm(from_kraus(T.kraus, T.algebra).superoperator - T.superoperator)))
    if T.choi is not None:
        worst = max(worst, float(np.linalg.norm(from_choi(T.choi).superoperator - T.superoperator)))
        worst = max(worst, float(np.linalg.norm(to_choi(T) - T.choi)))
    return worst


class SemigroupSpec:
    """Generators of a commutative semigroup of maps."""

    def __init__(self, generators, tol: float = 1e-10):
        gens = tuple(generators)
        if not gens:
            raise StructuralError("a semigroup needs at least one generator")
        if any(g.algebra != gens[0].algebra for g in gens):
            raise StructuralError("generators must act on one algebra")
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                a, b = gens[i].superoperator, gens[j].superoperator
                c = float(np.linalg.norm(a @ b - b @ a))
                if c >= tol:
                    raise CommutationError(
                        f"generators {i} ({gens[i].name}) and {j} ({gens[j].name}) do not commute: ||[T_i, T_j]|| = {c:.3e}",
                        (i, j),
                    )
        self.generators = gens
        self.commuting = True
        self.algebra = gens[0].algebra
