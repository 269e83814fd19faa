"""phi-metric (GNS) representation of maps, support splitting, hypothesis check.

In finite dimension the GNS space of a state phi is the algebra itself,
compressed to K_phi = A p_phi and equipped with <x, y>_phi = phi(y^* x).
The kernel of the seminorm is L_phi = A p_phi^perp.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from ._linalg import match_multisets, op_norm
from .algebra import AlgebraElement, NormalState, StateFamily, _gram_schmidt, basis_matrix, orthonormal_basis
from .channel import ChannelMap
from .config import DEFAULT
from .errors import HypothesisError, StructuralError


class HypothesisWarning(UserWarning):
    """Contraction norm slightly above 1 was accepted within tolerance."""


@dataclass
class SupportSplit:
    """p_phi and bases of K_phi = A p_phi and L_phi = A p_phi^perp."""

    projection: AlgebraElement
    K_basis: list
    L_basis: list

    @property
    def faithful(self) -> bool:
        return not self.L_basis


@dataclass
class GnsOperator:
    """Matrix of T_phi: K_phi -> K_phi in a phi-orthonormal basis."""

    matrix: np.ndarray
    basis: list
    state: NormalState

    @property
    def norm(self) -> float:
        return op_norm(self.matrix)


def support_projection(phi: NormalState) -> SupportSplit:
    alg = phi.algebra
    scale = max(np.linalg.eigvalsh(b)[-1] for b in phi.blocks)
    cut = phi.tol.rank * scale
    p_blocks, K, L = [], [], []
    for i, (n, rho) in enumerate(zip(alg.block_dims, phi.blocks)):
        w, v = np.linalg.eigh(rho)
        keep = w > cut
        vp, vk = v[:, keep], v[:, ~keep]
        p_blocks.append(vp @ vp.conj().T)
        for cols, target in ((vp, K), (vk, L)):
            for c in range(cols.shape[1]):
                for a in range(n):
                    blocks = [np.zeros((m, m), dtype=complex) for m in alg.block_dims]
                    blocks[i] = np.outer(np.eye(n)[a], cols[:, c].conj())
                    target.append(alg.element(blocks))
    return SupportSplit(alg.element(p_blocks), K, L)


def _check_L_invariance(T: ChannelMap, split: SupportSplit, tol: float) -> float:
    """Largest phi-visible part of T(L_phi); zero iff T leaves L_phi invariant."""
    p = split.projection
    leak = 0.0
    for l in split.L_basis:
        leak = max(leak, (T(l) @ p).fro())
    return leak


def gns_basis(phi: NormalState, split: SupportSplit | None = None) -> list:
    """phi-orthonormal basis of K_phi, starting with p_phi."""
    if phi.faithful:
        return orthonormal_basis(phi.algebra, phi)
    split = split or support_projection(phi)
    G = phi.metric()
    vecs = _gram_schmidt([split.projection.vector] + [k.vector for k in split.K_basis], G)
    return [phi.algebra.from_vector(v) for v in vecs]


def gns_matrix(T: ChannelMap, phi: NormalState, basis=None, tol: float = 1e-10) -> GnsOperator:
    """Matrix entries <T b_j, b_i>_phi of the compressed action x -> T(x) p_phi."""
    if T.algebra != phi.algebra:
        raise StructuralError("map and state live on different algebras")
    if not phi.faithful:
        split = support_projection(phi)
        leak = _check_L_invariance(T, split, tol)
        if leak > tol:
            raise HypothesisError(
                f"T does not leave the kernel L_phi invariant (leak {leak:.3e}); "
                "the contraction inequality fails for some x with phi(x^*x) = 0"
            )
        if basis is None:
            basis = gns_basis(phi, split)
    elif basis is None:
        basis = orthonormal_basis(phi.algebra, phi)
    B = basis_matrix(basis)
    M = B.conj().T @ phi.metric() @ T.superoperator @ B
    return GnsOperator(M, list(basis), phi)


@dataclass
class HypothesisDiagnostic:
    passed: bool
    norms: list
    tol: float
    messages: list = field(default_factory=list)

    @property
    def max_norm(self) -> float:
        return max(self.norms) if self.norms else 0.0


def _as_family(states) -> StateFamily:
    if isinstance(states, StateFamily):
        return states
    if isinstance(states, NormalState):
        return StateFamily([states])
    return StateFamily(states)


def verify_hypothesis(T: ChannelMap, states, tol: float | None = None) -> HypothesisDiagnostic:
    """PASS iff every T_phi is a contraction on the GNS space of phi.

    ||T_phi|| <= 1 is equivalent to phi((Tx)^*(Tx)) <= phi(x^*x) for all x.
    """
    tol = DEFAULT.hypothesis if tol is None else tol
    norms, msgs, ok = [], [], True
    for k, phi in enumerate(_as_family(states)):
        try:
            nrm = gns_matrix(T, phi).norm
        except HypothesisError as exc:
            norms.append(float("inf"))
            msgs.append(f"state {k}: {exc}")
            ok = False
            continue
        norms.append(nrm)
        if nrm > 1 + tol:
            ok = False
            msgs.append(f"state {k}: ||T_phi|| = {nrm:.12g} > 1")
        elif nrm > 1:
            msgs.append(f"state {k}: ||T_phi|| = {nrm:.17g} accepted within tolerance")
            warnings.warn(f"contraction norm {nrm!r} exceeds 1 by less than {tol:g}", HypothesisWarning, stacklevel=2)
    return HypothesisDiagnostic(ok, norms, tol, msgs)


@dataclass
class SpectraComparison:
    superoperator: np.ndarray
    preadjoint: np.ndarray
    gns: np.ndarray
    pairs: dict
    distances: dict
    coincide: bool


def compare_peripheral_spectra(T: ChannelMap, phi: NormalState, tol: float = 1e-9) -> SpectraComparison:
    """Peripheral eigenvalues of T, T_* and T_phi with matching certificates."""
    diag = verify_hypothesis(T, phi)
    if not diag.passed:
        raise HypothesisError("peripheral spectra are only compared under the contraction hypothesis", diag)
    thr = 1 - max(phi.tol.peripheral, tol)

    def per(a):
        w = np.linalg.eigvals(a)
        return np.sort_complex(w[np.abs(w) >= thr])

    s = per(T.superoperator)
    s_pre = per(T.superoperator.conj().T)
    s_gns = per(gns_matrix(T, phi).matrix)
    pairs, dist = {}, {}
    pairs["T-T_*"], dist["T-T_*"] = match_multisets(s, s_pre)
    pairs["T-T_phi"], dist["T-T_phi"] = match_multisets(s, s_gns)
    pairs["T_*-T_phi"], dist["T_*-T_phi"] = match_multisets(s_pre, s_gns)
    return SpectraComparison(s, s_pre, s_gns, pairs, dist, max(dist.values()) <= tol)
