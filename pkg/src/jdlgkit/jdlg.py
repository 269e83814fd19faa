"""Reversible/stable splitting A = A_r + A_s of a contractive map.

``jdlg_split`` builds the projection P from an ordered Schur form
(peripheral eigenvalues first) and checks it against the metric of the
invariant state. ``averaging_projection_oracle`` reaches the same P
through twisted Cesaro means of the powers of T and never touches an
eigensolver; the two routes are compared in the test suite.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from . import kernels
from ._linalg import canonical_order, cluster, detect_order, numerical_rank, op_norm, spectral_projection
from .algebra import AlgebraElement, NormalState, StateFamily
from .channel import ChannelMap, SemigroupSpec
from .config import DEFAULT, Tolerances
from .errors import HypothesisError, InternalInconsistencyError, JdlgError, NotFaithfulError
from .gns import _as_family, verify_hypothesis


class NearPeripheralWarning(UserWarning):
    """An eigenvalue sits just inside the peripheral threshold band."""


@dataclass
class SpectralData:
    eigenvalues: np.ndarray
    eigenvectors: list
    peripheral: list
    stable_radius: float
    peripheral_values: list
    multiplicities: list
    geometric_multiplicities: list
    defects: list = field(default_factory=list)
    near_peripheral: list = field(default_factory=list)

    @property
    def peripheral_eigenvalues(self) -> np.ndarray:
        return self.eigenvalues[self.peripheral]


def eigendecompose(T: ChannelMap, tol: Tolerances = DEFAULT) -> SpectralData:
    """Full eigendecomposition with peripheral tagging and Jordan-defect detection."""
    S = T.superoperator
    try:
        w, V = np.linalg.eig(S)
    except np.linalg.LinAlgError as exc:
        raise JdlgError(f"eigensolver failed (condition estimate {np.linalg.cond(S):.3e}): {exc}") from exc
    order = canonical_order(w)
    w, V = w[order], V[:, order]
    mod = np.abs(w)
    per = [i for i in range(len(w)) if mod[i] >= 1 - tol.peripheral]
    near = [complex(w[i]) for i in range(len(w)) if 1 - tol.near_peripheral < mod[i] < 1 - tol.peripheral]
    if near:
        warnings.warn(f"eigenvalues close to the unit circle: {near}", NearPeripheralWarning, stacklevel=2)
    rest = [mod[i] for i in range(len(w)) if i not in set(per)]
    r = float(max(rest)) if rest else 0.0
    if r < tol.zero_spectrum:
        r = 0.0
    values, mults, geo, defects = [], [], [], []
    I = np.eye(len(w))
    for g in cluster(w[per], tol.cluster):
        lam = complex(np.mean(w[per][g]))
        A = S - lam * I
        r1 = numerical_rank(A)
        r2 = numerical_rank(A @ A)
        values.append(lam)
        mults.append(len(g))
        geo.append(len(w) - r1)
        if r2 < r1:
            defects.append(lam)
    vecs = [T.algebra.from_vector(V[:, i]) for i in range(len(w))]
    return SpectralData(w, vecs, per, r, values, mults, geo, defects, near)


@dataclass
class JdlgSplit:
    """P, phi-orthonormal bases of ran P and ker P, and the metric they live in."""

    channel: ChannelMap
    state: NormalState
    family: StateFamily
    P: np.ndarray
    basis_r: np.ndarray
    eigenvalues_r: np.ndarray
    basis_s: np.ndarray
    stable_radius: float
    spectral: SpectralData | None
    method: str = "eigendecomposition"
    h: int | None = None
    symmetrization_shift: float = 0.0
    diagnostics: dict = field(default_factory=dict)

    @property
    def dim_r(self) -> int:
        return self.basis_r.shape[1]

    @property
    def dim_s(self) -> int:
        return self.basis_s.shape[1]

    @property
    def algebra(self):
        return self.channel.algebra

    def r_elements(self) -> list:
        return [self.algebra.from_vector(c) for c in self.basis_r.T]

    def s_elements(self) -> list:
        return [self.algebra.from_vector(c) for c in self.basis_s.T]

    def project(self, x: AlgebraElement) -> AlgebraElement:
        return self.algebra.from_vector(self.P @ x.vector)

    def phi_norm(self, A: np.ndarray) -> float:
        """Operator norm of a superoperator in the phi-metric."""
        L = self.state.sqrt_metric()
        Li = self.state.sqrt_metric(inverse=True)
        return op_norm(L @ A @ Li)

    def elem_norm(self, v: np.ndarray) -> float:
        return float(np.linalg.norm(self.state.sqrt_metric() @ v))


def _metric_state(family: StateFamily) -> NormalState:
    phi = family.states[0] if len(family) == 1 else family.mean_state()
    if not phi.faithful:
        raise NotFaithfulError(
            "the splitting needs a faithful state or a jointly faithful family; "
            "compress to the support with gns.support_projection first"
        )
    return phi


def _split_from_gns_projection(T, phi, family, Pg, M, spectral, tol, method, shift):
    """Build a JdlgSplit from a projection given in GNS coordinates."""
    L = phi.sqrt_metric()
    Li = phi.sqrt_metric(inverse=True)
    Ph = (Pg + Pg.conj().T) / 2
    vals, U = np.linalg.eigh(Ph)
    k = int(np.sum(vals > 0.5))
    U_s, U_r = U[:, : len(vals) - k], U[:, len(vals) - k:]
    eig_r = np.zeros(0, dtype=complex)
    if k:
        Mr = U_r.conj().T @ M @ U_r
        R, W = sla.schur(Mr, output="complex")
        eig_r = np.diag(R).copy()
        U_r = U_r @ W
        order = canonical_order(eig_r)
        eig_r, U_r = eig_r[order], U_r[:, order]
        off = np.linalg.norm(R - np.diag(np.diag(R)))
        sv = np.linalg.svd(Mr, compute_uv=False)
        diag = {
            "restriction_nonnormality": float(off),
            "restriction_condition": float(sv[0] / sv[-1]) if sv[-1] > 0 else float("inf"),
            "restriction_min_modulus": float(np.min(np.abs(eig_r))),
        }
        if np.min(np.abs(eig_r)) < 1 - tol.peripheral:
            raise InternalInconsistencyError(f"T restricted to ran P has a non-unimodular eigenvalue {eig_r}")
    else:
        diag = {"restriction_nonnormality": 0.0, "restriction_condition": 1.0, "restriction_min_modulus": 1.0}
    P = Li @ (U_r @ U_r.conj().T) @ L
    r = spectral.stable_radius if spectral is not None else 0.0
    return JdlgSplit(T, phi, family, P, Li @ U_r, eig_r, Li @ U_s, r, spectral, method,
                     symmetrization_shift=shift, diagnostics=diag)


def jdlg_split(T: ChannelMap, states, tol: Tolerances = DEFAULT) -> JdlgSplit:
    """Projection onto the span of peripheral eigenvectors, phi-orthogonal.

    Refuses maps that fail the contraction hypothesis for any state of the
    family; the metric is the state itself or the mean of the family.
    """
    family = _as_family(states)
    hyp = verify_hypothesis(T, family, tol.hypothesis)
    if not hyp.passed:
        raise HypothesisError("; ".join(hyp.messages) or "contraction hypothesis fails", hyp)
    phi = _metric_state(family)
    spectral = eigendecompose(T, tol)
    if spectral.defects:
        raise InternalInconsistencyError(
            f"peripheral eigenvalues {spectral.defects} carry Jordan blocks although the map is a contraction"
        )
    S = T.superoperator
    P_obl, k = spectral_projection(S, lambda z: abs(z) >= 1 - tol.peripheral)
    if k != len(spectral.peripheral):
        raise InternalInconsistencyError(f"Schur form selects {k} peripheral eigenvalues, eigensolver {len(spectral.peripheral)}")
    L = phi.sqrt_metric()
    Li = phi.sqrt_metric(inverse=True)
    Pg = L @ P_obl @ Li
    shift = op_norm(Pg - Pg.conj().T) / 2
    if shift > tol.symmetrize:
        raise InternalInconsistencyError(
            f"spectral projection is not phi-self-adjoint (asymmetry {shift:.3e} > {tol.symmetrize:.1e})"
        )
    split = _split_from_gns_projection(T, phi, family, Pg, L @ S @ Li, spectral, tol, "eigendecomposition", shift)
    split.h = detect_order(spectral.peripheral_values, tol.root_match, tol.max_order)
    return split


def jdlg_split_semigroup(spec: SemigroupSpec, states, tol: Tolerances = DEFAULT) -> JdlgSplit:
    """Splitting for a commuting family: the product of the generators' projections."""
    family = _as_family(states)
    phi = _metric_state(family)
    L = phi.sqrt_metric()
    Li = phi.sqrt_metric(inverse=True)
    Pg = np.eye(spec.algebra.dim, dtype=complex)
    for g in spec.generators:
        Pg = Pg @ (L @ jdlg_split(g, family, tol).P @ Li)
    radii = [eigendecompose(g, tol).stable_radius for g in spec.generators]
    T0 = spec.generators[0]
    split = _split_from_gns_projection(T0, phi, family, Pg, L @ T0.superoperator @ Li, None, tol, "semigroup-product", 0.0)
    split.stable_radius = max(radii)
    return split


def _check_unimodular(lam):
    lam = complex(lam)
    if abs(abs(lam) - 1) > 1e-12:
        raise ValueError(f"twist {lam} is not unimodular within 1e-12")
    return lam


def averaging_projection_oracle(T: ChannelMap, lam, n_iter: int, burn_in: int = 0) -> np.ndarray:
    """(1/N) sum_{n=M}^{M+N-1} conj(lam)^n T^n with N = n_iter, M = burn_in."""
    return oracle_projection(T, [lam], n_iter, burn_in)


def oracle_projection(T: ChannelMap, lambdas, n_iter: int, burn_in: int = 0, separate: bool = False):
    """Sum over ``lambdas`` of the twisted Cesaro means; one pass over the powers."""
    lambdas = [_check_unimodular(l) for l in lambdas]
    S = T.superoperator
    n = np.arange(burn_in, burn_in + n_iter)
    W = np.array([np.exp(-1j * np.angle(l) * n) for l in lambdas]).reshape(len(lambdas), n_iter) / n_iter
    start = np.linalg.matrix_power(S, burn_in) if burn_in else np.eye(len(S), dtype=complex)
    acc = kernels.weighted_power_sum(S, start, W)
    return acc if separate else acc.sum(axis=0)


def settle_index(T: ChannelMap, period: int = 1, tol: float = 1e-14, cap: int = 1 << 20) -> int:
    """Smallest tested M (a multiple of ``period``, doubling) with ||T^(M+period) - T^M|| <= tol."""
    S = T.superoperator
    Th = np.linalg.matrix_power(S, period)
    M, TM = period, Th.copy()
    while M <= cap:
        if np.linalg.norm(TM @ Th - TM) <= tol * max(1.0, np.linalg.norm(TM)):
            return M
        TM = TM @ TM
        M *= 2
    raise JdlgError(f"powers of T did not settle on a period-{period} orbit within {cap} steps")


def mean_ergodic_projection(T: ChannelMap, n_iter: int) -> np.ndarray:
    """Cesaro mean (1/N) sum_{n<N} T^n."""
    return oracle_projection(T, [1.0], n_iter)


def fixed_space_projection(T: ChannelMap, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Riesz projection onto the eigenvalue-1 eigenspace (limit of the Cesaro means)."""
    P, _ = spectral_projection(T.superoperator, lambda z: abs(z - 1) <= tol.cluster)
    return P


@dataclass
class IsometryDiagnostic:
    passed: bool
    defect: float
    margin: float
    polarized_residual: float
    powers: int


def isometry_check(x: AlgebraElement, T: ChannelMap, states, tol: float = 1e-8, powers: int = 1,
                   samples: int = 8, seed: int = 0) -> IsometryDiagnostic:
    """Is phi((T^n x)^*(T^n x)) = phi(x^*x) for n = 1..powers and every phi?

    Also compares phi((T^n x)^*(T^n y)) with phi(x^*y) for random y.
    ``margin`` is the largest relative loss of norm over the tested powers.
    """
    family = _as_family(states)
    alg = T.algebra
    rng = np.random.default_rng(seed)
    ys = [alg.random_element(rng) for _ in range(samples)]
    orbit_x = kernels.power_orbit(T.superoperator, x.vector[:, None], powers)[:, :, 0]
    ymat = np.column_stack([y.vector for y in ys]) if ys else np.zeros((alg.dim, 0))
    orbit_y = kernels.power_orbit(T.superoperator, ymat, powers)
    scale = x.fro() ** 2
    defect = margin = pol = 0.0
    ok = True
    for phi in family:
        G = phi.metric()
        nx = (x.vector.conj() @ G @ x.vector).real
        for n in range(1, powers + 1):
            tx = orbit_x[n]
            ntx = (tx.conj() @ G @ tx).real
            diff = abs(ntx - nx)
            rel = diff / nx if nx > 0 else (0.0 if diff <= 1e-14 * max(scale, 1e-300) else float("inf"))
            defect = max(defect, rel)
            if nx > 0:
                margin = max(margin, (nx - ntx) / nx)
            if diff > tol * nx + 1e-14 * scale:
                ok = False
            for j in range(len(ys)):
                yv = ymat[:, j]
                ny = (yv.conj() @ G @ yv).real
                lhs = orbit_y[n][:, j].conj() @ G @ tx
                rhs = yv.conj() @ G @ x.vector
                denom = math.sqrt(max(nx, 0.0) * max(ny, 0.0))
                r = abs(lhs - rhs) / denom if denom > 0 else abs(lhs - rhs)
                pol = max(pol, r)
    if pol > tol:
        ok = False
    if scale == 0:
        ok, defect, margin, pol = True, 0.0, 0.0, 0.0
    return IsometryDiagnostic(ok, float(defect), float(margin), float(pol), powers)


@dataclass
class KernelDiagnostic:
    projection_norm: float
    orbit_norms: np.ndarray
    min_orbit_norm: float
    rate: float
    stable: bool


def _geometric_rate(values, floor):
    v = np.asarray(values, dtype=float)
    idx = np.nonzero(v > floor)[0]
    if idx.size == 0:
        return 0.0
    last = idx[-1]
    if last + 1 < len(v):  # hit the floor: decays to zero
        lo = last // 2
    else:
        lo = len(v) // 2
    n = np.arange(lo, last + 1)
    if n.size < 2:
        return 0.0
    slope = np.polyfit(n, np.log(v[lo:last + 1]), 1)[0]
    return float(np.exp(slope))


def kernel_membership(x: AlgebraElement, split: JdlgSplit, T: ChannelMap | None = None,
                      tol: float = 1e-8, n_max: int = 256) -> KernelDiagnostic:
    """||Px||_phi and the decay of ||T^n x||_phi certifying x in A_s."""
    T = split.channel if T is None else T
    L = split.state.sqrt_metric()
    xn = float(np.linalg.norm(L @ x.vector))
    pn = float(np.linalg.norm(L @ split.P @ x.vector))
    if xn == 0:
        return KernelDiagnostic(0.0, np.zeros(n_max + 1), 0.0, 0.0, True)
    orbit = kernels.power_orbit(T.superoperator, x.vector[:, None], n_max)[:, :, 0]
    norms = np.linalg.norm(orbit @ L.T, axis=1)
    rate = _geometric_rate(norms, 1e-13 * xn)
    mn = float(norms.min())
    stable = pn <= tol * xn and (mn <= tol * xn or rate < 1 - 1e-6)
    return KernelDiagnostic(pn, norms, mn, rate, stable)
