"""Asymptotically periodic part S = T o P and convergence of T^n - S^n.

In finite dimension the stable spectrum lies strictly inside the unit
disc, so T^n - S^n -> 0 geometrically along the full sequence, at the
rate of the stable radius.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .channel import ChannelMap
from .jdlg import JdlgSplit, SpectralData, _geometric_rate


def periodic_part(T: ChannelMap, split: JdlgSplit) -> ChannelMap:
    """S = T P; S^n = T^n P for n >= 1 because P commutes with T."""
    return ChannelMap(T.algebra, T.superoperator @ split.P, name=f"{T.name}oP", provenance="periodic part")


def stable_radius(data: SpectralData) -> float:
    """Largest modulus among non-peripheral eigenvalues (0 if there are none)."""
    return data.stable_radius


def periodicity_residual(S: ChannelMap, split: JdlgSplit, h: int) -> float:
    """||S^h P - P|| in the phi-metric."""
    Sh = np.linalg.matrix_power(S.superoperator, h)
    return split.phi_norm(Sh @ split.P - split.P)


@dataclass
class ProbeResult:
    kind: str
    averages: np.ndarray
    slope: float


@dataclass
class ConvergenceReport:
    n: np.ndarray
    distances: np.ndarray
    stable_radius: float
    r_fit: float
    constant: float
    transient: int
    probes: list = field(default_factory=list)


def _loglog_slope(avg, lo):
    n = np.arange(1, len(avg) + 1)
    sel = (n >= lo) & (avg > 0)
    if not np.any(sel):
        return float("-inf")
    if np.count_nonzero(sel) < 2:
        return float("-inf")
    return float(np.polyfit(np.log(n[sel]), np.log(avg[sel]), 1)[0])


def cesaro_absolute_averages(T: ChannelMap, x, psi, n_max: int) -> np.ndarray:
    """a_n = (1/n) sum_{k<n} |<T^k x, psi>| for n = 1..n_max (Hilbert-Schmidt pairing)."""
    orbit = kernels.power_orbit(T.superoperator, np.asarray(x, dtype=complex)[:, None], n_max - 1)[:, :, 0]
    terms = np.abs(orbit @ np.conj(psi))
    return np.cumsum(terms) / np.arange(1, n_max + 1)


def convergence_report(split: JdlgSplit, S: ChannelMap | None = None, n_max: int = 256, probes: int = 8,
                       seed: int = 0) -> ConvergenceReport:
    """||T^n - S^n||_phi for n = 1..n_max, geometric fit, and Cesaro probes.

    Stable probes are A_s basis elements, reversible probes are A_r basis
    elements; each is paired with a seeded random functional and with
    itself.
    """
    if n_max < 16:
        raise ValueError("n_max must be at least 16")
    T = split.channel
    S = periodic_part(T, split) if S is None else S
    L = split.state.sqrt_metric()
    Li = split.state.sqrt_metric(inverse=True)
    I = np.eye(T.dim, dtype=complex)
    To = kernels.power_orbit(L @ T.superoperator @ Li, I, n_max)
    So = kernels.power_orbit(L @ S.superoperator @ Li, I, n_max)
    d = np.linalg.norm(To[1:] - So[1:], ord=2, axis=(1, 2))
    n = np.arange(1, n_max + 1)
    r = split.stable_radius
    scale = max(1.0, float(d.max()) if d.size else 0.0)
    r_fit = _geometric_rate(d, 1e-12 * scale)
    jitter = 1e-12 * scale
    transient = 1
    for i in range(len(d) - 1, 0, -1):
        if d[i] > d[i - 1] + jitter:
            transient = i + 1
            break
    if r > 0:
        above = d > 1e-12 * scale
        C = float(np.max(d[above] / r ** n[above])) if np.any(above) else 0.0
    else:
        C = float(d.max()) if d.size else 0.0

    rng = np.random.default_rng(seed)
    results = []
    for kind, basis in (("stable", split.basis_s), ("reversible", split.basis_r)):
        cols = list(basis.T)
        if kind == "reversible":
            cols = cols[1:] or cols
        for i in range(min(probes, len(cols))):
            x = cols[i]
            for psi in (x, rng.standard_normal(T.dim) + 1j * rng.standard_normal(T.dim)):
                avg = cesaro_absolute_averages(T, x, psi, n_max)
                results.append(ProbeResult(kind, avg, _loglog_slope(avg, n_max // 2)))
    return ConvergenceReport(n, d, r, r_fit, C, transient, results)
