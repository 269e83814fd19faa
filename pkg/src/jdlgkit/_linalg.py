"""Small dense linear-algebra helpers."""

import numpy as np
import scipy.linalg as sla
from scipy.optimize import linear_sum_assignment


def spectral_projection(A, select):
    """Riesz projection of A onto the eigenvalues picked by ``select``.

    Uses an ordered complex Schur form and one Sylvester solve, so it stays
    well defined when the unselected part is defective.
    Returns (projection, number of selected eigenvalues).
    """
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    R, Z, k = sla.schur(A, output="complex", sort=select)
    if k == 0:
        return np.zeros_like(A), 0
    if k == n:
        return np.eye(n, dtype=complex), n
    R11, R12, R22 = R[:k, :k], R[:k, k:], R[k:, k:]
    Y = sla.solve_sylvester(R11, -R22, -R12)
    block = np.zeros_like(A)
    block[:k, :k] = np.eye(k)
    block[:k, k:] = -Y
    return Z @ block @ Z.conj().T, k


def numerical_rank(A, rtol=1e-8):
    s = np.linalg.svd(np.atleast_2d(A), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rtol * max(1.0, s[0])))


def match_multisets(a, b):
    """Optimal bipartite matching between two complex multisets.

    Returns (pairs, max distance); the distance is inf when sizes differ.
    """
    a = np.asarray(a, dtype=complex).reshape(-1)
    b = np.asarray(b, dtype=complex).reshape(-1)
    if a.size != b.size:
        return [], float("inf")
    if a.size == 0:
        return [], 0.0
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return list(zip(rows.tolist(), cols.tolist())), float(cost[rows, cols].max())


def canonical_order(values, decimals=9):
    """Indices sorting by descending modulus, ties by phase in [0, 2*pi).

    Modulus and phase are compared after rounding; exact modulus, real and
    imaginary parts break the remaining ties so the order is a function of
    the multiset alone.
    """
    values = np.asarray(values, dtype=complex)
    mod = np.round(np.abs(values), decimals)
    phase = np.mod(np.angle(values), 2 * np.pi)
    phase = np.where(phase > 2 * np.pi - 10.0 ** -decimals, 0.0, phase)
    phase = np.where(mod == 0, 0.0, np.round(phase, decimals))
    return np.lexsort((values.imag, values.real, -np.abs(values), phase, -mod))


def cluster(values, tol):
    """Group nearby complex values; returns a list of index lists."""
    values = np.asarray(values, dtype=complex)
    groups = []
    for i, v in enumerate(values):
        for g in groups:
            if abs(values[g[0]] - v) <= tol:
                g.append(i)
                break
        else:
            groups.append([i])
    return groups


def op_norm(A):
    return float(np.linalg.norm(A, 2)) if A.size else 0.0


def detect_order(values, tol: float = 1e-8, max_order: int = 64) -> int | None:
    """Smallest h <= max_order with every value within tol of an h-th root of unity."""
    values = np.asarray(values, dtype=complex)
    if values.size == 0:
        return None
    for h in range(1, max_order + 1):
        k = np.round(np.angle(values) * h / (2 * np.pi))
        if np.all(np.abs(values - np.exp(2j * np.pi * k / h)) <= tol):
            return h
    return None
