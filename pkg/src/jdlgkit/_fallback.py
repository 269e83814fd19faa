"""Pure-numpy versions of the compiled kernels (same contracts)."""

import numpy as np


def power_orbit(T, X0, steps):
    """Return out with out[k] = T^k @ X0 for k = 0..steps."""
    T = np.asarray(T, dtype=complex)
    X0 = np.asarray(X0, dtype=complex)
    if T.shape[0] != T.shape[1] or X0.shape[0] != T.shape[0]:
        raise ValueError("shape mismatch")
    out = np.empty((steps + 1,) + X0.shape, dtype=complex)
    out[0] = X0
    for k in range(steps):
        np.matmul(T, out[k], out=out[k + 1])
    return out


def weighted_power_sum(T, X0, W):
    """Return acc with acc[l] = sum_j W[l, j] * T^j @ X0."""
    T = np.asarray(T, dtype=complex)
    W = np.asarray(W, dtype=complex)
    cur = np.array(X0, dtype=complex)
    if T.shape[0] != T.shape[1] or cur.shape[0] != T.shape[0]:
        raise ValueError("shape mismatch")
    acc = np.zeros((W.shape[0],) + cur.shape, dtype=complex)
    for j in range(W.shape[1]):
        acc += W[:, j, None, None] * cur
        if j + 1 < W.shape[1]:
            cur = T @ cur
    return acc
