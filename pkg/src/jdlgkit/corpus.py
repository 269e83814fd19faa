"""Deterministic test channels with independently derived ground truth."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .algebra import BlockAlgebra, NormalState
from .channel import ChannelMap, from_kraus
from ._linalg import detect_order, numerical_rank

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass
class CorpusEntry:
    name: str
    channel: ChannelMap
    state: NormalState
    expected: dict
    seed: int | None = None
    params: dict = field(default_factory=dict)
    provenance: str = ""


def reported_order(distinct, ergodic):
    """Period as reported: absent for non-ergodic maps whose peripheral set is {1}."""
    h = detect_order(distinct)
    return None if (h == 1 and not ergodic) else h


def _expected(spectrum, ergodic, peripheral_tol=1e-8):
    """Ground truth from an analytically known spectrum (multiset)."""
    spectrum = np.asarray(spectrum, dtype=complex)
    per = spectrum[np.abs(spectrum) >= 1 - peripheral_tol]
    rest = np.abs(spectrum[np.abs(spectrum) < 1 - peripheral_tol])
    r = float(rest.max()) if rest.size else 0.0
    distinct = []
    for v in per:
        if all(abs(v - d) > 1e-6 for d in distinct):
            distinct.append(v)
    return {
        "peripheral": [complex(v) for v in per],
        "h": reported_order(distinct, ergodic),
        "dim_r": int(per.size),
        "ergodic": bool(ergodic),
        "stable_radius": r if r > 1e-10 else 0.0,
    }


def _mixing_block(m, rng):
    """Strictly positive doubly stochastic m x m matrix (uniform averaging if rng is None)."""
    J = np.full((m, m), 1.0 / m)
    if rng is None or m == 1:
        return J
    w = rng.dirichlet(np.ones(m))
    perms = sum(wk * np.eye(m)[rng.permutation(m)] for wk in w)
    return 0.5 * J + 0.5 * perms


def classical_cycle(h: int = 3, mixing_block_sizes=(), seed: int | None = None) -> CorpusEntry:
    """Stochastic matrix h-cycle (+) doubly stochastic mixing blocks on C^n.

    With ``seed`` None the mixing blocks are uniform averaging matrices
    (stable radius 0); otherwise they are random strictly positive
    doubly stochastic matrices.
    """
    if h < 1:
        raise ValueError("h must be >= 1")
    rng = None if seed is None else np.random.default_rng(seed)
    cyc = np.zeros((h, h))
    for i in range(h):
        cyc[i, (i + 1) % h] = 1.0
    blocks = [_mixing_block(int(m), rng) for m in mixing_block_sizes]
    T = sla.block_diag(cyc, *blocks)
    n = T.shape[0]
    alg = BlockAlgebra([1] * n)
    spectrum = list(np.exp(2j * np.pi * np.arange(h) / h))
    for b in blocks:
        w = np.linalg.eigvals(b)
        w = w[np.argsort(-np.abs(w))]
        spectrum += [1.0] + list(w[1:])
    name = f"classical_cycle(h={h}" + (f", mixing={list(mixing_block_sizes)}" if blocks else "") + ")"
    ch = ChannelMap(alg, T.astype(complex), name=name, provenance="stochastic matrix")
    state = NormalState(alg, [np.full((1, 1), 1.0 / n)] * n)
    exp = _expected(spectrum, ergodic=not blocks)
    return CorpusEntry(name, ch, state, exp, seed, {"h": h, "mixing": list(mixing_block_sizes)}, "cycle + blocks")


def identity(n: int = 2) -> CorpusEntry:
    ch = from_kraus([np.eye(n)], name=f"identity(n={n})")
    return CorpusEntry(ch.name, ch, NormalState.maximally_mixed(ch.algebra),
                       _expected(np.ones(n * n), ergodic=(n == 1)), params={"n": n}, provenance="trivial")


def dephasing(p: float = 0.75) -> CorpusEntry:
    """x -> p x + (1-p) Z x Z; Pauli spectrum {1, 1, 2p-1, 2p-1}."""
    ch = from_kraus([np.sqrt(p) * PAULI["I"], np.sqrt(1 - p) * PAULI["Z"]], name=f"dephasing(p={p})")
    q = 2 * p - 1
    return CorpusEntry(ch.name, ch, NormalState.maximally_mixed(ch.algebra),
                       _expected([1, 1, q, q], ergodic=False), params={"p": p}, provenance="Pauli action")


def depolarize_to_mixed() -> CorpusEntry:
    """x -> tr(x)/2 * 1 as the Pauli twirl (1/4) sum_s s x s."""
    ch = from_kraus([s / 2 for s in PAULI.values()], name="depolarize_to_mixed")
    return CorpusEntry(ch.name, ch, NormalState.maximally_mixed(ch.algebra),
                       _expected([1, 0, 0, 0], ergodic=True), provenance="rank-one projection")


def flip_pinch() -> CorpusEntry:
    """x -> D(X x X), D the diagonal pinching: Z -> -Z, off-diagonals -> 0."""
    E = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
    ch = from_kraus([e @ PAULI["X"] for e in E], name="flip_pinch")
    return CorpusEntry(ch.name, ch, NormalState.maximally_mixed(ch.algebra),
                       _expected([1, -1, 0, 0], ergodic=True), provenance="explicit action")


def unitary_conj(theta: float = 1.0, U=None) -> CorpusEntry:
    """x -> U x U^*; default U = diag(1, exp(i theta))."""
    if U is None:
        U = np.diag([1.0, np.exp(1j * theta)])
        spectrum = [1, 1, np.exp(1j * theta), np.exp(-1j * theta)]
    else:
        U = np.asarray(U, dtype=complex)
        w = np.linalg.eigvals(U)
        spectrum = [a * np.conj(b) for a in w for b in w]
    ch = from_kraus([U], name=f"unitary_conj(theta={theta})")
    n = U.shape[0]
    return CorpusEntry(ch.name, ch, NormalState.maximally_mixed(ch.algebra),
                       _expected(spectrum, ergodic=(n == 1)), params={"theta": theta}, provenance="eigenvalue products")


def clock_shift_mixture(n: int = 3) -> CorpusEntry:
    """x -> (C x C^* + S x S^*)/2 with clock C and shift S on C^n.

    The Weyl operators S^a C^b diagonalise it with eigenvalue
    (w^a + w^-b)/2, w = exp(2 pi i/n). This is unimodular exactly when
    a + b = 0 mod n, so the peripheral spectrum is the full group of n-th
    roots of unity, carried by the powers of S C^-1.
    """
    w = np.exp(2j * np.pi / n)
    C = np.diag(w ** np.arange(n))
    S = np.roll(np.eye(n), 1, axis=0)
    ch = from_kraus([C / np.sqrt(2), S / np.sqrt(2)], name=f"clock_shift_mixture(n={n})")
    spectrum = [(w ** a + w ** (-b)) / 2 for a in range(n) for b in range(n)]
    return CorpusEntry(ch.name, ch, NormalState.maximally_mixed(ch.algebra),
                       _expected(spectrum, ergodic=True), params={"n": n}, provenance="Weyl eigenoperators")


def _commutant_dim(ops):
    n = ops[0].shape[0]
    rows = [np.kron(np.eye(n), K) - np.kron(K.T, np.eye(n)) for K in ops]
    rows += [np.kron(np.eye(n), K.conj().T) - np.kron(K.conj(), np.eye(n)) for K in ops]
    return n * n - numerical_rank(np.vstack(rows), 1e-9)


def random_unital(n: int = 2, seed: int = 0, terms: int = 3) -> CorpusEntry:
    """Random convex combination of Haar-random unitary conjugations."""
    from scipy.stats import unitary_group  # slow import, only needed here

    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(terms))
    Us = [unitary_group.rvs(n, random_state=rng) for _ in range(terms)]
    ch = from_kraus([np.sqrt(p) * U for p, U in zip(weights, Us)], name=f"random_unital(n={n}, seed={seed})")
    # fixed space of a unital channel with tracial invariant state = commutant of the Kraus operators
    ergodic = _commutant_dim(Us) == 1
    spectrum = np.linalg.eigvals(sum(p * np.kron(U.conj(), U) for p, U in zip(weights, Us)))
    return CorpusEntry(ch.name, ch, NormalState.maximally_mixed(ch.algebra),
                       _expected(spectrum, ergodic=ergodic), seed, {"n": n, "terms": terms}, "numeric Kraus spectrum")


def direct_sum(a: CorpusEntry, b: CorpusEntry, weight: float = 0.5) -> CorpusEntry:
    """T_a (+) T_b on A_a (+) A_b with the invariant state w*phi_a (+) (1-w)*phi_b."""
    alg = BlockAlgebra(a.channel.algebra.block_dims + b.channel.algebra.block_dims)
    S = sla.block_diag(a.channel.superoperator, b.channel.superoperator)
    name = f"{a.name}+{b.name}"
    ch = ChannelMap(alg, S, name=name, provenance="direct sum")
    state = NormalState(alg, [weight * r for r in a.state.blocks] + [(1 - weight) * r for r in b.state.blocks])
    per = a.expected["peripheral"] + b.expected["peripheral"]
    distinct = []
    for v in per:
        if all(abs(v - d) > 1e-6 for d in distinct):
            distinct.append(v)
    exp = {
        "peripheral": per,
        "h": reported_order(distinct, False),
        "dim_r": a.expected["dim_r"] + b.expected["dim_r"],
        "ergodic": False,
        "stable_radius": max(a.expected["stable_radius"], b.expected["stable_radius"]),
    }
    return CorpusEntry(name, ch, state, exp, None, {}, "direct sum")


QUANTUM_PRESETS = {
    "identity": identity,
    "dephasing": dephasing,
    "depolarize_to_mixed": depolarize_to_mixed,
    "flip_pinch": flip_pinch,
    "unitary_conj": unitary_conj,
    "clock_shift_mixture": clock_shift_mixture,
    "random_unital": random_unital,
}

PRESETS = ("classical_cycle",) + tuple(QUANTUM_PRESETS)


def quantum_presets(name: str, **params) -> CorpusEntry:
    try:
        factory = QUANTUM_PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(QUANTUM_PRESETS)}") from None
    return factory(**params)


def preset(name: str, **params) -> CorpusEntry:
    """Any preset by name, including classical_cycle."""
    if name == "classical_cycle":
        return classical_cycle(**params)
    return quantum_presets(name, **params)


def standard_corpus() -> list:
    """The fixed corpus used by the acceptance suite."""
    entries = [
        identity(2),
        dephasing(0.75),
        depolarize_to_mixed(),
        flip_pinch(),
        unitary_conj(1.0),
        clock_shift_mixture(3),
        clock_shift_mixture(4),
        random_unital(2, seed=7),
        random_unital(3, seed=11),
    ]
    entries += [classical_cycle(h) for h in range(1, 8)]
    entries += [
        classical_cycle(2, [2]),
        classical_cycle(3, [3, 2], seed=5),
        direct_sum(dephasing(0.75), classical_cycle(2)),
    ]
    return entries
