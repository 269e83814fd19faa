"""Algebraic structure of the reversible part.

Covers the Choi-Effros product on ran P, the conditional-expectation
property, the multiplicative domain, unitary eigenvectors obtained by
character averaging over the cyclic group generated by T, and the
Perron-Frobenius report for W*-dynamical systems.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from ._linalg import cluster, detect_order, match_multisets, numerical_rank
from .algebra import AlgebraElement, NormalState, orthonormal_basis
from .channel import ChannelMap, check_invariance, is_completely_positive, schwarz_check
from .config import DEFAULT, Tolerances
from .errors import JdlgError, PreconditionError, SchwarzViolationError, UnsupportedRepresentationError, ValidationError
from .jdlg import JdlgSplit, jdlg_split


def _in_range(split: JdlgSplit, x: AlgebraElement, tol: float) -> float:
    res = split.elem_norm(split.P @ x.vector - x.vector)
    return res / max(1.0, split.elem_norm(x.vector)) if res > tol else 0.0


def choi_effros_product(split: JdlgSplit, x: AlgebraElement, y: AlgebraElement, tol: float = 1e-9) -> AlgebraElement:
    """x . y = P(xy) for x, y in ran P."""
    for name, e in (("x", x), ("y", y)):
        res = _in_range(split, e, tol)
        if res:
            raise ValidationError(f"{name} is not in ran P (projection residual {res:.3e})")
    if not is_completely_positive(split.channel).completely_positive:
        raise UnsupportedRepresentationError("the Choi-Effros product needs a completely positive generator")
    return split.project(x @ y)


def _random_range_elements(split: JdlgSplit, rng, count: int) -> list:
    k = split.dim_r
    out = []
    for _ in range(count):
        c = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        v = split.basis_r @ c
        x = split.algebra.from_vector(v)
        out.append(x / x.fro())
    return out


@dataclass
class ChoiEffrosAxioms:
    associativity: float
    involution: float
    positivity: float
    product_vs_ordinary: float
    min_eigenvalue: float = 0.0


def choi_effros_axioms(split: JdlgSplit, samples: int = 16, seed: int = 0) -> ChoiEffrosAxioms:
    """Residuals of the C*-algebra axioms for x . y = P(xy) on ran P.

    ``positivity`` is the negative part of the smallest eigenvalue of
    x^* . x, which must be positive in A; the eigenvalue itself is kept in
    ``min_eigenvalue``.
    """
    if split.dim_r == 0:
        return ChoiEffrosAxioms(0.0, 0.0, 0.0, 0.0)
    rng = np.random.default_rng(seed)
    prod = lambda a, b: split.project(a @ b)
    assoc = invol = ordinary = 0.0
    pos = np.inf
    for _ in range(samples):
        x, y, z = _random_range_elements(split, rng, 3)
        assoc = max(assoc, (prod(prod(x, y), z) - prod(x, prod(y, z))).fro())
        invol = max(invol, (prod(x, y).adj() - prod(y.adj(), x.adj())).fro())
        pos = min(pos, prod(x.adj(), x).min_eigenvalue())
        ordinary = max(ordinary, (prod(x, y) - x @ y).fro())
    return ChoiEffrosAxioms(float(assoc), float(invol), float(max(0.0, -pos)), float(ordinary), float(pos))


def _functional_row(phi: NormalState) -> np.ndarray:
    """Row f with phi(x) = f @ vec(x)."""
    return np.concatenate([b.T.reshape(-1, order="F") for b in phi.blocks])


@dataclass
class ConditionalExpectationResult:
    faithful: bool
    invariance_residual: float
    cone_min_ratio: float
    residual: float
    closure_residual: float
    skipped: bool = False


def conditional_expectation_check(split: JdlgSplit, samples: int = 64, seed: int = 0) -> ConditionalExpectationResult:
    """max ||P(yxz) - y P(x) z|| over y, z in A_r and x in A (unit Frobenius norm).

    Faithfulness of P is tested through phi o P = phi for the states of the
    family, plus phi(P(x^*x)) > 0 on a sample of the positive cone.
    """
    rng = np.random.default_rng(seed)
    alg = split.algebra
    inv = max(float(np.linalg.norm(_functional_row(phi) @ split.P - _functional_row(phi))) for phi in split.family)
    ratio = np.inf
    for _ in range(samples):
        x = alg.random_element(rng)
        xx = x.adj() @ x
        ratio = min(ratio, split.state(split.project(xx)).real / split.state(xx).real)
    faithful = inv <= 1e-8 and ratio > 0
    if not faithful:
        return ConditionalExpectationResult(False, inv, float(ratio), float("nan"), float("nan"), skipped=True)
    res = clos = 0.0
    for _ in range(samples):
        y, z = _random_range_elements(split, rng, 2)
        x = alg.random_element(rng)
        x = x / x.fro()
        res = max(res, (split.project(y @ x @ z) - y @ split.project(x) @ z).fro())
        clos = max(clos, (split.project(y @ z) - y @ z).fro())
    return ConditionalExpectationResult(True, inv, float(ratio), float(res), float(clos))


def _right_mul(alg, b: AlgebraElement) -> np.ndarray:
    """Superoperator of w -> w b."""
    return sla.block_diag(*[np.kron(bb.T, np.eye(len(bb))) for bb in b.blocks])


def _density_metric(alg, sigma_vec) -> np.ndarray:
    sig = alg.from_vector(sigma_vec)
    return sla.block_diag(*[np.kron(((s + s.conj().T) / 2).T, np.eye(len(s))) for s in sig.blocks])


@dataclass
class MultiplicativeDomain:
    basis: list
    quadratic_basis: list
    principal_gap: float
    member_defect: float
    nonmember_defect: float

    @property
    def dim(self) -> int:
        return len(self.basis)


def multiplicative_domain(T: ChannelMap, phi: NormalState | None = None, tol: float = 1e-9,
                          samples: int = 16, seed: int = 0) -> MultiplicativeDomain:
    """{x : T(x)^*T(y) = T(x^*y) for all y}, from the null space of the bilinear defect.

    Cross-checked against the quadratic description {x : T(x)^*T(x) = T(x^*x)},
    computed as the kernel of the Hermitian form phi(T(x^*x)) - phi(T(x)^*T(x)).
    """
    if schwarz_check(T, samples=samples, seed=seed) < -1e-10:
        raise SchwarzViolationError(f"{T.name or 'map'} violates T(x)^*T(x) <= T(x^*x)")
    alg = T.algebra
    S = T.superoperator
    # w -> T(w e) - T(w) T(e) for every matrix unit e; x = w^* runs over the domain
    rows = [S @ _right_mul(alg, e) - _right_mul(alg, T(e)) @ S for e in alg.matrix_units()]
    _, sv, Vh = np.linalg.svd(np.vstack(rows))
    # absolute cut: the defect vanishes identically for *-homomorphisms
    rank = int(np.sum(sv > tol * max(1.0, sv[0] if sv.size else 0.0)))
    W = Vh[rank:].conj().T
    basis = [alg.from_vector(w).adj() for w in W.T]
    B = sla.orth(np.column_stack([b.vector for b in basis])) if basis else np.zeros((alg.dim, 0))
    basis = [alg.from_vector(c) for c in B.T]

    omega = phi if (phi is not None and phi.faithful) else NormalState.maximally_mixed(alg)
    G = omega.metric()
    H = _density_metric(alg, S.conj().T @ omega.vector) - S.conj().T @ G @ S
    H = (H + H.conj().T) / 2
    vals, vecs = np.linalg.eigh(H)
    Q = vecs[:, vals <= tol * max(1.0, abs(vals).max())]
    quad = [alg.from_vector(c) for c in Q.T]

    if B.shape[1] != Q.shape[1]:
        gap = 1.0
    elif B.shape[1] == 0:
        gap = 0.0
    else:
        gap = float(np.max(np.sin(sla.subspace_angles(B, Q))))

    def qdefect(x):
        tx = T(x)
        return (T(x.adj() @ x) - tx.adj() @ tx).fro()

    member = max((qdefect(b) for b in basis), default=0.0)
    rng = np.random.default_rng(seed)
    non = np.inf
    if B.shape[1] < alg.dim:
        for _ in range(samples):
            v = rng.standard_normal(alg.dim) + 1j * rng.standard_normal(alg.dim)
            v = v - B @ (B.conj().T @ v)
            x = alg.from_vector(v / np.linalg.norm(v))
            non = min(non, qdefect(x))
    return MultiplicativeDomain(basis, quad, gap, float(member), float(non))


@dataclass
class UnitaryEigenvector:
    eigenvalue: complex
    element: AlgebraElement
    unitarity_residual: float
    eigen_residual: float


def _fixed_dim(T: ChannelMap) -> int:
    return T.dim - numerical_rank(T.superoperator - np.eye(T.dim))


def unitary_eigenvectors(split: JdlgSplit, h: int, seed: int = 0, seed_element: AlgebraElement | None = None,
                         retries: int = 8) -> list:
    """u_k proportional to (1/h) sum_j exp(2 pi i jk/h) T^j(P x0), for k < h.

    T u_k = exp(-2 pi i k/h) u_k. Needs an ergodic map with resolved order h.
    """
    T = split.channel
    if _fixed_dim(T) != 1:
        raise PreconditionError("ergodic", "fixed space of T is not spanned by the unit")
    if not h:
        raise PreconditionError("order", "the peripheral group order h is unresolved")
    alg = T.algebra
    if seed_element is None:
        seed_element = sum(orthonormal_basis(alg, split.state)[1:], alg.unit())
    rng = np.random.default_rng(seed)
    x0 = seed_element
    S = T.superoperator
    for _attempt in range(retries + 1):
        y = split.P @ x0.vector
        orbit = [y]
        for _ in range(h - 1):
            orbit.append(S @ orbit[-1])
        out = []
        for k in range(h):
            xk = sum(np.exp(2j * np.pi * j * k / h) * orbit[j] for j in range(h)) / h
            out.append(alg.from_vector(xk))
        if all(x.norm() > 1e-8 * max(1.0, alg.from_vector(y).norm()) for x in out):
            break
        x0 = alg.random_element(rng)
    else:
        raise JdlgError(f"character averages vanished for {retries + 1} seeds")
    one = alg.unit()
    result = []
    for k, x in enumerate(out):
        u = x / x.norm()
        lam = np.exp(-2j * np.pi * k / h)
        unit_res = max((u.adj() @ u - one).norm(), (u @ u.adj() - one).norm())
        eig_res = (T(u) - lam * u).norm()
        result.append(UnitaryEigenvector(complex(lam), u, float(unit_res), float(eig_res)))
    return result


@dataclass
class TraceResult:
    trace_residual: float
    orthogonality_residual: float


def trace_check(split: JdlgSplit, eigenvectors=None) -> TraceResult:
    """max |phi(xy) - phi(yx)| over A_r basis pairs and |phi(u_j^* u_k)| for j != k."""
    elems = split.r_elements()
    tr = orth = 0.0
    for phi in split.family:
        for a in elems:
            for b in elems:
                tr = max(tr, abs(phi(a @ b) - phi(b @ a)))
        if eigenvectors:
            for i, ui in enumerate(eigenvectors):
                for j, uj in enumerate(eigenvectors):
                    if i != j:
                        orth = max(orth, abs(phi(ui.element.adj() @ uj.element)))
    return TraceResult(float(tr), float(orth))


def subalgebra_residual(split: JdlgSplit) -> float:
    """max ||P(xy) - xy|| over A_r basis pairs; zero iff A_r is closed under the product."""
    elems = split.r_elements()
    worst = 0.0
    for a in elems:
        for b in elems:
            worst = max(worst, (split.project(a @ b) - a @ b).fro())
    return float(worst)


@dataclass
class AutomorphismResult:
    product_residual: float
    star_residual: float
    min_singular_value: float


def automorphism_check(split: JdlgSplit, subalgebra: bool | None = None) -> AutomorphismResult:
    """Is T restricted to A_r an invertible *-homomorphism?"""
    T = split.channel
    if subalgebra is None:
        subalgebra = subalgebra_residual(split) <= 1e-8
    elems = split.r_elements()
    prod = (lambda a, b: a @ b) if subalgebra else (lambda a, b: split.project(a @ b))
    pr = st = 0.0
    for a in elems:
        ta = T(a)
        st = max(st, (T(a.adj()) - ta.adj()).fro())
        for b in elems:
            pr = max(pr, (T(prod(a, b)) - prod(ta, T(b))).fro())
    if elems:
        L = split.state.sqrt_metric()
        Br = L @ split.basis_r
        Mr = Br.conj().T @ L @ T.superoperator @ split.basis_r
        smin = float(np.linalg.svd(Mr, compute_uv=False)[-1])
    else:
        smin = 1.0
    return AutomorphismResult(float(pr), float(st), smin)


@dataclass
class PeripheralGroup:
    eigenvalues: list
    multiplicities: list
    h: int | None
    closure: list
    closure_residual: float
    matches_gamma: bool


def peripheral_group(values, multiplicities, tol: Tolerances = DEFAULT) -> PeripheralGroup:
    vals = [complex(v) for v in values]
    h = detect_order(vals, tol.root_match, tol.max_order)
    cert, worst = [], 0.0
    for i, a in enumerate(vals):
        for j, b in enumerate(vals):
            target = a * np.conj(b)
            d = [abs(target - c) for c in vals]
            k = int(np.argmin(d))
            cert.append((i, j, k, float(d[k])))
            worst = max(worst, d[k])
    gamma = False
    if h is not None:
        roots = np.exp(2j * np.pi * np.arange(h) / h)
        _, dist = match_multisets(vals, roots)
        gamma = dist <= tol.root_match and all(m == 1 for m in multiplicities)
    return PeripheralGroup(vals, list(multiplicities), h, cert, float(worst), gamma)


@dataclass
class StructureReport:
    ergodic: bool
    fixed_dim: int
    group: PeripheralGroup
    simple: bool
    geometric_multiplicities: list
    rotation_residuals: dict
    subalgebra: bool
    subalgebra_residual: float
    conditional_expectation: ConditionalExpectationResult
    choi_effros: ChoiEffrosAxioms
    trace: TraceResult | None
    automorphism: AutomorphismResult
    unitary_eigenvectors: list
    eigen_relation_residual: float | None
    partial: bool
    notes: list = field(default_factory=list)


def check_dynamical_system(T: ChannelMap, phi: NormalState, tol: float = 1e-9) -> None:
    """Raise PreconditionError naming the first failing W*-dynamical-system axiom."""
    cp = is_completely_positive(T)
    if not cp.completely_positive:
        raise PreconditionError("completely_positive", f"min Choi eigenvalue {cp.min_eigenvalue:.3e}", cp.min_eigenvalue)
    u = T.unital_residual()
    if u > tol:
        raise PreconditionError("unital", f"||T1 - 1|| = {u:.3e}", u)
    inv = check_invariance(T, phi).residual
    if inv > tol:
        raise PreconditionError("invariant_state", f"||T_* rho - rho|| = {inv:.3e}", inv)
    if not phi.faithful:
        raise PreconditionError("faithful_state", "the invariant state is not faithful")


def perron_frobenius_report(T: ChannelMap, phi: NormalState, split: JdlgSplit | None = None,
                            tol: Tolerances = DEFAULT, samples: int = 64, seed: int = 0) -> StructureReport:
    """Peripheral-spectrum structure of the W*-dynamical system (A, T, phi).

    Non-ergodic systems get a partial report: the subgroup, simplicity,
    rotation and unitary-eigenvector claims are evaluated only when the
    fixed space of T is spanned by the unit.
    """
    check_dynamical_system(T, phi)
    if split is None:
        split = jdlg_split(T, phi, tol)
    spec = split.spectral
    fixed = _fixed_dim(T)
    ergodic = fixed == 1
    group = peripheral_group(spec.peripheral_values, spec.multiplicities, tol)
    split.h = group.h
    notes = []
    sub_res = subalgebra_residual(split)
    sub = sub_res <= 1e-8
    ce = conditional_expectation_check(split, samples=samples, seed=seed)
    ceax = choi_effros_axioms(split, samples=max(4, samples // 4), seed=seed)
    auto = automorphism_check(split, sub)
    rotation, uvecs, trace, relation = {}, [], None, None
    simple = all(g == 1 for g in spec.geometric_multiplicities)
    if ergodic:
        for a in spec.peripheral_values:
            _, d = match_multisets(spec.eigenvalues, a * spec.eigenvalues)
            rotation[complex(a)] = d
        if group.h is not None:
            uvecs = unitary_eigenvectors(split, group.h, seed=seed)
            trace = trace_check(split, uvecs)
            rng = np.random.default_rng(seed)
            relation = 0.0
            for uv in uvecs:
                for _ in range(8):
                    x = T.algebra.random_element(rng)
                    x = x / x.fro()
                    lhs = T(uv.element @ x)
                    rhs = uv.eigenvalue * (uv.element @ T(x))
                    relation = max(relation, (lhs - rhs).fro())
        else:
            notes.append("peripheral order unresolved; unitary eigenvectors skipped")
    else:
        notes.append(f"not ergodic (dim Fix(T) = {fixed}); subgroup, simplicity and rotation claims not asserted")
    return StructureReport(
        ergodic, fixed, group, simple, list(spec.geometric_multiplicities), rotation, sub, sub_res,
        ce, ceax, trace, auto, uvecs, relation, not ergodic, notes,
    )
