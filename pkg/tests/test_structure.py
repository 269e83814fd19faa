import numpy as np
import pytest

from jdlgkit.algebra import BlockAlgebra, NormalState
from jdlgkit.channel import ChannelMap, from_kraus
from jdlgkit.corpus import (
    classical_cycle, clock_shift_mixture, dephasing, depolarize_to_mixed, flip_pinch, identity, random_unital,
    unitary_conj,
)
from jdlgkit.errors import PreconditionError, SchwarzViolationError, UnsupportedRepresentationError, ValidationError
from jdlgkit.jdlg import jdlg_split
from jdlgkit.structure import (
    automorphism_check, choi_effros_axioms, choi_effros_product, conditional_expectation_check, detect_order,
    multiplicative_domain, peripheral_group, perron_frobenius_report, subalgebra_residual, trace_check,
    unitary_eigenvectors,
)
from jdlgkit._linalg import match_multisets

from conftest import X, Y, Z, I2
from test_channel import transpose_map

W3 = np.exp(2j * np.pi / 3)


def split_of(entry):
    return jdlg_split(entry.channel, entry.state)


def test_choi_effros_product_examples():
    e = dephasing()
    s = split_of(e)
    A = e.channel.algebra
    one, z = A.unit(), A.element([Z])
    assert choi_effros_product(s, one, one).allclose(one)
    assert choi_effros_product(s, z, z).allclose(one)
    d = split_of(depolarize_to_mixed())
    a, b = 2.0 * d.algebra.unit(), (0.5 - 1j) * d.algebra.unit()
    assert choi_effros_product(d, a, b).allclose((1 - 2j) * d.algebra.unit())


def test_choi_effros_rejects_outside_range():
    e = dephasing()
    s = split_of(e)
    with pytest.raises(ValidationError, match="ran P"):
        choi_effros_product(s, e.channel.algebra.element([X]), e.channel.algebra.unit())


def test_choi_effros_rejects_non_cp():
    # transpose is a contraction for the tracial state with peripheral spectrum {1,1,1,-1}
    T = transpose_map()
    phi = NormalState.maximally_mixed(T.algebra)
    s = jdlg_split(T, phi)
    with pytest.raises(UnsupportedRepresentationError):
        choi_effros_product(s, T.algebra.unit(), T.algebra.unit())


def test_choi_effros_axioms(corpus, splits):
    for e in corpus:
        ax = choi_effros_axioms(splits[e.name], samples=8)
        assert ax.associativity <= 1e-8 and ax.involution <= 1e-8 and ax.positivity <= 1e-8, e.name
        assert ax.min_eigenvalue >= -1e-8
        assert ax.product_vs_ordinary <= 1e-9


def test_conditional_expectation_examples():
    for entry in (dephasing(), identity(2), random_unital(3, seed=2)):
        r = conditional_expectation_check(split_of(entry))
        assert r.faithful and not r.skipped
        assert r.residual <= 1e-8 and r.closure_residual <= 1e-9
    assert conditional_expectation_check(split_of(dephasing())).residual <= 1e-10


@pytest.mark.parametrize("entry, dim, ground_truth", [
    (dephasing(), 2, [I2, Z]),
    (depolarize_to_mixed(), 1, [I2]),
    (unitary_conj(1.0), 4, [I2, X, Y, Z]),
])
def test_multiplicative_domain(entry, dim, ground_truth):
    md = multiplicative_domain(entry.channel, entry.state)
    assert md.dim == dim
    assert md.principal_gap <= 1e-8
    assert md.member_defect <= 1e-10
    if dim < 4:
        assert md.nonmember_defect > 1e-3
    B = np.column_stack([b.vector for b in md.basis])
    G = np.column_stack([m.reshape(-1, order="F") for m in ground_truth])
    # same subspace: projecting the ground truth onto span(B) loses nothing
    Q, _ = np.linalg.qr(B)
    assert np.linalg.norm(G - Q @ (Q.conj().T @ G)) < 1e-10


def test_multiplicative_domain_contains_range(corpus, splits):
    for e in corpus[:9]:
        md = multiplicative_domain(e.channel, e.state)
        Q, _ = np.linalg.qr(np.column_stack([b.vector for b in md.basis]))
        Br = splits[e.name].basis_r
        assert np.linalg.norm(Br - Q @ (Q.conj().T @ Br)) < 1e-8, e.name


def test_multiplicative_domain_schwarz_violation():
    T = transpose_map()
    with pytest.raises(SchwarzViolationError):
        multiplicative_domain(T)


def test_unitary_eigenvectors_flip_pinch():
    e = flip_pinch()
    s = split_of(e)
    us = unitary_eigenvectors(s, 2)
    assert [complex(u.eigenvalue) for u in us] == pytest.approx([1, -1])
    u0, u1 = us[0].element.blocks[0], us[1].element.blocks[0]
    np.testing.assert_allclose(u0 / u0[0, 0], I2, atol=1e-12)
    np.testing.assert_allclose(u1 / u1[0, 0], Z, atol=1e-12)
    assert all(u.unitarity_residual <= 1e-12 and u.eigen_residual <= 1e-12 for u in us)


def test_unitary_eigenvectors_three_cycle():
    e = classical_cycle(3)
    us = unitary_eigenvectors(split_of(e), 3)
    for k, u in enumerate(us):
        v = u.element.vector
        np.testing.assert_allclose(np.abs(v), 1, atol=1e-12)
        assert np.isclose(u.eigenvalue, np.exp(-2j * np.pi * k / 3))
        # consecutive entries differ by a cube root of unity
        ratios = v[1:] / v[:-1]
        assert np.allclose(ratios, ratios[0]) and np.isclose(ratios[0] ** 3, 1)


def test_unitary_eigenvectors_primitive():
    us = unitary_eigenvectors(split_of(depolarize_to_mixed()), 1)
    assert len(us) == 1
    np.testing.assert_allclose(us[0].element.blocks[0] / us[0].element.blocks[0][0, 0], I2)


def test_unitary_eigenvectors_retry_on_bad_seed():
    e = classical_cycle(3)
    s = split_of(e)
    # seed with zero weight on every nontrivial character
    us = unitary_eigenvectors(s, 3, seed_element=e.channel.algebra.unit())
    assert len(us) == 3 and all(u.unitarity_residual < 1e-8 for u in us)


def test_unitary_eigenvectors_needs_ergodic():
    with pytest.raises(PreconditionError):
        unitary_eigenvectors(split_of(dephasing()), 1)


def test_trace_examples():
    e = classical_cycle(3)
    s = split_of(e)
    us = unitary_eigenvectors(s, 3)
    t = trace_check(s, us)
    assert t.trace_residual == 0 and t.orthogonality_residual < 1e-15
    f = flip_pinch()
    sf = split_of(f)
    assert trace_check(sf, unitary_eigenvectors(sf, 2)).trace_residual < 1e-15


def test_automorphism_examples():
    for entry in (unitary_conj(0.7), dephasing(), flip_pinch()):
        s = split_of(entry)
        a = automorphism_check(s)
        assert a.product_residual < 1e-12 and a.star_residual < 1e-12
        assert a.min_singular_value > 0.5
    assert subalgebra_residual(split_of(dephasing())) < 1e-14


def test_detect_order():
    assert detect_order([1]) == 1
    assert detect_order(np.exp(2j * np.pi * np.arange(6) / 6)) == 6
    assert detect_order([1, -1, 1j]) == 4
    assert detect_order([1, np.exp(1j)]) is None
    assert detect_order([]) is None
    assert detect_order([np.exp(2j * np.pi / 65)]) is None


def test_peripheral_group_closure():
    g = peripheral_group([1, W3, W3 ** 2], [1, 1, 1])
    assert g.h == 3 and g.matches_gamma and g.closure_residual < 1e-15
    g = peripheral_group([1, 1j], [1, 1])
    assert g.closure_residual > 0.5 and not g.matches_gamma


@pytest.mark.parametrize("entry, h", [(classical_cycle(3), 3), (flip_pinch(), 2), (clock_shift_mixture(3), 3)])
def test_pf_report_ergodic(entry, h):
    rep = perron_frobenius_report(entry.channel, entry.state)
    assert rep.ergodic and not rep.partial
    assert rep.group.h == h and rep.group.matches_gamma
    assert rep.simple
    assert rep.group.closure_residual <= 1e-8
    assert max(rep.rotation_residuals.values()) <= 1e-8
    assert rep.eigen_relation_residual <= 1e-8
    assert len(rep.unitary_eigenvectors) == h


def test_pf_report_clock_shift_spectrum():
    # Weyl operators S^a C^b: eigenvalue (w^a + w^-b)/2, unimodular iff a + b = 0 mod n
    T = clock_shift_mixture(3).channel
    w = np.linalg.eigvals(T.superoperator)
    expected = [(W3 ** a + W3 ** (-b)) / 2 for a in range(3) for b in range(3)]
    assert match_multisets(w, expected)[1] < 1e-12
    per = w[np.abs(w) > 1 - 1e-8]
    assert match_multisets(per, [1, W3, W3 ** 2])[1] < 1e-12


def test_pf_report_partial():
    rep = perron_frobenius_report(dephasing().channel, dephasing().state)
    assert rep.partial and not rep.ergodic and rep.fixed_dim == 2
    assert rep.unitary_eigenvectors == [] and rep.notes


def test_pf_report_preconditions():
    A = BlockAlgebra([2])
    phi = NormalState.maximally_mixed(A)
    with pytest.raises(PreconditionError) as err:
        perron_frobenius_report(transpose_map(), phi)
    assert err.value.axiom == "completely_positive"
    with pytest.raises(PreconditionError) as err:
        perron_frobenius_report(from_kraus([np.diag([1.0, 0.5])]), phi)
    assert err.value.axiom == "unital"
    c = classical_cycle(3)
    skew = NormalState(c.channel.algebra, [np.full((1, 1), p) for p in (0.5, 0.3, 0.2)])
    with pytest.raises(PreconditionError) as err:
        perron_frobenius_report(c.channel, skew)
    assert err.value.axiom == "invariant_state"
    with pytest.raises(PreconditionError) as err:
        perron_frobenius_report(identity(2).channel, NormalState(A, [np.diag([1.0, 0.0])]))
    assert err.value.axiom == "faithful_state"
