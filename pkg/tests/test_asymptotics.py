import numpy as np
import pytest

from jdlgkit.asymptotics import (
    cesaro_absolute_averages, convergence_report, periodic_part, periodicity_residual, stable_radius,
)
from jdlgkit.corpus import classical_cycle, dephasing, identity
from jdlgkit.jdlg import eigendecompose, jdlg_split

from conftest import X


def split_of(entry):
    return jdlg_split(entry.channel, entry.state)


def test_periodic_part_examples():
    e = identity(2)
    np.testing.assert_allclose(periodic_part(e.channel, split_of(e)).superoperator, np.eye(4), atol=1e-14)
    d = dephasing()
    S = periodic_part(d.channel, split_of(d)).superoperator
    np.testing.assert_allclose(S, np.diag([1, 0, 0, 1]), atol=1e-14)
    np.testing.assert_allclose(S @ S, S, atol=1e-14)
    c = classical_cycle(3)
    s = split_of(c)
    S = periodic_part(c.channel, s)
    np.testing.assert_allclose(S.superoperator, c.channel.superoperator, atol=1e-14)
    assert periodicity_residual(S, s, 3) < 1e-12


def test_periodic_part_laws(corpus, splits):
    for e in corpus:
        s = splits[e.name]
        T = e.channel.superoperator
        S = periodic_part(e.channel, s).superoperator
        assert s.phi_norm(S @ T - T @ S) < 1e-9
        assert s.phi_norm(S @ s.P - S) < 1e-9 and s.phi_norm(s.P @ S - S) < 1e-9
        for c in s.basis_s.T:
            assert s.elem_norm(S @ c) < 1e-9
        if s.h:
            assert periodicity_residual(periodic_part(e.channel, s), s, s.h) <= 1e-8


def test_stable_radius_examples():
    assert stable_radius(eigendecompose(identity(2).channel)) == 0
    assert np.isclose(stable_radius(eigendecompose(dephasing().channel)), 0.5)
    assert stable_radius(eigendecompose(classical_cycle(3, [2]).channel)) == 0


def test_dephasing_distances_exact():
    s = split_of(dephasing())
    rep = convergence_report(s, n_max=40)
    np.testing.assert_allclose(rep.distances, 0.5 ** rep.n, rtol=1e-9)
    assert abs(rep.r_fit - 0.5) <= 0.005
    assert rep.constant == pytest.approx(1.0)


def test_cycle_distances_zero():
    rep = convergence_report(split_of(classical_cycle(3)), n_max=32)
    assert rep.distances.max() < 1e-13
    assert rep.r_fit == 0


def test_cesaro_dephasing_probe():
    e = dephasing()
    x = e.channel.algebra.element([X]).vector
    avg = cesaro_absolute_averages(e.channel, x, x, 512)
    n = np.arange(1, 513)
    # (1/n) sum_k 0.5^k * <X, X>_HS = 2 * 2 (1 - 0.5^n) / n
    np.testing.assert_allclose(avg, 4 * (1 - 0.5 ** n) / n, rtol=1e-12)


def test_probe_classes(corpus, splits):
    for e in corpus:
        rep = convergence_report(splits[e.name], n_max=256)
        for p in rep.probes:
            if p.kind == "stable":
                assert p.slope <= -0.9, e.name
            elif p.averages[-1] > 1e-8:
                # reversible probes do not decay
                assert p.slope > -0.1, e.name


def test_distances_monotone_after_transient(corpus, splits):
    for e in corpus:
        rep = convergence_report(splits[e.name], n_max=64)
        d = rep.distances[rep.transient - 1:]
        assert np.all(np.diff(d) <= 1e-12 * max(1, d.max())), e.name


def test_nmax_precondition():
    with pytest.raises(ValueError):
        convergence_report(split_of(dephasing()), n_max=8)
