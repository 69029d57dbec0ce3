import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy.integrate import quad

from bobk.errors import AccuracyGuardError, InvalidTruncationError
from bobk.evolution import (
    SolverConfig,
    evolve_direct,
    evolve_quadrature,
    frequencies,
    hamiltonian_actions,
    hamiltonian_direct,
    lax_residual,
    measure_frequencies,
    recurrence_probe,
)
from bobk.finite_gap import OneGap, from_poles
from bobk.forward import BirkhoffCoords, forward_map
from bobk.fourier import Potential, l2_distance
from bobk.inverse import reconstruct_finite_gap

actions = st.lists(st.floats(0, 2), min_size=1, max_size=6)


def test_hamiltonian_trivial():
    assert hamiltonian_actions([0.0, 0.0]) == 0.0
    assert hamiltonian_actions([1 / 3]) == pytest.approx(2 / 9)


@given(actions)
def test_frequencies_are_action_derivatives(g):
    g = np.array(g)
    h = 1e-6
    fd = [
        (hamiltonian_actions(g + h * e) - hamiltonian_actions(g - h * e)) / (2 * h)
        for e in np.eye(g.size)
    ]
    assert_allclose(frequencies(g), fd, atol=1e-6)


def test_frequency_one_gap():
    assert frequencies([1 / 3])[0] == pytest.approx(1 / 3)
    assert_allclose(frequencies([0, 0, 0]), [1, 4, 9])


def test_hamiltonian_quadrature_one_gap():
    # oracle: (1/2pi) int (1/2 (|D|^{1/2} u)^2 - 1/3 u^3) dx by adaptive quadrature
    u = OneGap(1, 0.5).potential()
    k = np.arange(1, u.K + 1)
    half = Potential(np.sqrt(k) * u.coeffs)
    f = lambda x: 0.5 * half(x) ** 2 - u(x) ** 3 / 3
    val = quad(f, 0, 2 * np.pi, limit=200, epsabs=1e-13)[0] / (2 * np.pi)
    assert val == pytest.approx(2 / 9, abs=1e-8)
    assert hamiltonian_direct(u) == pytest.approx(val, abs=1e-10)


def test_hamiltonian_grid_is_exact():
    u = Potential([0.3 + 0.1j, -0.2, 0.1j], 0.4)
    assert hamiltonian_direct(u, G=16) == pytest.approx(hamiltonian_direct(u), abs=1e-13)


def test_quadrature_zero_and_moduli():
    z = BirkhoffCoords([0.0, 0.0])
    assert_allclose(evolve_quadrature(z, 3.0).zeta, 0)
    z = BirkhoffCoords([0.2, 0.3j])
    assert_allclose(np.abs(evolve_quadrature(z, 7.3).zeta), np.abs(z.zeta), rtol=1e-15)


def test_one_gap_quadrature_is_translation():
    og = OneGap(1, 0.5)
    u0 = og.potential()
    t = 1.7
    zt = evolve_quadrature(og.zeta, t)
    assert zt.zeta[0] == pytest.approx(-np.exp(1j * t / 3) / np.sqrt(3))
    ut = reconstruct_finite_gap(zt, K=u0.K)
    assert l2_distance(ut, u0.translate(t / 3)) < 1e-12


def test_one_gap_period():
    z = OneGap(1, 0.5).zeta
    assert_allclose(evolve_quadrature(z, 6 * np.pi).zeta, z.zeta, atol=1e-14)


def test_direct_zero():
    tr = evolve_direct(Potential.zero(8), 0.1, SolverConfig(grid=32, checkpoints=2))
    assert tr.states[-1].norm2() == 0


def test_direct_traveling_wave():
    u0 = OneGap(1, 0.5).potential()
    tr = evolve_direct(u0, 1.0, SolverConfig(grid=128, checkpoints=4))
    err = l2_distance(tr.states[-1].padded(u0.K), u0.translate(1 / 3))
    assert err < 1e-4


def test_direct_two_thirds_rule():
    u0 = OneGap(1, 0.5).potential()
    tr = evolve_direct(u0, 0.5, SolverConfig(grid=256, dealias="2/3", checkpoints=1))
    assert l2_distance(tr.states[-1].padded(u0.K), u0.translate(1 / 6)) < 1e-4


def test_direct_mean_conserved():
    u0 = Potential([0.3 + 0.2j, 0.1], 0.7)
    tr = evolve_direct(u0, 0.3, SolverConfig(grid=64, checkpoints=3))
    assert all(m == 0.7 for m in tr.diagnostics["mean"])
    assert np.ptp(tr.diagnostics["norm2"]) < 1e-10
    assert np.ptp(tr.diagnostics["H"]) < 1e-9


def test_direct_matches_quadrature():
    u0 = from_poles([0.4, 0.3j])
    T = 1.0
    tr = evolve_direct(u0, T, SolverConfig(grid=128, checkpoints=2))
    z0 = forward_map(u0, 4).trimmed()
    uq = reconstruct_finite_gap(evolve_quadrature(z0, T), K=u0.K)
    assert l2_distance(tr.states[-1].padded(u0.K), uq) < 1e-4


def test_measured_frequencies():
    u0 = from_poles([0.4, 0.3j])
    tr = evolve_direct(u0, 1.0, SolverConfig(grid=128, checkpoints=10))
    om = frequencies(forward_map(u0, 2).gammas)
    assert_allclose(measure_frequencies(tr, 2), om, rtol=1e-3)


def test_guard_raises():
    u0 = Potential([1.5, 1.0j, 0.5])
    cfg = SolverConfig(grid=32, dt=0.2, guard=1e-14, max_splits=0, checkpoints=1)
    with pytest.raises(AccuracyGuardError):
        evolve_direct(u0, 0.2, cfg)


def test_lax_residual_trivial():
    assert lax_residual(Potential.zero(), 8) == 0.0
    assert lax_residual(Potential([1.0]), 64) < 1e-10


@pytest.mark.parametrize("M", [64, 128, 256])
def test_lax_residual_one_gap(M):
    u = OneGap(1, 0.5).potential().trimmed(1e-6)
    assert lax_residual(u, M) < 1e-9


def test_lax_residual_detects_wrong_flow():
    # the commutator alone is far from zero, so the check is not vacuous
    from bobk.fourier import lax_matrix, toeplitz_matrix

    u = Potential([0.7 + 0.2j, 0.3])
    M = 40
    T = toeplitz_matrix(u, M)
    L = lax_matrix(u, M)
    B = 1j * (toeplitz_matrix(Potential([0.7 + 0.2j, 0.6]), M) - T @ T)
    assert np.abs((B @ L - L @ B)[:36, :36]).max() > 0.1


def test_lax_residual_bad_truncation():
    with pytest.raises(InvalidTruncationError):
        lax_residual(Potential(np.ones(10)), 15)


def test_recurrence_single_gap():
    z = OneGap(1, 0.5).zeta
    times = recurrence_probe(z, 20 * np.pi, 1e-6)
    assert_allclose(times, [6 * np.pi, 12 * np.pi, 18 * np.pi], atol=1e-6)


def test_recurrence_threshold_zero():
    z = BirkhoffCoords([0.3, 0.2])
    assert recurrence_probe(z, 50.0, 0.0) == []


def test_recurrence_two_torus_scan():
    # oracle: brute-force scan of the torus distance on a fine time grid
    z = BirkhoffCoords([0.4, 0.25])
    om = frequencies(z.gammas)
    T_max, thr = 200.0, 0.15
    times = recurrence_probe(z, T_max, thr)
    assert times
    ts = np.linspace(0, T_max, 400001)
    n = np.arange(1, 3)
    d = np.sqrt(2 * (np.abs(np.exp(1j * np.outer(ts, om)) - 1) ** 2 @ (n * z.gammas)))
    u0 = reconstruct_finite_gap(z)
    for t in times:
        # each reported time is a local minimum of the scanned distance
        i = np.argmin(np.abs(ts - t))
        lo, hi = max(i - 400, 0), i + 400
        assert abs(ts[lo + np.argmin(d[lo:hi])] - t) < 2e-3
        assert l2_distance(reconstruct_finite_gap(evolve_quadrature(z, t), K=u0.K), u0) < thr
