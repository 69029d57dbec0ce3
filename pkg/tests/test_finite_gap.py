import numpy as np
import pytest
from numpy.testing import assert_allclose

from bobk.errors import InvalidParameterError, InvalidPoleError
from bobk.finite_gap import (
    FiniteGapSpec,
    OneGap,
    from_poles,
    one_gap_closed_form,
    poisson_form,
    traveling_wave_speed,
)
from bobk.forward import forward_map
from bobk.fourier import lax_matrix

x = np.linspace(0, 2 * np.pi, 50)


def test_from_poles_matches_poisson_kernel():
    spec = FiniteGapSpec([0.5, -0.2 + 0.4j])
    u = from_poles(spec)
    assert_allclose(u(x), poisson_form(spec, x), atol=1e-12)


def test_rational_form():
    # u = -2 Re(e^{ix} Q'(e^{ix}) / Q(e^{ix})) with Q(z) = prod(1 - q z)
    q = np.array([0.3, 0.6j])
    spec = FiniteGapSpec(q)
    c = spec.Q_coeffs()
    assert c[0] == 1
    z = np.exp(1j * x)
    Q = np.polyval(c[::-1], z)
    dQ = np.polyval(np.polyder(c[::-1]), z)
    assert_allclose(from_poles(spec)(x), -2 * np.real(z * dQ / Q), atol=1e-12)


@pytest.mark.parametrize("q", [[0.0], [1.0], [0.5, 1.2j], []])
def test_invalid_poles(q):
    with pytest.raises(InvalidPoleError):
        FiniteGapSpec(q)


def test_one_gap_invalid():
    with pytest.raises(InvalidParameterError):
        OneGap(0, 0.5)
    with pytest.raises(InvalidParameterError):
        OneGap(1, 1.0)


def test_one_gap_potential_is_dilated_pole():
    og = OneGap(2, 0.6)
    assert_allclose(og.potential(40)(x), from_poles([0.6], K=20).dilate(2)(x) * 2, atol=1e-12)


@pytest.mark.parametrize("N,w", [(1, 0.5), (2, 0.6), (3, 0.25 * np.exp(0.4j))])
def test_one_gap_eigenfunctions(N, w):
    og = OneGap(N, w)
    M = 120
    L = lax_matrix(og.potential(), M)
    lam = og.lambdas(N + 2)
    for n in range(N + 2):
        f = og.eigenfunction(n, M).a
        assert np.linalg.norm(f) == pytest.approx(1, abs=1e-12)
        assert_allclose((L @ f)[: M - 2 * N], lam[n] * f[: M - 2 * N], atol=1e-10)
        assert np.conj(f[0]) == pytest.approx(og.one_fn(n), abs=1e-12)


def test_one_gap_phases():
    og = OneGap(2, 0.5j)
    M = 60
    for n in range(4):
        s = np.vdot(og.eigenfunction(n, M).a[:-1], og.eigenfunction(n + 1, M).a[1:])
        assert s.real > 0 and abs(s.imag) < 1e-12


def test_one_gap_zeta_half():
    og = one_gap_closed_form(1, 0.5)
    assert og.gamma == pytest.approx(1 / 3)
    assert og.zeta.zeta[0] == pytest.approx(-1 / np.sqrt(3))


def test_one_gap_speed():
    assert traveling_wave_speed(1, 0.5) == pytest.approx(1 / 3)
    # N=2, w=0.6: gamma = 2*0.36/0.64 = 9/8, omega_2 = 4 - 4 gamma
    assert traveling_wave_speed(2, 0.6) == pytest.approx((4 - 4 * 9 / 8) / 2)


def test_coincident_poles_allowed():
    u = from_poles([0.4, 0.4])
    z = forward_map(u, 4).trimmed(1e-8)
    assert z.N >= 1
