import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from bobk.errors import ConditioningError, InconsistentCoordinatesError
from bobk.finite_gap import FiniteGapSpec, from_poles
from bobk.forward import BirkhoffCoords, forward_map
from bobk.fourier import l2_distance
from bobk.inverse import (
    _check_poles,
    auto_K,
    pi_u_resolvent,
    reconstruct_finite_gap,
    reconstruct_poles,
    reconstruct_resolvent,
    spectral_data_from_zeta,
)


def test_one_gap_inverse():
    z = BirkhoffCoords([-1 / np.sqrt(3)])
    u = reconstruct_finite_gap(z)
    assert_allclose(u.coeffs[:5], 0.5 ** np.arange(1, 6), atol=1e-14)
    assert_allclose(reconstruct_poles(z), [0.5], atol=1e-14)


def test_empty_coordinates():
    assert reconstruct_finite_gap(BirkhoffCoords([])).norm2() == 0
    assert reconstruct_resolvent(BirkhoffCoords([0.0, 0.0])).norm2() == 0


def test_poles_recovered():
    q = np.array([0.5, 0.3j, -0.2 + 0.25j])
    z = forward_map(from_poles(q), 6).trimmed()
    got = reconstruct_poles(z)
    assert_allclose(np.sort_complex(got), np.sort_complex(q), atol=1e-10)


def test_pi_u_matches_rational_form():
    q = np.array([0.4, -0.3j])
    z = forward_map(from_poles(q), 5).trimmed()
    pts = np.array([0.2, 0.5j, -0.7 + 0.1j])
    want = np.sum(q[None] * pts[:, None] / (1 - q[None] * pts[:, None]), axis=1)
    assert_allclose(pi_u_resolvent(z, pts), want, atol=1e-11)


def test_shift_rows_have_unit_norm():
    z = BirkhoffCoords([0.3, 0.2j, -0.4])
    M = spectral_data_from_zeta(z).Mmat
    assert_allclose(np.linalg.norm(M, axis=1), 1.0, atol=1e-12)


def test_resolvent_radius_guard():
    with pytest.raises(ConditioningError):
        reconstruct_resolvent(BirkhoffCoords([0.3]), r=0.99)


def test_pole_on_circle_rejected():
    with pytest.raises(InconsistentCoordinatesError):
        _check_poles(np.array([0.2, 1.0]), 1e-10)


def test_auto_K_tail():
    K = auto_K([0.5])
    tail = 2 * np.sum(0.5 ** (2 * np.arange(K + 1, K + 200)))
    assert np.sqrt(tail) < 1e-14


zetas = st.lists(
    st.tuples(st.floats(0.0, 0.6), st.floats(-np.pi, np.pi)),
    min_size=1,
    max_size=4,
)


@given(zetas)
@settings(max_examples=20, deadline=None)
def test_coordinates_roundtrip(data):
    z = BirkhoffCoords([r * np.exp(1j * a) for r, a in data])
    u = reconstruct_finite_gap(z)
    back = forward_map(u, z.N + 2)
    assert_allclose(back.zeta[: z.N], z.zeta, atol=1e-8)
    assert_allclose(back.zeta[z.N :], 0, atol=1e-8)


@given(zetas)
@settings(max_examples=20, deadline=None)
def test_two_inversions_agree(data):
    z = BirkhoffCoords([r * np.exp(1j * a) for r, a in data])
    v = reconstruct_finite_gap(z)
    w = reconstruct_resolvent(z)
    K = min(v.K, w.K)
    assert l2_distance(v.padded(K), w.padded(K)) < 1e-8


def test_potential_roundtrip_random(rng):
    for N in range(1, 6):
        r = rng.uniform(0.1, 0.75, N)
        spec = FiniteGapSpec(r * np.exp(2j * np.pi * rng.random(N)))
        u = from_poles(spec)
        v = reconstruct_finite_gap(forward_map(u, N + 3), K=u.K)
        assert l2_distance(u, v) < 1e-9



def test_tail_norm_of_truncation():
    z = forward_map(from_poles(FiniteGapSpec([0.5, 0.3j, -0.25])), 12).trimmed()
    tails = [z.tail_norm(N) for N in range(z.N + 1)]
    assert tails[-1] == 0.0
    assert np.all(np.diff(tails) <= 0)
    assert tails[0] ** 2 == pytest.approx(z.h_half_norm2())
    # each truncation drops open gaps and so changes the potential
    u = reconstruct_finite_gap(z)
    for N in range(1, z.N):
        assert tails[N] > 1e-3
        assert l2_distance(reconstruct_finite_gap(z.padded(N)), u) > 0
