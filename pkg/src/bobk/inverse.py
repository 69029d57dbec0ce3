"""Reconstruction of a potential from its Birkhoff coordinates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConditioningError, InconsistentCoordinatesError
from .forward import BirkhoffCoords, kappa_weights
from .fourier import Potential

ZETA_FLOOR = 1e-10
ROOT_FLOOR = 1e-10


@dataclass(frozen=True, eq=False)
class SpectralData:
    """Spectral quantities of the ``N``-gap potential with given coordinates.

    ``Mmat`` is the matrix of ``S*`` in the eigenbasis, ``Mmat[n, p] =
    <f_p|S f_n>``, for rows ``0..N`` and columns ``0..N+1``; every other
    entry of those rows vanishes.
    """

    lambdas: np.ndarray
    gammas: np.ndarray
    kappas: np.ndarray
    mus: np.ndarray
    one_fn: np.ndarray
    Mmat: np.ndarray

    @property
    def N(self):
        return self.gammas.size

    @property
    def X(self):
        return -self.lambdas[: self.N + 1] * self.one_fn

    @property
    def Y(self):
        return self.one_fn


def spectral_data_from_zeta(z):
    zeta = np.asarray(z.zeta, dtype=complex)
    N = zeta.size
    g = np.abs(zeta) ** 2
    tails = np.concatenate([np.cumsum(g[::-1])[::-1], [0.0]])  # sum_{k>=n+1}
    lam = np.arange(N + 1) - tails
    w = kappa_weights(lam, g, N)
    one_fn = np.sqrt(w.kappa).astype(complex)
    one_fn[1:] *= zeta
    fp1 = np.conj(one_fn)

    Mmat = np.zeros((N + 1, N + 2), dtype=complex)
    p = np.arange(N + 1)
    for n in range(N):
        s = np.sqrt(w.mu[n])
        with np.errstate(divide="ignore", invalid="ignore"):
            row = s * zeta[n] * fp1 / (np.sqrt(w.kappa[n + 1]) * (lam[p] - lam[n] - 1.0))
        row[n + 1] = s
        Mmat[n, : N + 1] = row
    Mmat[N, N + 1] = 1.0
    return SpectralData(lam, g, w.kappa, w.mu, one_fn, Mmat)


def auto_K(poles, tail=1e-14):
    """Smallest ``K`` whose discarded tail has l2 mass below ``tail``."""
    r = float(np.max(np.abs(poles), initial=0.0))
    if r == 0.0:
        return 0
    n = len(poles)
    K = 1
    # 2 sum_{k>K} (n r^k)^2 = 2 n^2 r^{2K+2} / (1 - r^2)
    while 2 * n**2 * r ** (2 * K + 2) / (1 - r**2) >= tail**2:
        K += 1
    return K


def _check_poles(q, root_floor):
    big = np.abs(q)
    if np.any(big >= 1.0 / (1.0 + root_floor)):
        raise InconsistentCoordinatesError(
            f"Q has a root with modulus {1 / big.max():.6g} <= 1"
        )
    if np.any(big == 0.0):
        raise InconsistentCoordinatesError("deg Q < N: a pole vanished")


def reconstruct_poles(z, zeta_floor=ZETA_FLOOR, root_floor=ROOT_FLOOR):
    """Poles ``q_j`` with ``Q(z) = det(Id - z M_{N-1}) = prod (1 - q_j z)``."""
    z = z.trimmed(zeta_floor)
    if z.N == 0:
        return np.zeros(0, dtype=complex)
    Mn = spectral_data_from_zeta(z).Mmat[: z.N, : z.N]
    q = np.linalg.eigvals(Mn)
    _check_poles(q, root_floor)
    return q


def reconstruct_finite_gap(z, K=None, zeta_floor=ZETA_FLOOR, root_floor=ROOT_FLOOR):
    """Finite-gap potential from coordinates via the determinant formula.

    ``Pi u(z) = sum_j q_j z / (1 - q_j z)`` with ``q_j`` the eigenvalues of the
    leading ``N x N`` block of ``M``; the Fourier coefficients are the power
    sums ``sum_j q_j^k = tr(M^k)``, which avoids resolving individual
    eigenvalues when poles cluster.
    """
    z = z.trimmed(zeta_floor)
    if z.N == 0:
        return Potential.zero(K or 0)
    Mn = spectral_data_from_zeta(z).Mmat[: z.N, : z.N]
    q = np.linalg.eigvals(Mn)
    _check_poles(q, root_floor)
    K = auto_K(q) if K is None else K
    c = np.empty(K, dtype=complex)
    P = np.eye(z.N, dtype=complex)
    for k in range(K):
        P = P @ Mn
        c[k] = np.trace(P)
    return Potential(c, 0.0)


def reconstruct_resolvent(z, r=0.9, n_samples=512, K=None, r_max=0.98, cond_max=1e8):
    """Independent inversion through ``Pi u(z) = <(Id - z M)^{-1} X | Y>``.

    ``Pi u`` is sampled on the circle of radius ``r``; the DFT of the samples
    gives ``uhat(k) r^k``. Roundoff is amplified by ``r^{-k}``, so by default
    only modes with ``r^{-k} <= 1e6`` are returned.
    """
    if not 0 < r <= r_max:
        raise ConditioningError(f"radius r={r} outside (0, {r_max}]")
    z = z.trimmed(ZETA_FLOOR)
    if K is None:
        K = min(int(np.log(1e6) / np.log(1.0 / r)), n_samples // 2 - 1)
    if z.N == 0:
        return Potential.zero(K)
    sd = spectral_data_from_zeta(z)
    MN = sd.Mmat[:, : z.N + 1]
    theta = 2 * np.pi * np.arange(n_samples) / n_samples
    zc = r * np.exp(1j * theta)
    A = np.eye(z.N + 1)[None] - zc[:, None, None] * MN[None]
    cond = np.linalg.cond(A)
    if np.max(cond) > cond_max:
        raise ConditioningError(f"Id - zM condition number {np.max(cond):.2e}")
    xi = np.linalg.solve(A, np.broadcast_to(sd.X, (n_samples, z.N + 1))[..., None])
    vals = xi[..., 0] @ np.conj(sd.Y)
    a = np.fft.fft(vals) / n_samples
    k = np.arange(1, K + 1)
    return Potential(a[1 : K + 1] / r**k, 0.0)


def pi_u_resolvent(z, points):
    """``Pi u`` at points of the open unit disc, by the resolvent formula."""
    z = z.trimmed(ZETA_FLOOR)
    points = np.atleast_1d(np.asarray(points, dtype=complex))
    if z.N == 0:
        return np.zeros(points.shape, dtype=complex)
    sd = spectral_data_from_zeta(z)
    MN = sd.Mmat[:, : z.N + 1]
    A = np.eye(z.N + 1)[None] - points[:, None, None] * MN[None]
    xi = np.linalg.solve(A, np.broadcast_to(sd.X, (points.size, z.N + 1))[..., None])
    return xi[..., 0] @ np.conj(sd.Y)


__all__ = [
    "BirkhoffCoords",
    "SpectralData",
    "spectral_data_from_zeta",
    "reconstruct_poles",
    "reconstruct_finite_gap",
    "reconstruct_resolvent",
    "pi_u_resolvent",
    "auto_K",
]
