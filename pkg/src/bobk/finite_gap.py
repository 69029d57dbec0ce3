"""Finite-gap potentials in closed form."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, InvalidPoleError
from .evolution import frequencies
from .fourier import HardyCoeffs, Potential
from .forward import BirkhoffCoords
from .inverse import auto_K


@dataclass(frozen=True, eq=False)
class FiniteGapSpec:
    """Poles ``q_0..q_{N-1}`` in the punctured unit disc.

    ``Q(z) = prod (1 - q_j z)`` then has ``Q(0) = 1`` and all roots outside
    the closed disc.
    """

    poles: np.ndarray

    def __post_init__(self):
        q = np.atleast_1d(np.asarray(self.poles, dtype=complex))
        if q.size == 0:
            raise InvalidPoleError("at least one pole is required")
        r = np.abs(q)
        if np.any(r >= 1.0) or np.any(r == 0.0):
            raise InvalidPoleError(f"pole moduli must lie in (0, 1), got {r}")
        q.setflags(write=False)
        object.__setattr__(self, "poles", q)

    @property
    def N(self):
        return self.poles.size

    def Q_coeffs(self):
        """Coefficients of ``Q`` in ascending powers; ``Q_coeffs()[0] == 1``."""
        return np.poly(self.poles)


def from_poles(spec, K=None):
    """``uhat(k) = sum_j q_j^k``; ``K`` defaults to an l2 tail below 1e-14.

    Coincident poles are allowed; the potential may then have fewer open gaps.
    """
    if not isinstance(spec, FiniteGapSpec):
        spec = FiniteGapSpec(spec)
    q = spec.poles
    K = auto_K(q) if K is None else K
    k = np.arange(1, K + 1)
    return Potential(np.sum(q[None, :] ** k[:, None], axis=1), 0.0)


def poisson_form(spec, x):
    """``sum_j (P_{r_j}(x + alpha_j) - 1)`` with the Poisson kernel ``P_r``."""
    if not isinstance(spec, FiniteGapSpec):
        spec = FiniteGapSpec(spec)
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for q in spec.poles:
        r, a = abs(q), np.angle(q)
        out += (1 - r**2) / (1 - 2 * r * np.cos(x + a) + r**2) - 1.0
    return out


@dataclass(frozen=True)
class OneGap:
    """Exact data of the one-gap potential ``N w e^{iNx}/(1 - w e^{iNx}) + c.c.``."""

    N: int
    w: complex

    def __post_init__(self):
        if self.N < 1:
            raise InvalidParameterError("N must be >= 1")
        if not 0 < abs(self.w) < 1:
            raise InvalidParameterError(f"|w| = {abs(self.w)} not in (0, 1)")
        object.__setattr__(self, "w", complex(self.w))

    @property
    def gamma(self):
        a = abs(self.w) ** 2
        return self.N * a / (1 - a)

    @property
    def gammas(self):
        g = np.zeros(self.N)
        g[-1] = self.gamma
        return g

    @property
    def zeta(self):
        """``zeta_N = -w sqrt(N + gamma_N)``; every other coordinate is zero."""
        z = np.zeros(self.N, dtype=complex)
        z[-1] = -self.w * np.sqrt(self.N + self.gamma)
        return BirkhoffCoords(z)

    def potential(self, K=None):
        if K is None:
            K = self.N * auto_K([self.w])
        c = np.zeros(K, dtype=complex)
        m = np.arange(1, K // self.N + 1)
        c[self.N * m - 1] = self.N * self.w**m
        return Potential(c, 0.0)

    def lambdas(self, n_max):
        n = np.arange(n_max + 1, dtype=float)
        return np.where(n < self.N, n - self.gamma, n)

    def one_fn(self, n):
        """``<1|f_n>``: ``sqrt(N/(N+gamma))`` at 0, ``-w`` at ``N``, else 0."""
        if n == 0:
            return np.sqrt(1 - abs(self.w) ** 2)
        return -self.w if n == self.N else 0.0

    def eigenfunction(self, n, M):
        """Fourier coefficients ``0..M`` of the normalised ``f_n``."""
        N, w = self.N, self.w
        a = np.zeros(M + 1, dtype=complex)
        s = 1 - abs(w) ** 2
        if n < N:
            idx = np.arange(n, M + 1, N)
            a[idx] = np.sqrt(s) * w ** np.arange(idx.size)
        else:
            a[n - N] = -np.conj(w)
            idx = np.arange(n, M + 1, N)
            a[idx] += s * w ** np.arange(idx.size)
        return HardyCoeffs(a)


def one_gap_closed_form(N, w):
    return OneGap(N, w)


def traveling_wave_speed(N, w):
    """Speed ``c = omega_N / N``; the solution is ``u_0(x + c t)``."""
    g = OneGap(N, w).gammas
    return float(frequencies(g)[N - 1] / N)
