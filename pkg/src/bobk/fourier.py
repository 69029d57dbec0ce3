"""Periodic functions on the torus and the Hardy-space calculus.

Conventions: ``u(x) = sum_k uhat(k) exp(ikx)`` with
``uhat(k) = (1/2pi) int u(x) exp(-ikx) dx`` and the normalised inner product
``<f|g> = (1/2pi) int f conj(g) dx``, so that ``||exp(ikx)|| = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz

from .errors import AliasingError, InvalidGridError, InvalidTruncationError


def _frozen(a, dtype=complex):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Potential:
    """Real 2pi-periodic function stored by its positive Fourier modes.

    ``coeffs[k-1]`` is ``uhat(k)`` for ``k = 1..K``; negative modes are the
    conjugates, so the represented function is real by construction.
    """

    coeffs: np.ndarray
    mean: float = 0.0

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if c.ndim != 1:
            raise ValueError("coeffs must be one-dimensional")
        object.__setattr__(self, "coeffs", _frozen(c))
        object.__setattr__(self, "mean", float(self.mean))

    @classmethod
    def zero(cls, K=0):
        return cls(np.zeros(K, dtype=complex))

    @classmethod
    def from_modes(cls, modes, mean=0.0):
        """Build from a ``{k: uhat(k)}`` mapping with ``k >= 1``."""
        K = max(modes, default=0)
        c = np.zeros(K, dtype=complex)
        for k, v in modes.items():
            if k < 1:
                raise ValueError("only positive modes may be given")
            c[k - 1] = v
        return cls(c, mean)

    @property
    def K(self):
        return self.coeffs.size

    def coeff(self, k):
        """``uhat(k)`` for any integer ``k``."""
        if k == 0:
            return complex(self.mean)
        if abs(k) > self.K:
            return 0j
        c = self.coeffs[abs(k) - 1]
        return complex(c) if k > 0 else complex(np.conj(c))

    def full(self, K=None):
        """Coefficients for ``k = -K..K`` (index ``k + K``)."""
        K = self.K if K is None else K
        pos = self.padded(K).coeffs
        return np.concatenate([np.conj(pos[::-1]), [self.mean], pos])

    def padded(self, K):
        """Same function with storage truncated or zero-extended to ``K``."""
        c = np.zeros(K, dtype=complex)
        n = min(K, self.K)
        c[:n] = self.coeffs[:n]
        return Potential(c, self.mean)

    def trimmed(self, floor=0.0):
        """Drop trailing modes with modulus ``<= floor``."""
        nz = np.nonzero(np.abs(self.coeffs) > floor)[0]
        K = nz[-1] + 1 if nz.size else 0
        return Potential(self.coeffs[:K], self.mean)

    def norm2(self):
        """``||u||^2 = mean^2 + 2 sum |uhat(k)|^2``."""
        return self.mean**2 + 2.0 * float(np.sum(np.abs(self.coeffs) ** 2))

    def norm(self):
        return np.sqrt(self.norm2())

    def translate(self, tau):
        """The potential ``x -> u(x + tau)``."""
        k = np.arange(1, self.K + 1)
        return Potential(self.coeffs * np.exp(1j * k * tau), self.mean)

    def reflect(self):
        """The potential ``x -> u(-x)``."""
        return Potential(np.conj(self.coeffs), self.mean)

    def dilate(self, K):
        """The ``2pi/K``-periodic potential ``x -> u(K x)``."""
        c = np.zeros(self.K * K, dtype=complex)
        c[K - 1 :: K] = self.coeffs
        return Potential(c, self.mean)

    def is_even(self, tol=0.0):
        return bool(np.all(np.abs(self.coeffs.imag) <= tol))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        k = np.arange(1, self.K + 1)
        h = np.exp(1j * np.multiply.outer(x, k)) @ self.coeffs
        return self.mean + 2.0 * h.real

    def __add__(self, other):
        K = max(self.K, other.K)
        return Potential(
            self.padded(K).coeffs + other.padded(K).coeffs, self.mean + other.mean
        )

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, s):
        s = float(s)
        return Potential(s * self.coeffs, s * self.mean)

    __rmul__ = __mul__

    def __neg__(self):
        return -1.0 * self


def l2_distance(u, v):
    return (u - v).norm()


@dataclass(frozen=True, eq=False)
class HardyCoeffs:
    """Element of the Hardy space: coefficients ``a_0..a_M`` of ``exp(inx)``."""

    a: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", _frozen(np.atleast_1d(self.a)))

    @property
    def M(self):
        return self.a.size - 1

    def norm(self):
        return float(np.linalg.norm(self.a))

    def inner(self, other):
        """``<self|other>``, zero-extending the shorter operand."""
        n = min(self.a.size, other.a.size)
        return complex(np.vdot(other.a[:n], self.a[:n]))

    def shift(self):
        """``S h = exp(ix) h``; the truncation grows by one."""
        return HardyCoeffs(np.concatenate([[0.0], self.a]))

    def shift_adjoint(self):
        """``S* h``: drop ``a_0`` and move every index down."""
        if self.a.size == 1:
            return HardyCoeffs(np.zeros(1))
        return HardyCoeffs(self.a[1:])

    def padded(self, M):
        a = np.zeros(M + 1, dtype=complex)
        n = min(M + 1, self.a.size)
        a[:n] = self.a[:n]
        return HardyCoeffs(a)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(1j * np.multiply.outer(x, np.arange(self.a.size))) @ self.a


def hilbert_transform(u):
    """Multiplier ``-i sign(k)``; the mean is sent to zero.

    The transform of a real function is real, so the result is again a
    :class:`Potential`.
    """
    return Potential(-1j * u.coeffs, 0.0)


def hardy_project(f):
    """Szego projection of a full coefficient sequence indexed ``-K..K``."""
    f = np.asarray(f, dtype=complex)
    if f.size % 2 != 1:
        raise ValueError("full coefficient sequence must have odd length 2K+1")
    K = f.size // 2
    return HardyCoeffs(f[K:])


def toeplitz_matrix(u, M):
    """Matrix of ``T_u`` on ``span(e_0..e_M)``: entry ``(n, m) = uhat(n - m)``."""
    col = np.zeros(M + 1, dtype=complex)
    col[0] = u.mean
    n = min(M, u.K)
    col[1 : n + 1] = u.coeffs[:n]
    return toeplitz(col, np.conj(col))


def lax_matrix(u, M):
    """Truncated Lax operator ``D - T_u`` on the first ``M + 1`` Fourier modes."""
    if M < 1:
        raise InvalidTruncationError(f"truncation M={M} must be >= 1")
    L = -toeplitz_matrix(u, M)
    L[np.diag_indices(M + 1)] += np.arange(M + 1)
    return L


def default_truncation(K, n_max):
    return max(4 * K, 2 * n_max + 16)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples at ``x_j = 2 pi j / G``, ``G`` a power of two."""

    values: np.ndarray

    def __post_init__(self):
        v = np.atleast_1d(np.asarray(self.values, dtype=complex))
        G = v.size
        if G < 1 or G & (G - 1):
            raise InvalidGridError(f"grid size {G} is not a power of two")
        object.__setattr__(self, "values", _frozen(v))

    @property
    def G(self):
        return self.values.size

    @property
    def x(self):
        return 2 * np.pi * np.arange(self.G) / self.G


def synthesize(u, G):
    """Sample ``u`` on ``G`` equispaced points."""
    if G < 2 * u.K + 2:
        raise AliasingError(f"grid G={G} too small for K={u.K} (need G >= 2K+2)")
    spec = np.zeros(G, dtype=complex)
    spec[0] = u.mean
    spec[1 : u.K + 1] = u.coeffs
    spec[G - u.K :] = np.conj(u.coeffs[::-1])
    # imaginary part is pure roundoff for a real potential; keep it so the
    # GridFunction round-trips exactly
    return GridFunction(np.fft.ifft(spec) * G)


def analyze(g, K):
    """Fourier coefficients ``1..K`` and mean of a sampled real function."""
    if g.G < 2 * K + 2:
        raise AliasingError(f"grid G={g.G} too small for K={K} (need G >= 2K+2)")
    spec = np.fft.fft(g.values) / g.G
    return Potential(spec[1 : K + 1], spec[0].real)


def product_coeffs(u, v):
    """Exact full coefficient sequence (``-(Ku+Kv)..Ku+Kv``) of ``u * v``."""
    return np.convolve(u.full(), v.full())


def square(u):
    """``u^2`` as an exact band-limited potential."""
    f = product_coeffs(u, u)
    K = f.size // 2
    return Potential(f[K + 1 :], f[K].real)
