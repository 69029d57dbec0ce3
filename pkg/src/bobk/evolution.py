"""Benjamin-Ono dynamics: quadrature in Birkhoff coordinates and a direct solver."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import AccuracyGuardError, AliasingError, InvalidTruncationError
from .forward import BirkhoffCoords, forward_map
from .fourier import (
    Potential,
    hilbert_transform,
    l2_distance,
    product_coeffs,
    synthesize,
    toeplitz_matrix,
)


def frequencies(gammas):
    """``omega_n = n^2 - 2 sum_k min(k, n) gamma_k`` for ``n = 1..len(gammas)``."""
    g = np.asarray(gammas, dtype=float)
    N = g.size
    n = np.arange(1, N + 1)
    # sum_k min(k,n) g_k = sum_{k<=n} k g_k + n sum_{k>n} g_k
    kg = np.cumsum(n * g)
    tail = np.concatenate([np.cumsum(g[::-1])[::-1][1:], [0.0]])
    return n**2 - 2.0 * (kg + n * tail)


def hamiltonian_actions(gammas):
    """``sum n^2 gamma_n - sum_n (sum_{k>=n} gamma_k)^2``."""
    g = np.asarray(gammas, dtype=float)
    n = np.arange(1, g.size + 1)
    s = np.cumsum(g[::-1])[::-1]
    return float(np.dot(n**2, g) - np.dot(s, s))


def hamiltonian_direct(u, G=None):
    """``(1/2)<|D|u|u> - (1/6pi) int u^3``.

    The cubic term is exact in Fourier space by default; with a grid size
    ``G`` it is the trapezoidal mean of ``u^3`` on ``G`` points, which is also
    exact once ``G > 3K``.
    """
    k = np.arange(1, u.K + 1)
    quad = float(np.dot(k, np.abs(u.coeffs) ** 2))
    if G is not None:
        vals = synthesize(u, G).values.real
        return quad - float(np.mean(vals**3)) / 3.0
    sq = product_coeffs(u, u)
    Ks = sq.size // 2
    full = u.full(Ks)
    cube_mean = float(np.real(np.dot(sq, full[::-1])))
    return quad - cube_mean / 3.0


def evolve_quadrature(z0, t):
    """``zeta_n(t) = zeta_n(0) exp(i omega_n t)``."""
    om = frequencies(z0.gammas)
    return BirkhoffCoords(z0.zeta * np.exp(1j * om * t))


@dataclass
class SolverConfig:
    """Settings of the integrating-factor RK4 solver.

    ``dt`` defaults to ``min(1e-3, 0.5/grid)``. ``dealias`` is ``"pad"``
    (quadratic term on a grid of ``2 * grid`` points) or ``"2/3"``.
    """

    grid: int = 256
    dt: float | None = None
    dealias: str = "pad"
    guard: float = 1e-8
    checkpoints: int = 10
    track_lambdas: int = -1
    max_splits: int = 6

    def step(self):
        return self.dt if self.dt is not None else min(1e-3, 0.5 / self.grid)


@dataclass
class EvolutionTrace:
    times: np.ndarray
    states: list
    config: object
    diagnostics: dict = field(default_factory=dict)

    def rows(self):
        """Rows ``t, norm2, mean, H, lambda_0..lambda_n`` for CSV export."""
        lam = self.diagnostics.get("lambdas")
        out = []
        for i, t in enumerate(self.times):
            row = [
                float(t),
                self.diagnostics["norm2"][i],
                self.diagnostics["mean"][i],
                self.diagnostics["H"][i],
            ]
            if lam is not None:
                row += list(lam[i])
            out.append(row)
        return out


class _Rhs:
    def __init__(self, G, dealias):
        self.G = G
        self.k = np.arange(G // 2)
        if dealias == "pad":
            self.n = 2 * G
            self.mask = None
        elif dealias == "2/3":
            self.n = G
            self.mask = self.k <= (2 * (G // 2 - 1)) // 3
        else:
            raise ValueError(f"unknown dealias rule {dealias!r}")

    def __call__(self, v):
        # v: uhat(k) for k = 0..G/2-1
        if self.mask is not None:
            v = v * self.mask
        X = np.zeros(self.n // 2 + 1, dtype=complex)
        X[: v.size] = v * self.n
        X[0] = X[0].real
        u = np.fft.irfft(X, self.n)
        sq = np.fft.rfft(u * u)[: v.size] / self.n
        out = -1j * self.k * sq
        if self.mask is not None:
            out *= self.mask
        return out


def _norm2(v):
    return v[0].real ** 2 + 2.0 * float(np.sum(np.abs(v[1:]) ** 2))


def _ifrk4(v, h, lin, rhs):
    E = np.exp(lin * h / 2)
    k1 = rhs(v)
    k2 = rhs(E * (v + h / 2 * k1))
    k3 = rhs(E * v + h / 2 * k2)
    k4 = rhs(E * E * v + h * E * k3)
    return E * E * v + h / 6 * (E * E * k1 + 2 * E * (k2 + k3) + k4)


def _guarded_step(v, h, lin, rhs, guard, depth):
    n0 = _norm2(v)
    w = _ifrk4(v, h, lin, rhs)
    if abs(_norm2(w) - n0) <= guard * (1 + n0):
        return w
    if depth == 0:
        raise AccuracyGuardError(f"norm drift above guard {guard} even at dt={h:.3e}")
    w = _guarded_step(v, h / 2, lin, rhs, guard, depth - 1)
    return _guarded_step(w, h / 2, lin, rhs, guard, depth - 1)


def evolve_direct(u0, T, cfg=None):
    """Pseudo-spectral solution of ``u_t = H u_xx - (u^2)_x`` up to time ``T``.

    The dispersive term is integrated exactly through the factor
    ``exp(i k|k| t)``; steps whose ``||u||^2`` drift exceeds ``cfg.guard``
    are split in halves.
    """
    cfg = cfg or SolverConfig()
    G = cfg.grid
    if G & (G - 1):
        raise ValueError("grid must be a power of two")
    nk = G // 2
    if u0.K >= nk:
        raise AliasingError(f"K={u0.K} does not fit on a grid of {G} points")
    v = np.zeros(nk, dtype=complex)
    v[0] = u0.mean
    v[1 : u0.K + 1] = u0.coeffs
    lin = 1j * np.arange(nk) ** 2.0
    rhs = _Rhs(G, cfg.dealias)

    nc = max(cfg.checkpoints, 1)
    per = max(int(np.ceil(T / (cfg.step() * nc))), 1)
    h = T / (per * nc)

    def snapshot(v):
        return Potential(v[1:].copy(), v[0].real)

    times = [0.0]
    states = [snapshot(v)]
    for c in range(nc):
        for _ in range(per):
            v = _guarded_step(v, h, lin, rhs, cfg.guard, cfg.max_splits)
        times.append((c + 1) * per * h)
        states.append(snapshot(v))

    trace = EvolutionTrace(np.array(times), states, cfg)
    trace.diagnostics = diagnostics(states, cfg.track_lambdas)
    return trace


def diagnostics(states, track_lambdas=-1):
    from .spectrum import compute_spectrum

    d = {
        "norm2": [s.norm2() for s in states],
        "mean": [s.mean for s in states],
        "H": [hamiltonian_direct(s) for s in states],
    }
    if track_lambdas >= 0:
        d["lambdas"] = [
            compute_spectrum(s.trimmed(1e-16), track_lambdas).lambdas[: track_lambdas + 1]
            for s in states
        ]
    return d


def measure_frequencies(trace, n_max, tol=1e-10):
    """Least-squares slope of the unwrapped ``arg zeta_n`` along a trace."""
    phases = np.array(
        [np.angle(forward_map(s.trimmed(1e-16), n_max, tol).zeta) for s in trace.states]
    )
    phases = np.unwrap(phases, axis=0)
    return np.polyfit(trace.times, phases, 1)[0]


def lax_residual(u, M):
    """Operator norm of ``dL/dt - [B, L]`` on the block ``0..M-2K``.

    ``dL/dt = -T_{u_t}`` with ``u_t = H u_xx - (u^2)_x``, and
    ``B = i (T_{|D|u} - T_u^2)``. Rows and columns beyond ``M - 2K`` feel the
    truncation and are excluded.
    """
    K = u.K
    m = M - 2 * K
    if m < 0:
        raise InvalidTruncationError(f"M={M} leaves no interior block for K={K}")
    k = np.arange(1, K + 1)
    sq = product_coeffs(u, u)
    Ks = sq.size // 2
    ks = np.arange(1, Ks + 1)
    Hu_xx = hilbert_transform(Potential(-(k**2) * u.coeffs))
    u_t = Potential(Hu_xx.padded(Ks).coeffs - 1j * ks * sq[Ks + 1 :], 0.0)
    absDu = Potential(k * u.coeffs, 0.0)

    T = toeplitz_matrix(u, M)
    L = np.diag(np.arange(M + 1.0)) - T
    B = 1j * (toeplitz_matrix(absDu, M) - T @ T)
    dL = -toeplitz_matrix(u_t, M)
    R = (dL - (B @ L - L @ B))[: m + 1, : m + 1]
    return float(np.linalg.norm(R, 2))


def recurrence_probe(u0, T_max, threshold, n_max=16, n_scan=None):
    """Times ``0 < t <= T_max`` with ``||u(t) - u0|| < threshold``.

    Candidates are local minima of the coordinate distance
    ``(2 sum n |zeta_n(t) - zeta_n(0)|^2)^{1/2}``, refined by a bounded scalar
    minimisation and confirmed on the reconstructed potentials.
    """
    from .inverse import reconstruct_finite_gap

    if isinstance(u0, BirkhoffCoords):
        z0 = u0.trimmed()
        ref = reconstruct_finite_gap(z0)
    else:
        ref = u0
        z0 = forward_map(u0, n_max).trimmed()
    if z0.N == 0 or threshold <= 0:
        return []
    om = frequencies(z0.gammas)
    n = np.arange(1, z0.N + 1)
    g = z0.gammas

    def dist(t):
        return np.sqrt(2.0 * np.sum(n * g * np.abs(np.exp(1j * om * t) - 1.0) ** 2))

    w = np.max(np.abs(om))
    n_scan = n_scan or int(np.ceil(T_max * w / (2 * np.pi) * 64)) + 64
    ts = np.linspace(0.0, T_max, n_scan + 1)
    ds = np.sqrt(2.0 * (np.abs(np.exp(1j * np.outer(ts, om)) - 1.0) ** 2 @ (n * g)))
    step = ts[1] - ts[0]
    found = []
    for i in range(1, n_scan + 1):
        left = ds[i - 1]
        right = ds[i + 1] if i < n_scan else np.inf
        if not (ds[i] <= left and ds[i] <= right) or ds[i] > 10 * threshold + 4 * step * w:
            continue
        lo, hi = ts[i] - step, min(ts[i] + step, T_max)
        t = minimize_scalar(dist, bounds=(lo, hi), method="bounded",
                            options={"xatol": 1e-12}).x
        if t <= 0 or (found and t - found[-1] < step):
            continue
        if dist(t) >= 10 * threshold:
            continue
        u_t = reconstruct_finite_gap(evolve_quadrature(z0, t))
        if l2_distance(u_t, ref) < threshold:
            found.append(float(t))
    return found
