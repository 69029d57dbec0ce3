"""Spectrum of the truncated Lax operator, phase-normalised eigenbasis and bands."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np
from scipy.linalg import eigh, eigvalsh

from .errors import ConvergenceError, InvalidSpectrumError, PhaseDegeneracyError
from .fourier import default_truncation, lax_matrix

PHASE_FLOOR = 1e-8
GAMMA_TOL = 1e-12
MAX_DOUBLINGS = 6


@dataclass(frozen=True, eq=False)
class LaxSpectrum:
    """Eigen-decomposition of ``L_u`` truncated to modes ``0..M``.

    ``gammas[n-1]`` is the gap ``gamma_n``; column ``n`` of ``eigvecs`` is
    ``f_n`` in the Fourier basis of the Hardy space. Only indices
    ``0..trusted_count`` passed both the doubling and the residual test.
    """

    M: int
    lambdas: np.ndarray
    gammas: np.ndarray
    eigvecs: np.ndarray
    trusted_count: int
    residuals: np.ndarray
    mean: float = 0.0

    @property
    def one_fn(self):
        """``<1|f_n>`` for every column."""
        return np.conj(self.eigvecs[0])

    def gamma(self, n):
        return float(self.gammas[n - 1])

    def trusted_lambdas(self):
        return self.lambdas[: self.trusted_count + 1]

    def trusted_gammas(self):
        return self.gammas[: self.trusted_count]

    def fSf(self):
        """``<f_{n+1}|S f_n>`` for ``n = 0..M-1``."""
        V = self.eigvecs
        return np.einsum("kn,kn->n", V[1:, 1:], np.conj(V[:-1, :-1]))


def _edge_coupling(u, M):
    # rows M+1..M+K of the infinite matrix restricted to columns 0..M
    K = u.K
    C = np.zeros((K, M + 1), dtype=complex)
    for i in range(K):
        n = M + 1 + i
        for k in range(1, K + 1):
            m = n - k
            if 0 <= m <= M:
                C[i, m] = -u.coeffs[k - 1]
    return C


def eigen_residuals(u, M, V):
    """Residual ``||L_u f - lambda f||`` in the untruncated operator.

    Inside the truncation the eigen-equation holds to roundoff, so the only
    contribution comes from the coupling of the top modes to ``n > M``.
    """
    if u.K == 0:
        return np.zeros(V.shape[1])
    return np.linalg.norm(_edge_coupling(u, M) @ V, axis=0)


def _gaps(lambdas, trusted, tol_gamma=GAMMA_TOL):
    g = np.diff(lambdas) - 1.0
    floor = tol_gamma * (1.0 + np.abs(lambdas[1:]))
    bad = np.nonzero(g[:trusted] < -floor[:trusted])[0]
    if bad.size:
        n = bad[0] + 1
        raise InvalidSpectrumError(f"gap gamma_{n} = {g[n - 1]:.3e} is negative")
    return np.maximum(g, 0.0)


def solve_fixed(u, M):
    """Single dense solve at truncation ``M``; returns ``(lambdas, V)``."""
    return eigh(lax_matrix(u, M))


def compute_spectrum(u, n_max, tol=1e-10, M=None, max_doublings=MAX_DOUBLINGS):
    """Converged, phase-normalised spectrum of ``L_u``.

    The truncation starts at ``M`` (default ``max(4K, 2 n_max + 16)``) and is
    doubled until the eigenvalues ``0..n_max`` agree between ``M`` and ``2M``
    to within ``tol`` and their residuals are below ``10 tol (1 + |lambda|)``.
    The decomposition at ``2M`` is returned.
    """
    if n_max < 0 or tol <= 0:
        raise ValueError("need n_max >= 0 and tol > 0")
    M = M or default_truncation(u.K, n_max)
    coarse = eigvalsh(lax_matrix(u, M))
    for _ in range(max_doublings + 1):
        fine, V = solve_fixed(u, 2 * M)
        diff = np.abs(coarse - fine[: M + 1])
        res = eigen_residuals(u, 2 * M, V)
        ok = (diff < tol) & (res[: M + 1] <= 10 * tol * (1 + np.abs(fine[: M + 1])))
        if n_max <= M and ok[: n_max + 1].all():
            break
        coarse, M = fine, 2 * M
    else:
        raise ConvergenceError(
            f"eigenvalues 0..{n_max} not converged at M={M}",
            previous=coarse[: n_max + 1],
            last=fine[: n_max + 1],
        )
    trusted = int(np.argmin(ok)) - 1 if not ok.all() else M
    spec = LaxSpectrum(
        M=2 * M,
        lambdas=fine,
        gammas=_gaps(fine, trusted),
        eigvecs=V,
        trusted_count=trusted,
        residuals=res,
        mean=u.mean,
    )
    return normalize_phases(spec)


def normalize_phases(spec, phase_floor=PHASE_FLOOR):
    """Fix eigenvector phases: ``<1|f_0> > 0`` and ``<f_{n+1}|S f_n> > 0``.

    Tiny overlaps inside the trusted range raise; beyond it the column is left
    as it is, since the truncation edge is not expected to be resolved there.
    """
    V = spec.eigvecs.copy()
    a = V[0, 0]
    if abs(a) < phase_floor:
        raise PhaseDegeneracyError(f"|<1|f_0>| = {abs(a):.2e} below floor")
    V[:, 0] *= np.conj(a) / abs(a)
    for n in range(V.shape[1] - 1):
        s = np.vdot(V[:-1, n], V[1:, n + 1])
        if abs(s) < phase_floor:
            if n + 1 <= spec.trusted_count:
                raise PhaseDegeneracyError(
                    f"|<f_{n + 1}|S f_{n}>| = {abs(s):.2e} below floor; increase M"
                )
            continue
        V[:, n + 1] *= np.conj(s) / abs(s)
    return replace(spec, eigvecs=V)


class Band(NamedTuple):
    n: int
    lo: float
    hi: float
    gap_after: float


def band_report(spec):
    """Bands ``[lambda_n, lambda_n + 1]`` of the operator on the line."""
    bands = []
    for n in range(spec.trusted_count + 1):
        lo = float(spec.lambdas[n])
        gap = float(spec.gammas[n]) if n < spec.gammas.size else float("nan")
        bands.append(Band(n, lo, lo + 1.0, gap))
    return bands
