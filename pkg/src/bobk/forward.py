"""Birkhoff coordinates of a potential and the spectral identities behind them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import solve

from .errors import InvalidSpectrumError, PoleProximityError
from .fourier import lax_matrix
from .spectrum import compute_spectrum

ANGLE_FLOOR = 1e-12
DIST_FLOOR = 1e-6


@dataclass(frozen=True, eq=False)
class BirkhoffCoords:
    """Finite sequence ``zeta_1..zeta_N``; all later coordinates are zero."""

    zeta: np.ndarray

    def __post_init__(self):
        z = np.atleast_1d(np.asarray(self.zeta, dtype=complex))
        z.setflags(write=False)
        object.__setattr__(self, "zeta", z)

    @property
    def N(self):
        return self.zeta.size

    @property
    def gammas(self):
        return np.abs(self.zeta) ** 2

    @property
    def angles(self):
        """``arg zeta_n``; NaN where the action is below the angle floor."""
        phi = np.angle(self.zeta)
        return np.where(self.gammas < ANGLE_FLOOR, np.nan, phi)

    def get(self, n):
        return complex(self.zeta[n - 1]) if 1 <= n <= self.N else 0j

    def trimmed(self, floor=1e-10):
        """Drop trailing coordinates with ``|zeta_n| <= floor``."""
        nz = np.nonzero(np.abs(self.zeta) > floor)[0]
        return BirkhoffCoords(self.zeta[: nz[-1] + 1] if nz.size else [])

    def padded(self, N):
        z = np.zeros(N, dtype=complex)
        n = min(N, self.N)
        z[:n] = self.zeta[:n]
        return BirkhoffCoords(z)

    def rotate(self, tau):
        """Coordinates of the translate ``u(. + tau)``."""
        n = np.arange(1, self.N + 1)
        return BirkhoffCoords(self.zeta * np.exp(1j * n * tau))

    def h_half_norm2(self):
        n = np.arange(1, self.N + 1)
        return float(np.sum(n * self.gammas))

    def tail_norm(self, N):
        """``(sum_{n>N} n |zeta_n|^2)^{1/2}``: what truncating to ``N`` gaps discards."""
        n = np.arange(N + 1, self.N + 1)
        return float(np.sqrt(np.sum(n * self.gammas[N:])))

    def parseval(self):
        """``2 sum n |zeta_n|^2``, equal to ``||u||^2`` for mean-zero ``u``."""
        return 2.0 * self.h_half_norm2()


@dataclass(frozen=True, eq=False)
class KappaWeights:
    kappa: np.ndarray  # kappa_0..kappa_N
    mu: np.ndarray  # mu_1..mu_N
    tail_bound: float


def _extend(lambdas, gammas, n):
    # continue the spectrum with closed gaps up to index n
    lam = np.asarray(lambdas, dtype=float)
    gam = np.asarray(gammas, dtype=float)
    P = gam.size
    if lam.size < P + 1:
        raise InvalidSpectrumError("need one more eigenvalue than gaps")
    lam = lam[: P + 1]
    if n > P:
        lam = np.concatenate([lam, lam[P] + np.arange(1, n - P + 1)])
        gam = np.concatenate([gam, np.zeros(n - P)])
    return lam, gam


def _factor(gam, num_den):
    if np.any(num_den == 0):
        raise InvalidSpectrumError("coincident eigenvalues in product formula")
    return 1.0 - gam / num_den


def kappa_weights(lambdas, gammas, n_max, norm2=None, mean=0.0):
    """Product formulas for ``kappa_0..kappa_{n_max}`` and ``mu_1..mu_{n_max}``.

    All supplied gaps enter the products; later gaps count as closed. The
    returned ``tail_bound`` estimates the neglected ``sum_{p>P} gamma_p``, from
    the Parseval deficit when ``norm2`` is known and otherwise from the mean
    trace formula.
    """
    P = len(gammas)
    lam, gam = _extend(lambdas, gammas, max(n_max, P))
    open_ = np.nonzero(gam > 0)[0] + 1  # gap indices p with gamma_p > 0
    g = gam[open_ - 1]
    lp = lam[open_]

    kappa = np.empty(n_max + 1)
    kappa[0] = np.prod(_factor(g, lp - lam[0]))
    mu = np.empty(n_max)
    for n in range(1, n_max + 1):
        keep = open_ != n
        f = _factor(g[keep], lp[keep] - lam[n])
        kappa[n] = np.prod(f) / (lam[n] - lam[0])
        den = _factor(g[keep], lp[keep] - lam[n - 1] - 1.0)
        mu[n - 1] = (1.0 - gam[n - 1] / (lam[n] - lam[0])) * np.prod(f / den)

    gsum = float(np.sum(gammas))
    if norm2 is not None:
        deficit = norm2 - mean**2 - 2.0 * float(np.dot(np.arange(1, P + 1), gammas))
        tail = max(deficit, 0.0) / (2.0 * (P + 1))
    else:
        tail = max(-mean - float(lam[0]) - gsum, 0.0)
    return KappaWeights(kappa, mu, tail)


def gap_budget(u, floor=1e-10):
    """Initial guess for the number of gaps of ``u`` that matter.

    Gaps track the decay of the Fourier coefficients, so twice the index of
    the last coefficient above ``floor`` is a reasonable start.
    """
    return max(2 * u.trimmed(floor).K, 16)


def resolved_spectrum(u, n_max=0, tol=1e-10, gap_floor=1e-12, max_rounds=4):
    """Spectrum whose trusted range reaches past every non-negligible gap.

    Starting from ``gap_budget(u)``, the requested range is doubled until the
    last quarter of the trusted gaps lies below ``gap_floor`` or below the
    eigensolver roundoff ``64 eps M (1 + ||u||)``, whichever is larger.
    """
    n = max(n_max, gap_budget(u))
    eps = np.finfo(float).eps
    for _ in range(max_rounds):
        spec = compute_spectrum(u, n, tol)
        P = spec.trusted_count
        floor = max(gap_floor, 64 * eps * spec.M * (1 + u.norm()))
        if np.max(spec.gammas[P - P // 4 : P], initial=0.0) < floor:
            return spec
        n = max(2 * n, P + 1)
    return spec


class BirkhoffData(NamedTuple):
    coords: BirkhoffCoords
    spectrum: object
    weights: KappaWeights


def birkhoff_data(u, n_max, tol=1e-10, spec=None):
    """Forward map together with the spectrum and weights it was built from.

    By default the spectrum comes from :func:`resolved_spectrum`, so the
    products defining ``kappa_n`` see every non-negligible gap.
    """
    spec = spec or resolved_spectrum(u, n_max, tol)
    P = spec.trusted_count
    w = kappa_weights(
        spec.lambdas[: P + 1], spec.gammas[:P], n_max, norm2=u.norm2(), mean=u.mean
    )
    if np.any(w.kappa <= 0):
        raise InvalidSpectrumError("non-positive kappa; spectrum is inconsistent")
    zeta = spec.one_fn[1 : n_max + 1] / np.sqrt(w.kappa[1:])
    return BirkhoffData(BirkhoffCoords(zeta), spec, w)


def forward_map(u, n_max, tol=1e-10):
    """Birkhoff coordinates ``zeta_n = <1|f_n> / sqrt(kappa_n)``, ``n = 1..n_max``.

    The mean of ``u`` does not change the eigenfunctions, so it is ignored.
    """
    return birkhoff_data(u, n_max, tol).coords


class GeneratingValue(NamedTuple):
    resolvent: complex
    product: complex
    abs_diff: float


def generating_function(u, lam, spec=None, tol=1e-10, dist_floor=DIST_FLOOR):
    """``<(L_u + lam)^{-1} 1 | 1>`` by a linear solve and by the gap product."""
    spec = spec or resolved_spectrum(u, 0, tol)
    P = spec.trusted_count
    lams = spec.lambdas[: P + 1]
    if np.min(np.abs(lams + lam)) < dist_floor:
        raise PoleProximityError(f"lambda={lam} within {dist_floor} of a pole")
    A = lax_matrix(u, spec.M) + lam * np.eye(spec.M + 1)
    e0 = np.zeros(spec.M + 1)
    e0[0] = 1.0
    res = complex(solve(A, e0)[0])
    prod = complex(np.prod(1.0 - spec.gammas[:P] / (lams[1:] + lam)) / (lams[0] + lam))
    return GeneratingValue(res, prod, abs(res - prod))


def generating_function_sweep(u, lams, spec=None, tol=1e-10):
    """Rows ``(lambda, resolvent, product, abs_diff)`` for real ``lams``."""
    spec = spec or resolved_spectrum(u, 0, tol)
    rows = []
    for lam in lams:
        g = generating_function(u, lam, spec=spec)
        rows.append((float(lam), g.resolvent.real, g.product.real, g.abs_diff))
    return rows


class TraceResiduals(NamedTuple):
    norm: float
    mean: float


def trace_residuals(u, spec):
    """Residuals of ``||u||^2 - <u|1>^2 = 2 sum n gamma_n`` and
    ``<u|1> = -lambda_0 - sum gamma_n`` over the trusted gaps."""
    g = spec.trusted_gammas()
    n = np.arange(1, g.size + 1)
    r1 = abs(u.norm2() - u.mean**2 - 2.0 * float(np.dot(n, g)))
    r2 = abs(u.mean + spec.lambdas[0] + float(np.sum(g)))
    return TraceResiduals(r1, r2)
