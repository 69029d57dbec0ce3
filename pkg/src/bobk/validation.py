"""Numerical checks of gradients, brackets and symmetries, and suite reports."""

from __future__ import annotations

import csv
import io
import json
import os
import platform
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.linalg import eigh, eigvalsh

from .errors import InvalidStepError, UndefinedAngleError
from .evolution import hamiltonian_actions, hamiltonian_direct, lax_residual
from .finite_gap import FiniteGapSpec, from_poles
from .forward import (
    ANGLE_FLOOR,
    birkhoff_data,
    forward_map,
    resolved_spectrum,
    generating_function,
    trace_residuals,
)
from .fourier import Potential, l2_distance, lax_matrix
from .inverse import reconstruct_finite_gap, reconstruct_resolvent
from .spectrum import LaxSpectrum, compute_spectrum, normalize_phases

H_MIN, H_MAX = 1e-7, 1e-2


def _check_step(h):
    if not H_MIN <= h <= H_MAX:
        raise InvalidStepError(f"step h={h} outside [{H_MIN}, {H_MAX}]")


def _directions(J):
    """Real basis ``1, 2cos jx, -2sin jx`` for ``j = 1..J`` as potentials."""
    dirs = [Potential.zero(J) + Potential([], 1.0)]
    for j in range(1, J + 1):
        c = np.zeros(J, dtype=complex)
        c[j - 1] = 1.0
        dirs.append(Potential(c))
        dirs.append(Potential(1j * c))
    return dirs


def _from_directional(d):
    """Full coefficients ``g(-J..J)`` from derivatives along ``_directions``."""
    d = np.asarray(d)
    J = (d.shape[0] - 1) // 2
    A, B = d[1::2], d[2::2]
    g = np.empty((2 * J + 1,) + d.shape[1:], dtype=complex)
    g[J] = d[0]
    g[J + 1 :] = (A + 1j * B) / 2
    g[:J][::-1] = (A - 1j * B) / 2
    return g


def _pairings(g, J):
    """Derivatives along ``_directions`` of a functional with gradient ``g``."""
    c = len(g) // 2
    out = [g[c]]
    for j in range(1, J + 1):
        gp = g[c + j] if j <= c else 0.0
        gm = g[c - j] if j <= c else 0.0
        out += [gp + gm, 1j * (gm - gp)]
    return np.array(out)


def modulus_square_coeffs(f, J):
    """Coefficients ``-J..J`` of ``|f|^2`` for ``f`` in the Hardy space."""
    f = np.asarray(f)
    M = f.size - 1
    g = np.zeros(2 * J + 1, dtype=complex)
    for k in range(0, min(J, M) + 1):
        g[J + k] = np.vdot(f[: M + 1 - k], f[k:])
        g[J - k] = np.conj(g[J + k])
    return g


def _fixed_spectrum(u, M):
    lam, V = eigh(lax_matrix(u, M))
    P = M // 2
    g = np.maximum(np.diff(lam) - 1.0, 0.0)
    spec = LaxSpectrum(M, lam, g, V, P, np.zeros(M + 1), u.mean)
    return normalize_phases(spec)


def _fixed_zeta(u, M, n_max):
    spec = _fixed_spectrum(u, M)
    data = birkhoff_data(u, n_max, spec=spec)
    return data.coords.zeta, spec.one_fn[: n_max + 1]


class GradientCheck(NamedTuple):
    lam: float
    gamma: float
    zeta: float | None


def _rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(a))))


def gradient_check(u, n, h_step=1e-4, K_test=None, tol=1e-10):
    """Relative mismatch of analytic gradients and central differences.

    ``grad lambda_n = -|f_n|^2`` and ``grad gamma_n = -|f_n|^2 + |f_{n-1}|^2``
    are paired with the constant and ``cos kx, sin kx`` for ``k <= K_test``
    (default ``min(K, 24) + 2``).
    At ``u = 0`` the coordinate gradient ``grad zeta_n(0) = -exp(-inx)/sqrt n``
    is checked as well.
    """
    _check_step(h_step)
    J = K_test or min(max(u.K, n, 1), 24) + 2
    spec = compute_spectrum(u, n + 1, tol)
    M = max(spec.M, 4 * J)
    _, V = eigh(lax_matrix(u, M))
    gl = -modulus_square_coeffs(V[:, n], J)
    gg = gl + modulus_square_coeffs(V[:, n - 1], J) if n >= 1 else None

    dirs = _directions(J)
    dl, dgam = [], []
    for v in dirs:
        lp = eigvalsh(lax_matrix(u + h_step * v, M))
        lm = eigvalsh(lax_matrix(u - h_step * v, M))
        dl.append((lp[n] - lm[n]) / (2 * h_step))
        if n >= 1:
            dgam.append(((lp[n] - lp[n - 1]) - (lm[n] - lm[n - 1])) / (2 * h_step))
    r_lam = _rel(_pairings(gl, J), dl)
    r_gam = _rel(_pairings(gg, J), dgam) if n >= 1 else 0.0

    r_zeta = None
    if n >= 1 and u.norm2() == 0.0:
        g = np.zeros(2 * J + 1, dtype=complex)
        g[J - n] = -1.0 / np.sqrt(n)
        dz = []
        for v in dirs:
            zp, _ = _fixed_zeta(u + h_step * v, M, n)
            zm, _ = _fixed_zeta(u - h_step * v, M, n)
            dz.append((zp[n - 1] - zm[n - 1]) / (2 * h_step))
        r_zeta = _rel(_pairings(g, J), dz)
    return GradientCheck(r_lam, r_gam, r_zeta)


class GradientEngine:
    """Gradients of spectral functionals at a fixed potential.

    ``lambda_n`` and ``gamma_n`` use the analytic formulas; ``zeta_n``,
    ``conj zeta_n``, ``phi_n = arg zeta_n`` and ``<1|f_n>`` come from one sweep
    of central differences over the real Fourier basis, at a fixed truncation
    so that both sides see the same discretisation.
    """

    def __init__(self, u, n_max, h_step=1e-4, J=None, tol=1e-10, gradient_tail=1e-12):
        _check_step(h_step)
        self.u, self.n_max, self.h = u, n_max, h_step
        spec = compute_spectrum(u, n_max + 1, tol)
        V = spec.eigvecs
        if J is None:
            # smallest J past which every |f_n|^2 coefficient is negligible
            J = max(u.K, 4)
            full = [modulus_square_coeffs(V[:, n], spec.M) for n in range(n_max + 1)]
            mags = np.max(np.abs(np.array(full)), axis=0)[spec.M :]
            big = np.nonzero(mags > gradient_tail)[0]
            J = max(J, int(big[-1]) if big.size else 0)
        self.J = J
        self.M = max(spec.M, 4 * J)
        self.spectrum = _fixed_spectrum(u, self.M)
        V = self.spectrum.eigvecs
        self.zeta, self.one_fn = _fixed_zeta(u, self.M, n_max)
        self._fsq = [modulus_square_coeffs(V[:, n], J) for n in range(n_max + 1)]

        dz, dphi, d1 = [], [], []
        for v in _directions(J):
            zp, op = _fixed_zeta(u + h_step * v, self.M, n_max)
            zm, om = _fixed_zeta(u - h_step * v, self.M, n_max)
            dz.append((zp - zm) / (2 * h_step))
            with np.errstate(divide="ignore", invalid="ignore"):
                dphi.append(np.angle(zp / zm) / (2 * h_step))
            d1.append((op - om) / (2 * h_step))
        self._dz = np.array(dz)
        self._dphi = np.array(dphi)
        self._d1 = np.array(d1)

    def gradient(self, F):
        """Full coefficients ``-J..J`` of the gradient of ``F = (kind, n)``."""
        kind, n = F
        if kind == "lambda":
            return -self._fsq[n]
        if kind == "gamma":
            return -self._fsq[n] + self._fsq[n - 1]
        if kind == "zeta":
            return _from_directional(self._dz[:, n - 1])
        if kind == "zetabar":
            return _from_directional(np.conj(self._dz[:, n - 1]))
        if kind == "phi":
            if abs(self.zeta[n - 1]) ** 2 < ANGLE_FLOOR:
                raise UndefinedAngleError(f"gamma_{n} below {ANGLE_FLOOR}; phi_{n} undefined")
            return _from_directional(self._dphi[:, n - 1])
        if kind == "one_fn":
            return _from_directional(self._d1[:, n])
        raise ValueError(f"unknown functional {kind!r}")

    def bracket(self, F, G):
        """``{F, G} = sum_j i j gF(j) gG(-j)``."""
        a, b = self.gradient(F), self.gradient(G)
        j = np.arange(-self.J, self.J + 1)
        return complex(np.sum(1j * j * a * b[::-1]))


def poisson_bracket(F, G, u, engine=None, h_step=1e-4):
    """Gardner bracket of two functionals given as ``(kind, n)`` pairs.

    ``kind`` is one of ``lambda``, ``gamma``, ``zeta``, ``zetabar``, ``phi``,
    ``one_fn``.
    """
    if engine is None:
        n_max = max(F[1], G[1], 1)
        engine = GradientEngine(u, n_max, h_step)
    return engine.bracket(F, G)


# ---------------------------------------------------------------- reports


@dataclass
class Check:
    label: str
    anchor: str
    residual: float
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.residual = float(self.residual)
        self.passed = bool(np.isfinite(self.residual) and self.residual <= self.tolerance)


@dataclass
class ValidationReport:
    suite: str
    checks: list = field(default_factory=list)
    environment: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def add(self, label, anchor, residual, tolerance):
        self.checks.append(Check(label, anchor, residual, tolerance))

    def extend(self, other):
        self.checks.extend(other.checks)
        for k, v in other.environment.items():
            self.environment.setdefault(k, v)

    def to_dict(self):
        return {
            "suite": self.suite,
            "passed": self.passed,
            "environment": self.environment,
            "checks": [asdict(c) for c in self.checks],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["label", "anchor", "residual", "tolerance", "passed"])
        for c in self.checks:
            w.writerow([c.label, c.anchor, repr(c.residual), repr(c.tolerance), int(c.passed)])
        return buf.getvalue()


def symmetry_suite(u, tau=0.7, n_max=8, tol=1e-8):
    """Translation, reflection, evenness, 2-periodicity and the
    ``{gamma_p, <1|f_n>}`` bracket at a band-limited ``u``."""
    rep = ValidationReport("symmetry", environment={"tau": tau, "n_max": n_max})
    z = forward_map(u, n_max).zeta
    n = np.arange(1, n_max + 1)

    zt = forward_map(u.translate(tau), n_max).zeta
    rep.add("translation", "zeta_n(u(.+tau)) = exp(in tau) zeta_n(u)",
            np.max(np.abs(zt - np.exp(1j * n * tau) * z)), tol)

    zr = forward_map(u.reflect(), n_max).zeta
    rep.add("reflection", "zeta_n(u(-.)) = conj zeta_n(u)", np.max(np.abs(zr - np.conj(z))), tol)

    even = 0.5 * (u + u.reflect())
    ze = forward_map(even, n_max).zeta
    rep.add("even_real", "u even => Im zeta_n = 0", np.max(np.abs(ze.imag)), tol)

    d2 = u.dilate(2)
    z2 = forward_map(d2, 2 * n_max).zeta
    rep.add("periodic_odd_vanish", "u pi-periodic => zeta_{2m+1} = 0", np.max(np.abs(z2[0::2])), tol)
    lam2 = compute_spectrum(d2, 2 * n_max).lambdas
    rep.add("periodic_ladder", "u pi-periodic => lambda_{2m+1} = lambda_{2m} + 1",
            np.max(np.abs(lam2[1 : 2 * n_max : 2] - lam2[0 : 2 * n_max - 1 : 2] - 1.0)), tol)

    # FD-based: {gamma_p, <1|f_n>} = i <1|f_n> delta_pn
    m = min(n_max, 3)
    eng = GradientEngine(u, m)
    err = 0.0
    for p in range(1, m + 1):
        for k in range(1, m + 1):
            b = eng.bracket(("gamma", p), ("one_fn", k))
            want = 1j * eng.one_fn[k] if p == k else 0.0
            err = max(err, abs(b - want))
    rep.add("gamma_one_fn_bracket", "{gamma_p, <1|f_n>} = i <1|f_n> delta_pn", err, 1e-4)
    rep.environment["M"] = eng.M
    return rep


def random_potential(rng, K_max=8, max_norm=2.0):
    """Random real mean-zero potential with ``K <= K_max`` and ``||u|| <= max_norm``."""
    K = int(rng.integers(1, K_max + 1))
    c = rng.normal(size=K) + 1j * rng.normal(size=K)
    c /= np.arange(1, K + 1)
    u = Potential(c)
    return u * (max_norm * rng.uniform(0.2, 1.0) / u.norm())


def random_poles(rng, N, r_lo=0.1, r_hi=0.75):
    r = rng.uniform(r_lo, r_hi, N)
    return FiniteGapSpec(r * np.exp(2j * np.pi * rng.random(N)))


def _fixture(name):
    from .io import load_fixture

    return load_fixture(name)


def _trace_suite(rng, count=5):
    rep = ValidationReport("trace")
    for i in range(count):
        u = random_potential(rng)
        spec = resolved_spectrum(u)
        tr = trace_residuals(u, spec)
        rep.add(f"trace_norm[{i}]", "||u||^2 - mean^2 = 2 sum n gamma_n", tr.norm, 1e-7)
        rep.add(f"trace_mean[{i}]", "mean = -lambda_0 - sum gamma_n", tr.mean, 1e-7)
        z = forward_map(u, spec.trusted_count)
        rep.add(f"parseval[{i}]", "2 sum n |zeta_n|^2 = ||u||^2",
                abs(z.parseval() - u.norm2()) / (1 + u.norm2()), 1e-7)
        H = hamiltonian_actions(spec.trusted_gammas())
        rep.add(f"hamiltonian[{i}]", "H(gamma) = H(u)", abs(H - hamiltonian_direct(u)), 1e-7)
        err = 0.0
        for lam in np.linspace(-spec.lambdas[0] + 0.37, -spec.lambdas[0] + 9.1, 6):
            g = generating_function(u, lam, spec=spec)
            err = max(err, g.abs_diff / abs(g.resolvent))
        rep.add(f"generating[{i}]", "<(L+lam)^-1 1|1> = prod(1 - gamma/(lambda+lam))/(lambda_0+lam)",
                err, 1e-7)
        rep.environment.setdefault("M", spec.M)
    return rep


def _gradient_suite(rng, n_max=3):
    rep = ValidationReport("gradient")
    u = from_poles(_fixture("two_gap"))
    for n in range(n_max + 1):
        r = gradient_check(u, n)
        rep.add(f"grad_lambda[{n}]", "grad lambda_n = -|f_n|^2", r.lam, 1e-6)
        if n >= 1:
            rep.add(f"grad_gamma[{n}]", "grad gamma_n = |f_{n-1}|^2 - |f_n|^2", r.gamma, 1e-6)
    for n in range(1, 4):
        r = gradient_check(Potential.zero(), n)
        rep.add(f"grad_zeta_origin[{n}]", "grad zeta_n(0) = -exp(-inx)/sqrt(n)", r.zeta, 1e-6)
    return rep


def _bracket_suite(rng):
    rep = ValidationReport("bracket")
    u = from_poles(_fixture("three_gap"))
    eng = GradientEngine(u, 3)
    rep.environment["M"] = eng.M
    e_ll = e_gg = e_gp = e_zz = e_anti = 0.0
    for p in range(1, 4):
        for n in range(1, 4):
            e_ll = max(e_ll, abs(eng.bracket(("lambda", p), ("lambda", n))))
            e_gg = max(e_gg, abs(eng.bracket(("gamma", p), ("gamma", n))))
            e_gp = max(e_gp, abs(eng.bracket(("gamma", p), ("phi", n)) - (p == n)))
            e_zz = max(e_zz, abs(eng.bracket(("zeta", p), ("zetabar", n)) + 1j * (p == n)))
            F, G = ("zeta", p), ("phi", n)
            e_anti = max(e_anti, abs(eng.bracket(F, G) + eng.bracket(G, F)))
    rep.add("lambda_lambda", "{lambda_p, lambda_n} = 0", e_ll, 1e-6)
    rep.add("gamma_gamma", "{gamma_p, gamma_n} = 0", e_gg, 1e-5)
    rep.add("gamma_phi", "{gamma_p, phi_n} = delta_pn", e_gp, 1e-4)
    rep.add("zeta_zetabar", "{zeta_n, conj zeta_k} = -i delta_nk", e_zz, 1e-4)
    rep.add("antisymmetry", "{F, G} = -{G, F}", e_anti, 1e-12)
    return rep


def _roundtrip_suite(rng, count=3):
    rep = ValidationReport("roundtrip")
    for i in range(count):
        N = int(rng.integers(1, 6))
        u = from_poles(random_poles(rng, N))
        z = forward_map(u, N + 4).trimmed()
        v = reconstruct_finite_gap(z, K=u.K)
        w = reconstruct_resolvent(z)
        rep.add(f"roundtrip[{i}]", "Phi^-1(Phi(u)) = u", l2_distance(u, v), 1e-7)
        K = min(w.K, v.K)
        rep.add(f"det_vs_resolvent[{i}]", "det(Id - zM) and resolvent inversions agree",
                l2_distance(v.padded(K), w.padded(K)), 1e-7)
    return rep


def _lax_suite(rng):
    rep = ValidationReport("lax")
    u = Potential([1.0])
    rep.add("lax_2cos", "dL/dt = [B, L]", lax_residual(u, 64), 1e-9)
    v = from_poles(_fixture("one_gap")).trimmed(1e-6)
    rep.add("lax_one_gap", "dL/dt = [B, L]", lax_residual(v, 4 * v.K), 1e-9)
    rep.environment["M"] = 64
    return rep


def _symmetry_default(rng):
    return symmetry_suite(random_potential(rng, K_max=4, max_norm=1.0))


SUITES = {
    "trace": _trace_suite,
    "symmetry": _symmetry_default,
    "gradient": _gradient_suite,
    "bracket": _bracket_suite,
    "roundtrip": _roundtrip_suite,
    "lax": _lax_suite,
}


def max_threads():
    env = os.environ.get("BOBK_MAX_THREADS")
    n = int(env) if env else (os.cpu_count() or 1)
    return max(n, 1)


def run_suite(name="all", seed=0, threads=None):
    """Run one suite, or every suite for ``name == "all"``.

    Each suite draws from its own generator seeded by ``(seed, suite)``, so the
    report does not depend on scheduling.
    """
    names = list(SUITES) if name == "all" else [name]
    for nm in names:
        if nm not in SUITES:
            raise ValueError(f"unknown suite {nm!r}; choose from {sorted(SUITES)} or 'all'")

    def job(i_nm):
        i, nm = i_nm
        rng = np.random.default_rng([seed, list(SUITES).index(nm)])
        return SUITES[nm](rng)

    threads = threads or max_threads()
    with ThreadPoolExecutor(max_workers=min(threads, len(names))) as ex:
        parts = list(ex.map(job, enumerate(names)))
    rep = ValidationReport(name)
    for part in parts:
        rep.extend(part)
    rep.environment.update(
        seed=seed,
        suites=names,
        python=platform.python_version(),
        numpy=np.__version__,
    )
    return rep
