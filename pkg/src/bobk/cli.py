"""Command-line entry point: ``bobk <subcommand> [--in PATH] [--out PATH] ...``.

Exit codes: 0 success, 1 validation failure, 2 input error, 3 convergence
failure. ``-`` (the default) means stdin or stdout.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io as bio
from .errors import (
    AccuracyGuardError,
    BOError,
    ConvergenceError,
    PhaseDegeneracyError,
)
from .evolution import SolverConfig, evolve_direct
from .finite_gap import FiniteGapSpec, OneGap, from_poles
from .forward import BirkhoffCoords, forward_map, generating_function_sweep
from .fourier import Potential
from .inverse import reconstruct_finite_gap, reconstruct_resolvent
from .spectrum import band_report, compute_spectrum
from .validation import SUITES, run_suite

OK, VALIDATION_FAILED, INPUT_ERROR, CONVERGENCE_FAILED = 0, 1, 2, 3


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(path, text):
    if not text.endswith("\n"):
        text += "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load(path, *types):
    obj = bio.loads(_read(path))
    if types and not isinstance(obj, types):
        names = " or ".join(t.__name__ for t in types)
        raise bio.InputFormatError(f"expected {names}, got {type(obj).__name__}")
    return obj


def _as_potential(obj):
    return from_poles(obj) if isinstance(obj, FiniteGapSpec) else obj


def _parse_complex_list(text):
    try:
        return [complex(s.replace(" ", "")) for s in text.split(",") if s.strip()]
    except ValueError as e:
        raise bio.InputFormatError(f"cannot parse complex list {text!r}") from e


def _cmd_transform(a):
    u = _as_potential(_load(a.inp, Potential, FiniteGapSpec))
    z = forward_map(u, a.nmax, a.tol).trimmed(a.floor)
    if a.format == "csv":
        rows = [(n, c.real, c.imag, abs(c) ** 2) for n, c in enumerate(z.zeta, 1)]
        return bio.write_csv(["n", "zeta_re", "zeta_im", "gamma"], rows)
    return bio.dumps(z)


def _cmd_inverse(a):
    z = _load(a.inp, BirkhoffCoords)
    if a.method == "resolvent":
        u = reconstruct_resolvent(z)
    else:
        u = reconstruct_finite_gap(z, K=a.K)
    if a.format == "csv":
        from .fourier import synthesize

        return bio.grid_to_csv(synthesize(u, a.grid))
    return bio.dumps(u)


def _cmd_spectrum(a):
    u = _as_potential(_load(a.inp, Potential, FiniteGapSpec))
    spec = compute_spectrum(u, a.nmax, a.tol, M=a.M, max_doublings=a.max_doublings)
    if a.what == "bands":
        return bio.bands_to_csv(band_report(spec))
    if a.what == "sweep":
        lo = -spec.lambdas[0] + 0.25
        lams = np.linspace(lo, lo + a.span, a.count)
        return bio.sweep_to_csv(generating_function_sweep(u, lams, spec=spec))
    if a.format == "json":
        n = min(a.nmax, spec.trusted_count)
        return json.dumps(
            {
                "M": spec.M,
                "trusted_count": spec.trusted_count,
                "lambda": spec.lambdas[: n + 1].tolist(),
                "gamma": spec.gammas[:n].tolist(),
            },
            indent=2,
        )
    return bio.spectrum_to_csv(spec, min(a.nmax, spec.trusted_count))


def _cmd_gen(a):
    if (a.poles is None) == (a.one_gap is None):
        raise bio.InputFormatError("give exactly one of --poles or --one-gap")
    if a.poles is not None:
        u = from_poles(FiniteGapSpec(_parse_complex_list(a.poles)), K=a.K)
    else:
        parts = a.one_gap.split(",", 1)
        if len(parts) != 2:
            raise bio.InputFormatError("--one-gap expects N,w")
        u = OneGap(int(parts[0]), complex(parts[1].replace(" ", ""))).potential(a.K)
    if a.format == "csv":
        from .fourier import synthesize

        return bio.grid_to_csv(synthesize(u, a.grid))
    return bio.dumps(u)


def _cmd_evolve(a):
    u = _as_potential(_load(a.inp, Potential, FiniteGapSpec))
    cfg = SolverConfig(
        grid=a.grid,
        dt=a.dt,
        dealias=a.dealias,
        checkpoints=a.checkpoints,
        track_lambdas=a.nlambda,
    )
    trace = evolve_direct(u, a.T, cfg)
    if a.format == "json":
        return bio.trace_to_json(trace)
    return bio.trace_to_csv(trace)


def _cmd_validate(a):
    rep = run_suite(a.suite, a.seed)
    a._failed = not rep.passed
    return rep.to_csv() if a.format == "csv" else rep.to_json()


def build_parser():
    p = _Parser(prog="bobk", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt="json"):
        sp.add_argument("--in", dest="inp", default="-", help="input path (default stdin)")
        sp.add_argument("--out", default="-", help="output path (default stdout)")
        sp.add_argument("--format", choices=["json", "csv"], default=fmt)
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("transform", help="Potential JSON -> Birkhoff coordinates")
    common(sp)
    sp.add_argument("--nmax", type=int, default=16)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--floor", type=float, default=1e-10, help="drop trailing |zeta_n| <= floor")
    sp.set_defaults(run=_cmd_transform)

    sp = sub.add_parser("inverse", help="Birkhoff coordinates -> Potential JSON")
    common(sp)
    sp.add_argument("--method", choices=["det", "resolvent"], default="det")
    sp.add_argument("--K", type=int, default=None)
    sp.add_argument("--grid", type=int, default=256)
    sp.set_defaults(run=_cmd_inverse)

    sp = sub.add_parser("spectrum", help="Lax spectrum, band report or generating-function sweep")
    common(sp, fmt="csv")
    sp.add_argument("--what", choices=["spectrum", "bands", "sweep"], default="spectrum")
    sp.add_argument("--nmax", type=int, default=16)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--M", type=int, default=None)
    sp.add_argument("--max-doublings", dest="max_doublings", type=int, default=6)
    sp.add_argument("--span", type=float, default=10.0)
    sp.add_argument("--count", type=int, default=10)
    sp.set_defaults(run=_cmd_spectrum)

    sp = sub.add_parser("gen", help="finite-gap potential from poles or one-gap data")
    common(sp)
    sp.add_argument("--poles", help="comma separated complex poles, e.g. 0.5,0.2+0.3j")
    sp.add_argument("--one-gap", dest="one_gap", help="N,w")
    sp.add_argument("--K", type=int, default=None)
    sp.add_argument("--grid", type=int, default=256)
    sp.set_defaults(run=_cmd_gen)

    sp = sub.add_parser("evolve", help="direct time integration with diagnostics")
    common(sp, fmt="csv")
    sp.add_argument("--T", type=float, default=1.0)
    sp.add_argument("--dt", type=float, default=None)
    sp.add_argument("--grid", type=int, default=256)
    sp.add_argument("--dealias", choices=["pad", "2/3"], default="pad")
    sp.add_argument("--checkpoints", type=int, default=10)
    sp.add_argument("--nlambda", type=int, default=4, help="track lambda_0..lambda_n (-1: off)")
    sp.set_defaults(run=_cmd_evolve)

    sp = sub.add_parser("validate", help="run validation suites")
    common(sp)
    sp.add_argument("--suite", choices=sorted(SUITES) + ["all"], default="all")
    sp.set_defaults(run=_cmd_validate)
    return p


def main(argv=None):
    try:
        a = build_parser().parse_args(argv)
    except _Usage as e:
        print(f"bobk: {e}", file=sys.stderr)
        return INPUT_ERROR
    a._failed = False
    try:
        text = a.run(a)
    except json.JSONDecodeError as e:
        print(f"bobk: malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}", file=sys.stderr)
        return INPUT_ERROR
    except (ConvergenceError, PhaseDegeneracyError, AccuracyGuardError) as e:
        print(f"bobk: {type(e).__name__}: {e}", file=sys.stderr)
        return CONVERGENCE_FAILED
    except (BOError, ValueError, OSError) as e:
        print(f"bobk: {type(e).__name__}: {e}", file=sys.stderr)
        return INPUT_ERROR
    _write(a.out, text)
    return VALIDATION_FAILED if a._failed else OK


if __name__ == "__main__":
    sys.exit(main())
