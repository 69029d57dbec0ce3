"""JSON and CSV encodings of potentials, coordinates, spectra and traces."""

from __future__ import annotations

import csv
import io
import json
from importlib import resources

import numpy as np

from .errors import BOError
from .finite_gap import FiniteGapSpec
from .forward import BirkhoffCoords
from .fourier import GridFunction, Potential


class InputFormatError(BOError, ValueError):
    """Well-formed JSON that does not match any of the expected schemas."""


def _pairs(z):
    return [[float(c.real), float(c.imag)] for c in np.asarray(z, dtype=complex)]


def _complex(pairs, what):
    try:
        a = np.array(pairs, dtype=float)
    except (TypeError, ValueError) as e:
        raise InputFormatError(f"{what}: expected a list of [re, im] pairs") from e
    if a.size == 0:
        return np.zeros(0, dtype=complex)
    if a.ndim != 2 or a.shape[1] != 2:
        raise InputFormatError(f"{what}: expected a list of [re, im] pairs")
    return a[:, 0] + 1j * a[:, 1]


def to_dict(obj):
    if isinstance(obj, Potential):
        return {"K": obj.K, "mean": obj.mean, "coeffs": _pairs(obj.coeffs)}
    if isinstance(obj, BirkhoffCoords):
        return {"N": obj.N, "zeta": _pairs(obj.zeta)}
    if isinstance(obj, FiniteGapSpec):
        return {"poles": _pairs(obj.poles)}
    raise TypeError(f"cannot encode {type(obj).__name__}")


def from_dict(d):
    """Decode by schema: ``coeffs`` -> Potential, ``zeta`` -> BirkhoffCoords,
    ``poles`` -> FiniteGapSpec."""
    if not isinstance(d, dict):
        raise InputFormatError("top-level JSON value must be an object")
    if "coeffs" in d:
        c = _complex(d["coeffs"], "coeffs")
        if "K" in d and int(d["K"]) != c.size:
            raise InputFormatError(f"K={d['K']} but {c.size} coefficients given")
        return Potential(c, float(d.get("mean", 0.0)))
    if "zeta" in d:
        z = _complex(d["zeta"], "zeta")
        if "N" in d and int(d["N"]) != z.size:
            raise InputFormatError(f"N={d['N']} but {z.size} coordinates given")
        return BirkhoffCoords(z)
    if "poles" in d:
        return FiniteGapSpec(_complex(d["poles"], "poles"))
    raise InputFormatError("object has none of the keys 'coeffs', 'zeta', 'poles'")


def dumps(obj):
    return json.dumps(to_dict(obj), indent=2)


def loads(text):
    """Parse JSON text; malformed input raises ``json.JSONDecodeError``."""
    return from_dict(json.loads(text))


def save(obj, path):
    with open(path, "w") as fh:
        fh.write(dumps(obj) + "\n")


def load(path):
    with open(path) as fh:
        return loads(fh.read())


def load_fixture(name):
    """Decode one of the JSON files shipped in ``bobk/fixtures``."""
    text = resources.files("bobk").joinpath("fixtures", f"{name}.json").read_text()
    return loads(text)


def write_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in r])
    return buf.getvalue()


def grid_to_csv(g):
    return write_csv(["x", "value_re", "value_im"],
                zip(g.x, g.values.real, g.values.imag))


def grid_from_csv(text):
    rows = list(csv.DictReader(io.StringIO(text)))
    return GridFunction([float(r["value_re"]) + 1j * float(r["value_im"]) for r in rows])


def spectrum_to_csv(spec, n_max=None):
    n_max = spec.trusted_count if n_max is None else n_max
    rows = []
    for n in range(n_max + 1):
        gamma = spec.gammas[n - 1] if n >= 1 else float("nan")
        rows.append((n, spec.lambdas[n], gamma, abs(spec.one_fn[n]), spec.residuals[n]))
    return write_csv(["n", "lambda", "gamma", "abs_1_fn", "residual"], rows)


def bands_to_csv(bands):
    return write_csv(["n", "band_lo", "band_hi", "gap_after"], bands)


def sweep_to_csv(rows):
    return write_csv(["lambda", "resolvent_re", "product_re", "abs_diff"], rows)


def trace_to_csv(trace):
    lam = trace.diagnostics.get("lambdas")
    header = ["t", "norm2", "mean", "H"]
    if lam is not None:
        header += [f"lambda_{n}" for n in range(len(lam[0]))]
    return write_csv(header, trace.rows())


def trace_to_json(trace):
    return json.dumps(
        {
            "times": [float(t) for t in trace.times],
            "snapshots": [to_dict(s) for s in trace.states],
        },
        indent=2,
    )


def read_csv_rows(text):
    """Parse a numeric CSV with a header into ``(header, float array)``."""
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], np.array(rows[1:], dtype=float)
