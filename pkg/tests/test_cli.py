import json

import numpy as np
import pytest

from bobk import io as bio
from bobk.cli import main
from bobk.finite_gap import FiniteGapSpec
from bobk.forward import BirkhoffCoords
from bobk.fourier import Potential, synthesize


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


def test_potential_json_roundtrip():
    u = Potential([0.5 - 0.25j, 0.125], 0.75)
    v = bio.loads(bio.dumps(u))
    assert np.array_equal(v.coeffs, u.coeffs) and v.mean == u.mean
    d = json.loads(bio.dumps(u))
    assert d["K"] == 2 and d["coeffs"][0] == [0.5, -0.25]


def test_coords_and_poles_json():
    z = bio.loads(bio.dumps(BirkhoffCoords([0.1j, 0.2])))
    assert isinstance(z, BirkhoffCoords) and z.N == 2
    s = bio.loads('{"poles": [[0.5, 0.0]]}')
    assert isinstance(s, FiniteGapSpec) and s.poles[0] == 0.5


def test_schema_errors():
    with pytest.raises(bio.InputFormatError):
        bio.loads('{"K": 3, "coeffs": [[1, 0]]}')
    with pytest.raises(bio.InputFormatError):
        bio.loads('{"foo": 1}')


def test_grid_csv_roundtrip():
    g = synthesize(Potential([0.3, 0.1j]), 16)
    h = bio.grid_from_csv(bio.grid_to_csv(g))
    assert np.allclose(h.values, g.values, atol=0)


def test_gen_transform(tmp_path, capsys):
    p = tmp_path / "u.json"
    assert main(["gen", "--poles", "0.5", "--out", str(p)]) == 0
    code, out = run(["transform", "--in", str(p)], capsys)
    assert code == 0
    z = bio.loads(out.out)
    assert z.N == 1
    assert z.zeta[0] == pytest.approx(-1 / np.sqrt(3), abs=1e-9)


def test_transform_zero(tmp_path, capsys):
    p = tmp_path / "zero.json"
    bio.save(Potential.zero(), p)
    code, out = run(["transform", "--in", str(p)], capsys)
    assert code == 0 and bio.loads(out.out).N == 0


def test_malformed_json(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"K": 1,\n "coeffs": [[1, 0]')
    code, out = run(["transform", "--in", str(p)], capsys)
    assert code == 2
    assert "line 2" in out.err and "column" in out.err


def test_missing_file(capsys):
    code, _ = run(["spectrum", "--in", "/nonexistent.json"], capsys)
    assert code == 2


def test_bad_flag(capsys):
    code, _ = run(["transform", "--nmax", "x"], capsys)
    assert code == 2


def test_convergence_failure(tmp_path, capsys):
    p = tmp_path / "u.json"
    bio.save(Potential([1.0, 0.5]), p)
    code, _ = run(["spectrum", "--in", str(p), "--tol", "1e-30", "--max-doublings", "1"], capsys)
    assert code == 3


def test_spectrum_outputs(tmp_path, capsys):
    p = tmp_path / "u.json"
    main(["gen", "--one-gap", "1,0.5", "--out", str(p)])
    code, out = run(["spectrum", "--in", str(p), "--nmax", "3"], capsys)
    header, rows = bio.read_csv_rows(out.out)
    assert header == ["n", "lambda", "gamma", "abs_1_fn", "residual"]
    assert rows[0, 1] == pytest.approx(-1 / 3, abs=1e-9)
    code, out = run(["spectrum", "--in", str(p), "--what", "bands", "--nmax", "3"], capsys)
    assert out.out.startswith("n,band_lo,band_hi,gap_after")
    code, out = run(["spectrum", "--in", str(p), "--what", "sweep"], capsys)
    header, rows = bio.read_csv_rows(out.out)
    assert header == ["lambda", "resolvent_re", "product_re", "abs_diff"]
    assert rows.shape[0] == 10 and rows[:, 3].max() < 1e-9


def test_inverse_roundtrip(tmp_path, capsys):
    z = tmp_path / "z.json"
    bio.save(BirkhoffCoords([-1 / np.sqrt(3)]), z)
    code, out = run(["inverse", "--in", str(z)], capsys)
    u = bio.loads(out.out)
    assert code == 0 and u.coeffs[0] == pytest.approx(0.5)
    code, out = run(["inverse", "--in", str(z), "--method", "resolvent"], capsys)
    assert bio.loads(out.out).coeffs[1] == pytest.approx(0.25, abs=1e-9)


def test_evolve_csv(tmp_path, capsys):
    p = tmp_path / "u.json"
    main(["gen", "--poles", "0.3", "--out", str(p)])
    code, out = run(["evolve", "--in", str(p), "--T", "0.05", "--grid", "64", "--nlambda", "2",
                     "--checkpoints", "2"], capsys)
    header, rows = bio.read_csv_rows(out.out)
    assert code == 0
    assert header == ["t", "norm2", "mean", "H", "lambda_0", "lambda_1", "lambda_2"]
    assert rows.shape == (3, 7)
    code, out = run(["evolve", "--in", str(p), "--T", "0.05", "--grid", "64", "--format", "json",
                     "--checkpoints", "1"], capsys)
    snaps = json.loads(out.out)["snapshots"]
    assert len(snaps) == 2 and "coeffs" in snaps[0]


def test_validate_exit_codes(capsys):
    code, out = run(["validate", "--suite", "lax", "--seed", "7"], capsys)
    assert code == 0 and json.loads(out.out)["passed"]


def test_validate_failure_exit_code(monkeypatch, capsys):
    import bobk.cli as cli
    from bobk.validation import ValidationReport

    def failing(name, seed):
        rep = ValidationReport(name)
        rep.add("x", "a = b", 1.0, 0.5)
        return rep

    monkeypatch.setattr(cli, "run_suite", failing)
    code, _ = run(["validate", "--suite", "lax"], capsys)
    assert code == 1


@pytest.mark.slow
def test_validate_all_on_fixtures(capsys):
    code, out = run(["validate", "--suite", "all", "--seed", "7", "--format", "csv"], capsys)
    assert code == 0, out.out
