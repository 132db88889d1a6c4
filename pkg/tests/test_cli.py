import json
import math
import subprocess
import sys

import numpy as np

from critcurves.cli import main, to_pgm
from critcurves.dynamics import theta_on_rank1


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    doc = json.loads(out)
    assert doc["schema"] == 1
    return code, doc


def test_poly_examples(capsys):
    code, out, _ = run(capsys, "poly", "--word", "a^4")
    assert code == 0 and "C       a^2 - 2" in out
    code, doc = run_json(capsys, "poly", "--word", "a^2b^2")
    assert code == 0
    code, out, _ = run(capsys, "poly", "--word", "a^2b^2")
    assert "Q_n     a b^2 - a - b" in out and "Ctilde  1" in out and "even rank" in out
    code, out, _ = run(capsys, "poly", "--word", "a^3")
    assert "C       a - 1" in out and "Ctilde  a + 1" in out and "True" in out


def test_bad_word(capsys):
    code, _, err = run(capsys, "poly", "--word", "(a")
    assert code == 2 and "cannot parse" in err
    code, _, err = run(capsys, "poly")
    assert code == 2


def test_trace_worked_example(capsys, tmp_path):
    out = tmp_path / "t.csv"
    code, doc = run_json(capsys, "trace", "--word", "(a^3b^4)^3a^2", "--out", str(out))
    assert code == 0
    ends = [(e["a"], e["b"]) for e in doc["endpoints"]]
    assert any(abs(a) < 1e-6 and abs(b - 2 * math.cos(math.pi / 5)) < 1e-6 for a, b in ends)
    assert any(abs(a - 1) < 1e-6 and abs(b - 2 * math.cos(3 * math.pi / 11)) < 1e-6 for a, b in ends)
    lines = out.read_text().splitlines()
    assert lines[0] == "a,b,legal" and len(lines) == doc["samples"] + 1


def test_trace_line_and_even_rank(capsys):
    code, out, _ = run(capsys, "trace", "--word", "a^5", "--step", "0.01")
    assert code == 0 and "rank 1: the line a = 1.618033988749" in out
    code, _, err = run(capsys, "trace", "--word", "ab")
    assert code == 2 and "axis" in err


def test_axis(capsys):
    code, doc = run_json(capsys, "axis", "--kappa", "2", "--ell", "2")
    assert code == 0 and doc["ok"] and doc["max_error"] < 1e-6


def test_orbit(capsys):
    code, doc = run_json(capsys, "orbit", "--a", "0", "--b", "0", "--n", "4")
    assert doc["orbit"]["code"] == "aabb"
    code, doc = run_json(capsys, "orbit", "--a", "0", "--b", repr(2 * math.cos(math.pi / 5)),
                         "--segment", "--min-steps", "23")
    assert code == 0 and len(doc["orbit"]["code"]) == 23


def test_rotnum(capsys):
    code, doc = run_json(capsys, "rotnum", "--a", "0", "--b", "0")
    assert abs(doc["theta"] - 0.25) <= doc["err_bound"] and abs(doc["rho"] - 0.5) <= doc["err_bound"]
    code, doc = run_json(capsys, "rotnum", "--a", "3", "--b", "0")
    assert doc["theta"] == 0 and doc["region"] == "interiorTheta0"


def test_intersect(capsys):
    b = repr(2 * math.cos(3 * math.pi / 11))
    code, doc = run_json(capsys, "intersect", "--word", "(a^3b^4)^3a^2", "--a", "1", "--b", b, "--word2", "a^3")
    assert code == 0 and doc["T"] == [3, 20] and doc["theta"] == "3/20"
    code, _, err = run(capsys, "intersect", "--word", "(a^3b^4)^3a^2", "--a", "0.3", "--b", "0.3")
    assert code == 2


def test_polygonal(capsys, tmp_path):
    out = tmp_path / "g.csv"
    b = repr(2 * math.cos(3 * math.pi / 11))
    code, doc = run_json(capsys, "polygonal", "--word", "(a^3b^4)^3a^2", "--a", "1", "--b", b, "--out", str(out))
    assert code == 0 and doc["regular"] and len(doc["vertices"]) == 6
    rows = out.read_text().splitlines()
    assert rows[0] == "t,x,y" and len(rows) == 24


def test_pencil(capsys):
    code, doc = run_json(capsys, "pencil", "--family", "1", "--kappa", "2", "--ell", "4", "--m", "3")
    assert code == 0 and doc["ok"] and doc["cells"][0]["theta_em"] == "3/20"
    code, _, _ = run(capsys, "pencil", "--family", "1", "--kappa", "2", "--ell", "2", "--m", "3")
    assert code == 2
    code, doc = run_json(capsys, "pencil", "--lattice", "--no-trace")
    assert len(doc["cells"]) == 192


def test_grid(capsys):
    code, doc = run_json(capsys, "grid", "--case", "minus", "--kappa", "2", "--ell", "4", "--n", "3", "--m", "0", "--check")
    assert code == 0 and doc["theta"] == "4/27" and doc["check"]["ok"]
    code, doc = run_json(capsys, "grid", "--case", "plus", "--kappa", "2", "--ell", "3", "--n", "1", "--m", "1", "--check")
    assert code == 0 and doc["check"]["ok"]


def test_scan_outputs(capsys, tmp_path):
    base = tmp_path / "scan"
    code, doc = run_json(capsys, "scan", "--region", "0,2,0,2", "--res", "32", "--iters", "10000", "--out", str(base))
    assert code == 0
    rows = (tmp_path / "scan.csv").read_text().splitlines()
    assert rows[0] == "a,b,theta,region" and len(rows) == 32 * 32 + 1
    data = [r.split(",") for r in rows[1:]]
    theta = np.array([float(r[2]) for r in data]).reshape(32, 32)
    avals = np.array([float(r[0]) for r in data]).reshape(32, 32)[:, 0]
    iters = 10 ** 4
    diag = np.diag(theta)
    assert np.all(np.abs(diag - np.arccos(avals / 2) / (2 * np.pi)) <= 2 / iters)
    i = int(np.argmin(np.abs(avals - 1.0)))
    assert avals[i] == 1.0
    bvals = avals
    ref = np.array([theta_on_rank1(3, float(b))[0] for b in bvals])
    assert np.all(np.abs(theta[i] - ref) <= 2 / iters)
    pgm = (tmp_path / "scan.pgm").read_text().split("\n")
    assert pgm[0] == "P2" and pgm[1] == "32 32" and pgm[2] == "255"


def test_scan_resonance_cell(capsys, tmp_path):
    base = tmp_path / "r"
    code, _ = run_json(capsys, "scan", "--region", "3,3.5,0,0.5", "--res", "2", "--iters", "1000", "--out", str(base))
    first = (tmp_path / "r.csv").read_text().splitlines()[1].split(",")
    assert float(first[0]) == 3.0 and float(first[1]) == 0.0
    assert float(first[2]) == 0.0 and first[3] == "interiorTheta0"


def test_scan_budget(capsys):
    code, _, err = run(capsys, "scan", "--res", "5000")
    assert code == 2
    code, _, err = run(capsys, "scan", "--region=-5,0,0,1", "--res", "4")
    assert code == 2


def test_to_pgm_mapping():
    g = to_pgm(np.array([[0.0, 0.25], [0.5, 0.1]])).splitlines()
    assert g[3:] == ["0 128", "255 51"]


def test_verify(capsys, tmp_path):
    out = tmp_path / "rep.json"
    code, stdout, _ = run(capsys, "verify", "--suite", "appendix", "--out", str(out))
    assert code == 0 and "[PASS] appendix" in stdout
    rep = json.loads(out.read_text())
    assert rep["schema"] == 1 and rep["ok"]


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# trace options\nstep = 0.01\neps_b = 1e-9\n")
    code, doc = run_json(capsys, "trace", "--word", "a^3", "--config", str(cfg))
    n_cfg = doc["samples"]
    code, doc = run_json(capsys, "trace", "--word", "a^3", "--config", str(cfg), "--step", "0.02")
    assert doc["samples"] < n_cfg
    bad = tmp_path / "bad.cfg"
    bad.write_text("eps_b = -1\n")
    assert run(capsys, "rotnum", "--a", "0", "--b", "0", "--config", str(bad))[0] == 2


def test_bad_tolerance(capsys):
    assert run(capsys, "rotnum", "--a", "0", "--b", "0", "--tol-b", "0")[0] == 2


def test_deterministic_output(capsys):
    argv = ["trace", "--word", "a^3b^4a^2", "--json"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "critcurves", "poly", "--word", "a^3"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and "a - 1" in res.stdout
