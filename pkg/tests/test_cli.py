"""Command-line interface: formats, determinism, error reporting."""

import json
import math
import shutil
import subprocess

import numpy as np
import pytest

from caustica.cli import main
from caustica.conics import Ellipse
from caustica.orbits import find_periodic_directions


def run_to(tmp_path, name, argv):
    out = tmp_path / name
    rc = main(argv + ["--out", str(out)])
    assert rc == 0
    return out.read_bytes()


def test_simulate_csv_format(tmp_path):
    raw = run_to(tmp_path, "t.csv", [
        "simulate", "--c", "0.6", "--x", "0.2", "--y", "0.3",
        "--slope", "0.7", "--bounces", "40"])
    lines = raw.decode().strip().split("\n")
    assert lines[0] == "# caustica simulate seed=0"
    assert lines[1] == "step,x,y,vx,vy,s"
    assert len(lines) == 2 + 40
    svals = []
    for i, line in enumerate(lines[2:], start=1):
        fields = line.split(",")
        assert len(fields) == 6
        assert fields[0] == str(i)
        for f in fields[1:]:
            assert f == format(float(f), ".17g")  # emitted at full precision
        svals.append(float(fields[5]))
    assert np.ptp(svals) < 1e-9  # the caustic is conserved bounce to bounce


def test_repeat_runs_byte_identical(tmp_path):
    argv = ["simulate", "--c", "0.6", "--x", "0.1", "--y", "-0.2",
            "--slope", "-1.3", "--bounces", "25"]
    assert run_to(tmp_path, "a.csv", argv) == run_to(tmp_path, "b.csv", argv)


def test_thread_count_never_changes_bytes(tmp_path, monkeypatch):
    argv = ["betti-scan", "--c", "0.6", "--lmin", "0.4", "--lmax", "1.2",
            "--num", "40"]
    one = run_to(tmp_path, "t1.csv", argv + ["--threads", "1"])
    four = run_to(tmp_path, "t4.csv", argv + ["--threads", "4"])
    assert one == four
    monkeypatch.setenv("CAUSTICA_THREADS", "3")
    env = run_to(tmp_path, "te.csv", argv)
    assert env == one


def test_betti_scan_header_and_monotone(tmp_path):
    raw = run_to(tmp_path, "b.csv", [
        "betti-scan", "--c", "0.6", "--lmin", "1.1", "--lmax", "2.5",
        "--num", "15", "--seed", "5"])
    lines = raw.decode().strip().split("\n")
    assert lines[0] == "# caustica betti-scan seed=5"
    assert lines[1] == "lambda,beta1,beta2"
    b2 = [float(r.split(",")[2]) for r in lines[2:]]
    assert all(x > y for x, y in zip(b2, b2[1:]))


def test_config_file_mirrors_flags(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(
        {"c": 0.6, "lmin": 0.5, "lmax": 0.9, "num": 7}))
    from_cfg = run_to(tmp_path, "c.csv", ["betti-scan", "--config", str(cfg)])
    from_flags = run_to(tmp_path, "f.csv", [
        "betti-scan", "--c", "0.6", "--lmin", "0.5", "--lmax", "0.9",
        "--num", "7"])
    assert from_cfg == from_flags


def test_explicit_flag_beats_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(
        {"c": 0.6, "lmin": 0.5, "lmax": 0.9, "num": 3}))
    mixed = run_to(tmp_path, "m.csv", [
        "betti-scan", "--config", str(cfg), "--num", "7"])
    pure = run_to(tmp_path, "p.csv", [
        "betti-scan", "--c", "0.6", "--lmin", "0.5", "--lmax", "0.9",
        "--num", "7"])
    assert mixed == pure


def test_stdout_is_default_sink(capsys):
    rc = main(["simulate", "--c", "0.6", "--x", "0.0", "--y", "0.0",
               "--slope", "0.3", "--bounces", "3"])
    assert rc == 0
    assert capsys.readouterr().out.startswith("# caustica simulate seed=0")


def test_count_periodic_frozen_counts(tmp_path):
    raw = run_to(tmp_path, "n.csv", [
        "count-periodic", "--c", "0.6", "--px", "0.2", "--py", "0.3",
        "--nmin", "3", "--nmax", "6"])
    lines = raw.decode().strip().split("\n")
    assert lines[1] == "n,parity,count,predicted"
    got = {int(r.split(",")[0]): (r.split(",")[1], int(r.split(",")[2]))
           for r in lines[2:]}
    assert got[3] == ("odd", 4)
    assert got[4] == ("even", 0)
    assert got[5] == ("odd", 4)
    assert got[6] == ("even", 8)


def test_find_periodic_json(tmp_path):
    raw = run_to(tmp_path, "d.json", [
        "find-periodic", "--c", "0.6", "--px", "0.2", "--py", "0.3",
        "--n", "3", "--seed", "2"])
    doc = json.loads(raw)
    assert doc["command"] == "find-periodic"
    assert doc["seed"] == 2
    assert len(doc["results"]) == 4
    for rec in doc["results"]:
        assert rec["closure_error"] < 1e-8
        assert rec["caustic"]["kind"] in ("elliptic", "hyperbolic")
        assert len(rec["direction"]) == 2


def test_connect_json(tmp_path):
    raw = run_to(tmp_path, "c.json", [
        "connect", "--c", "0.6", "--x1", "0.1", "--y1", "0.2",
        "--x2", "-0.3", "--y2", "0.1", "--n", "12"])
    doc = json.loads(raw)
    assert len(doc["bounces"]) == 11
    assert max(doc["reflection_residuals"]) < 1e-8
    assert np.var(doc["segment_caustics"]) < 1e-8
    e = Ellipse(0.6)
    for b in doc["bounces"]:
        assert abs(e.boundary_residual(b["x"], b["y"])) < 1e-9


def test_poncelet_rational_rotation_closes(tmp_path):
    raw = run_to(tmp_path, "p.json", [
        "poncelet", "--c", "0.6", "--rot", "1/7", "--starts", "8",
        "--seed", "3"])
    doc = json.loads(raw)
    assert doc["rotation"] == "1/7"
    assert doc["lambda_star"] == pytest.approx(2.3638182486588675, abs=1e-9)
    assert doc["max_closure_error"] < 1e-6
    assert len(doc["starts"]) == 8


def test_birkhoff_requires_exactly_one_mode(tmp_path, capsys):
    base = ["birkhoff", "--c", "0.6", "--s", "0.62", "--num", "8"]
    assert main(base + ["--bounces", "50", "--window", "3"]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ValueError"
    assert main(base) == 2
    raw = run_to(tmp_path, "b.csv", base + ["--bounces", "50"])
    lines = raw.decode().strip().split("\n")
    assert lines[1] == "x,y,sum"
    assert len(lines) == 2 + 8


def test_moebius_fit_json_keys(tmp_path):
    raw = run_to(tmp_path, "m.json", [
        "moebius-fit", "--c", "0.6", "--s", "0.62", "--n", "7"])
    doc = json.loads(raw)
    assert doc["command"] == "moebius-fit"
    for key in ("a", "b", "coef_c", "d", "det", "residual"):
        assert key in doc
    assert doc["residual"] < 1e-9
    assert doc["det"] != 0


def test_scan_boomerang_json(tmp_path):
    raw = run_to(tmp_path, "s.json", [
        "scan-boomerang", "--c", "0.6", "--px", "0.2", "--py", "0.3",
        "--nmax", "4", "--tol", "1e-7", "--grid", "1024"])
    doc = json.loads(raw)
    assert doc["results"]
    for rec in doc["results"]:
        assert rec["kind"] in (2, 3)
        assert 1 <= rec["bounce"] <= 4
        assert rec["miss"] <= 1e-7


def test_scan_hole_json(tmp_path):
    raw = run_to(tmp_path, "h.json", [
        "scan-hole", "--c", "0.6", "--x1", "0.1", "--y1", "0.2",
        "--x2", "-0.3", "--y2", "0.1", "--hx", "1.0", "--hy", "0.0",
        "--nmax", "6", "--tol", "0.05", "--grid", "1024"])
    doc = json.loads(raw)
    assert doc["results"]
    for rec in doc["results"]:
        assert rec["m"] < rec["n"] <= 6
        assert rec["miss_h"] <= 0.05


def test_scan_angle_pair_json(tmp_path):
    e = Ellipse(0.6)
    dirs = find_periodic_directions(e, (0.2, 0.3), 3)
    angs = sorted(math.atan2(d.direction[1], d.direction[0]) % math.pi
                  for d in dirs)
    alpha = next(abs(a - b) for a in angs for b in angs
                 if 0.2 < abs(a - b) < math.pi - 0.2)
    raw = run_to(tmp_path, "a.json", [
        "scan-angle-pair", "--c", "0.6", "--px", "0.2", "--py", "0.3",
        "--alpha", repr(alpha), "--nmax", "6", "--tol", "1e-6",
        "--grid", "1024"])
    doc = json.loads(raw)
    assert doc["results"]
    for rec in doc["results"]:
        a1 = math.atan2(rec["dir1"][1], rec["dir1"][0]) % math.pi
        a2 = math.atan2(rec["dir2"][1], rec["dir2"][0]) % math.pi
        sep = abs(a1 - a2)
        assert min(sep, math.pi - sep) == pytest.approx(
            min(alpha, math.pi - alpha), abs=1e-6)


def test_lattice_pairs_json(tmp_path):
    raw = run_to(tmp_path, "l.json", [
        "lattice-pairs", "--tau-re", "0.0", "--tau-im", "1.0",
        "--alpha", repr(math.pi / 2), "--hmax", "2"])
    doc = json.loads(raw)
    assert doc["cm"] is True
    assert doc["pairs"]
    for rec in doc["pairs"]:
        assert len(rec["lambda"]) == 2 and len(rec["delta"]) == 2


def test_dml_classify_cli(tmp_path):
    inp = tmp_path / "in.json"
    inp.write_text(json.dumps(
        {"matrix": [[2, 0, 0], [0, 3, 0], [0, 0, 1]]}))
    raw = run_to(tmp_path, "k.json", ["dml", "classify", "--input", str(inp)])
    doc = json.loads(raw)
    assert doc["classification"]["kind"] == "Gm2"
    assert doc["classification"]["witness"]["semisimple"] is True


def test_dml_search_cli(tmp_path):
    inp = tmp_path / "in.json"
    inp.write_text(json.dumps({
        "matrix": [[1, 1, 0], [0, 1, 0], [0, 0, 2]],
        "lines": [[0, 1, -1], [1, 1, 0], [1, 1, 1]],
        "range": 25}))
    raw = run_to(tmp_path, "s.json", ["dml", "search", "--input", str(inp)])
    doc = json.loads(raw)
    assert doc["classification"]["kind"] == "GaGm"
    pairs = {(h["m"], h["n"]) for h in doc["hits"]}
    assert {(1, 0), (3, 1), (6, 2), (11, 3), (20, 4)} <= pairs
    fam = doc["family"]
    assert fam["kind"] == "ExponentialFamily"
    assert (fam["A"], fam["lambda"], fam["B"], fam["C"]) == ("1", "2", "1", "0")


def test_dml_search_input_validation(tmp_path, capsys):
    inp = tmp_path / "two.json"
    inp.write_text(json.dumps({
        "matrix": [[1, 1, 0], [0, 1, 0], [0, 0, 2]],
        "lines": [[0, 1, -1], [1, 1, 0]], "range": 5}))
    assert main(["dml", "search", "--input", str(inp)]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ValueError"
    assert main(["dml", "search", "--input", str(tmp_path / "nope.json")]) == 2
    assert json.loads(capsys.readouterr().err)["error"] in (
        "FileNotFoundError", "OSError")


def test_render_svg(tmp_path):
    raw = run_to(tmp_path, "r.svg", [
        "render", "--c", "0.6", "--x", "0.2", "--y", "0.3",
        "--slope", "0.7", "--bounces", "15", "--seed", "4"])
    svg = raw.decode()
    assert 'viewBox="-1.15 -1.15 2.3 2.3"' in svg
    assert "<!-- caustica render seed=4 -->" in svg
    assert 'transform="scale(1,-1)"' in svg
    assert "<ellipse" in svg and "<polyline" in svg
    assert "steelblue" in svg  # the caustic is drawn
    assert svg.rstrip().endswith("</svg>")


def test_invalid_parameters_exit_two(capsys):
    assert main(["simulate", "--c", "1.5", "--x", "0.0", "--y", "0.0",
                 "--slope", "1.0"]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ValueError"
    assert err["message"]
    assert main(["moebius-fit", "--c", "0.6", "--s", "0.62"]) == 2  # no --n
    assert json.loads(capsys.readouterr().err)["error"] == "ValueError"


def test_console_script_installed(tmp_path):
    exe = shutil.which("caustica")
    assert exe, "console script caustica missing"
    out = tmp_path / "cc.csv"
    proc = subprocess.run(
        [exe, "simulate", "--c", "0.6", "--x", "0.0", "--y", "0.1",
         "--slope", "0.4", "--bounces", "5", "--out", str(out)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert out.read_text().startswith("# caustica simulate")
