import json
import subprocess
import sys

import numpy as np
import pytest

from ggec import formats
from ggec.cli import main


@pytest.fixture
def dataset(tmp_path):
    cfg = tmp_path / "synth.json"
    cfg.write_text(json.dumps({"count": 1500, "beta_true": 0.5, "seed": 4, "mismatch_rate": 0.2}))
    assert main(["synth", "--config", str(cfg), "--out", str(tmp_path / "d")]) == 0
    return tmp_path


def test_encode_decode_roundtrip(dataset):
    p, s = dataset / "d.ggpr", dataset / "d.ggsy"
    a, r = dataset / "a.ggec", dataset / "r.ggsy"
    assert main(["encode", "--params", str(p), "--symbols", str(s), "--mode", "dynamic-ggd", "--out", str(a)]) == 0
    assert main(["decode", "--params", str(p), "--in", str(a), "--out", str(r)]) == 0
    assert r.read_bytes() == s.read_bytes()
    first = a.read_bytes()
    assert main(["encode", "--params", str(p), "--symbols", str(s), "--mode", "dynamic-ggd", "--out", str(a)]) == 0
    assert a.read_bytes() == first


def test_synth_is_idempotent(dataset):
    before = (dataset / "d.ggsy").read_bytes(), (dataset / "d.ggpr").read_bytes()
    assert main(["synth", "--config", str(dataset / "synth.json"), "--out", str(dataset / "d")]) == 0
    assert ((dataset / "d.ggsy").read_bytes(), (dataset / "d.ggpr").read_bytes()) == before


def test_bench_csv(dataset, capsys):
    out = dataset / "rep.csv"
    code = main(["bench", "--config", str(dataset / "synth.json"), "--modes", "fixed-laplacian,dynamic-ggd", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "mode,estimated_bits,coded_bytes,bits_per_symbol"
    assert [ln.split(",")[0] for ln in lines[1:]] == ["fixed-laplacian", "dynamic-ggd"]
    assert capsys.readouterr().out == ""


def test_tables_csv(capsys):
    argv = ["tables", "--mu", "0.3", "--sigma", "2", "--beta", "0.5", "--pi", "0.7", "--alphabet", "-32:32"]
    assert main(argv) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "symbol,freq"
    freqs = [int(ln.split(",")[1]) for ln in lines[1:]]
    assert len(freqs) == 65 and sum(freqs) == 65536 and min(freqs) >= 1
    assert lines[1].startswith("-32,")


def test_tables_to_file(tmp_path, capsys):
    out = tmp_path / "t.csv"
    assert main(["tables", "--mu", "0", "--sigma", "1", "--mode", "fixed-gaussian", "--alphabet=-3:3", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert len(out.read_text().splitlines()) == 8


def test_sigma_opt_csv(capsys):
    assert main(["sigma-opt", "--family", "laplacian", "--objective", "pdf", "--rmin", "1", "--rmax", "5", "--steps", "5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "r,family,objective,sigma_opt"
    assert len(lines) == 6
    assert all(abs(float(ln.split(",")[3]) / float(ln.split(",")[0]) - 1) < 1e-4 for ln in lines[1:])


@pytest.mark.parametrize(
    "argv",
    [
        ["tables", "--mu", "0", "--sigma", "1", "--bogus"],
        ["tables", "--mu", "0", "--sigma", "1", "--mode", "nope"],
        ["tables", "--mu", "0", "--sigma", "1", "--alphabet", "5:1"],
        ["encode", "--params", "p"],
        ["sigma-opt", "--rmin", "0.5", "--rmax", "2"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == 1
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "error" in captured.err


def test_data_errors(dataset, capsys):
    p = dataset / "d.ggpr"
    bad = dataset / "bad.ggec"
    bad.write_bytes(b"XXXX\x01" + bytes(30))
    assert main(["decode", "--params", str(p), "--in", str(bad), "--out", str(dataset / "z")]) == 2
    assert "offset 0" in capsys.readouterr().err
    assert not (dataset / "z").exists()

    short = dataset / "short.ggpr"
    short.write_bytes(p.read_bytes()[:-16])
    a = dataset / "a.ggec"
    main(["encode", "--params", str(p), "--symbols", str(dataset / "d.ggsy"), "--mode", "fixed-ggd", "--out", str(a)])
    capsys.readouterr()
    assert main(["decode", "--params", str(short), "--in", str(a), "--out", str(dataset / "z")]) == 2
    assert "count" in capsys.readouterr().err

    cfg = dataset / "broken.json"
    cfg.write_text("{not json")
    assert main(["synth", "--config", str(cfg), "--out", str(dataset / "q")]) == 2
    assert main(["decode", "--params", str(dataset / "missing"), "--in", str(a), "--out", str(dataset / "z")]) == 2


def test_out_of_alphabet_encode_is_data_error(tmp_path, capsys):
    s = tmp_path / "s.ggsy"
    p = tmp_path / "p.ggpr"
    s.write_bytes(formats.pack_symbols([0, 400]))
    p.write_bytes(formats.pack_params([0, 0], [1, 1], [1, 1], [0.5, 0.5]))
    assert main(["encode", "--params", str(p), "--symbols", str(s), "--mode", "fixed-ggd", "--out", str(tmp_path / "a")]) == 2
    assert "index 1" in capsys.readouterr().err


def test_csv_params_accepted(tmp_path):
    s = tmp_path / "s.ggsy"
    p = tmp_path / "p.csv"
    s.write_bytes(formats.pack_symbols([0, 2, -1]))
    p.write_text("mu,sigma,beta,pi\n0,1,1,0.5\n1.5,2,0.8,0.3\n-0.2,0.5,2,0.6\n")
    a, r = tmp_path / "a.ggec", tmp_path / "r.ggsy"
    assert main(["encode", "--params", str(p), "--symbols", str(s), "--mode", "preliminary", "--out", str(a)]) == 0
    assert main(["decode", "--params", str(p), "--in", str(a), "--out", str(r)]) == 0
    assert np.array_equal(formats.unpack_symbols(r.read_bytes()), [0, 2, -1])


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ggec", "tables", "--mu", "0", "--sigma", "1", "--alphabet", "-2:2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "symbol,freq"
    proc = subprocess.run([sys.executable, "-m", "ggec", "--nope"], capture_output=True, text=True)
    assert proc.returncode == 1
