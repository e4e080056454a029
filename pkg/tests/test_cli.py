"""Command-line surface: file formats, exit codes, determinism, and
atomic output writes."""

import json
import os

import pytest

from betalab.cli import dispatch
from betalab.fixtures import fixture_hash


GOLDEN = {"minpoly": [-1, -1, 1], "d": 2}
GOLDEN3 = {"minpoly": [-1, -1, 1], "d": 3}


@pytest.fixture()
def basefile(tmp_path):
    p = tmp_path / "golden.json"
    p.write_text(json.dumps(GOLDEN))
    return str(p)


@pytest.fixture()
def base3file(tmp_path):
    p = tmp_path / "golden3.json"
    p.write_text(json.dumps(GOLDEN3))
    return str(p)


def test_version_embeds_fixture_hash(capsys):
    with pytest.raises(SystemExit) as exc:
        dispatch(["--version"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    assert fixture_hash() in out


def test_expand_half(basefile, tmp_path, capsys):
    out = tmp_path / "w.json"
    rc = dispatch(["expand", "--base", basefile, "--x", "1/2",
                   "--out", str(out)])
    assert rc == 0
    data = json.loads(out.read_text())
    assert data == {"pre": [], "per": [0, 1, 0]}


def test_normalize_example(basefile, capsys):
    rc = dispatch(["normalize", "--base", basefile, "--word", "11"])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert data == {"pre": [1], "per": []}


def test_normalize_rejects_bad_digit(basefile, capsys):
    rc = dispatch(["normalize", "--base", basefile, "--word", "21"])
    assert rc == 2
    assert "error" in capsys.readouterr().err


def test_blocks(basefile, tmp_path, capsys):
    stream = tmp_path / "stream.txt"
    stream.write_text("1 1 0 0 0 1 0 1 0 0 0 0\n")
    rc = dispatch(["blocks", "--base", basefile, "--stream", str(stream)])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert data["cut_points"][0] == 0
    assert all(isinstance(b, list) for b in data["normalized_blocks"])


def test_wf_check_report(base3file, capsys):
    rc = dispatch(["wf-check", "--base", base3file])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert data["status"] == "Proven-for-attractor"
    assert data["L"] == 6
    assert data["killers"][0]["kind"] == "suffix"


def test_gamma_csv(basefile, tmp_path):
    out = tmp_path / "g.csv"
    rc = dispatch(["gamma", "--base", basefile, "--L", "1", "--n-max", "10",
                   "--samples", "2000", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "n,observed,bound"
    assert len(lines) == 11


def test_simulate_deterministic(basefile, tmp_path):
    cfg = tmp_path / "sim.json"
    cfg.write_text(json.dumps({"estimator": "erdos", "samples": 5000,
                               "bins": 64, "N": 40, "seed": 3}))
    out1, out2 = tmp_path / "h1.csv", tmp_path / "h2.csv"
    assert dispatch(["simulate", "--base", basefile, "--config", str(cfg),
                     "--out", str(out1)]) == 0
    assert dispatch(["simulate", "--base", basefile, "--config", str(cfg),
                     "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    header = out1.read_text().splitlines()[0]
    assert header == "bin_left,bin_right,count"


def test_simulate_report(basefile, tmp_path):
    cfg = tmp_path / "sim.json"
    cfg.write_text(json.dumps({"estimator": "erdos", "samples": 2000,
                               "bins": 32}))
    out = tmp_path / "h.csv"
    rep = tmp_path / "r.json"
    rc = dispatch(["simulate", "--base", basefile, "--config", str(cfg),
                   "--out", str(out), "--report", str(rep)])
    assert rc == 0
    meta = json.loads(rep.read_text())
    assert meta["samples"] == 2000 and meta["bins"] == 32


def test_simulate_rejects_unknown_config_key(basefile, tmp_path, capsys):
    cfg = tmp_path / "sim.json"
    cfg.write_text(json.dumps({"estimator": "erdos", "smaples": 10}))
    out = tmp_path / "h.csv"
    rc = dispatch(["simulate", "--base", basefile, "--config", str(cfg),
                   "--out", str(out)])
    assert rc == 2
    assert not out.exists()


def test_parry_output(basefile, capsys):
    rc = dispatch(["parry", "--base", basefile])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert data["breakpoints"] == pytest.approx([0.6180339887498949])
    assert data["densities"] == pytest.approx([1.1708203932499369,
                                               0.7236067977499790])
    assert data["truncated"] is False


def test_diagnose_identical_files(basefile, tmp_path, capsys):
    cfg = tmp_path / "sim.json"
    cfg.write_text(json.dumps({"estimator": "erdos", "samples": 4000,
                               "bins": 64}))
    out = tmp_path / "h.csv"
    dispatch(["simulate", "--base", basefile, "--config", str(cfg),
              "--out", str(out)])
    rc = dispatch(["diagnose", "--left", str(out), "--right", str(out),
                   "--refinements", "2"])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert [r["tv"] for r in data["resolutions"]] == [0.0, 0.0, 0.0]
    assert data["nondecreasing_under_refinement"] is True


def test_torus_check_cli(basefile, capsys):
    rc = dispatch(["torus-check", "--base", basefile, "--window", "011000",
                   "--left-index", "-3"])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert data["residual"] < 1e-8


def test_torus_check_nonunit_exits_2(tmp_path, capsys):
    p = tmp_path / "nu.json"
    p.write_text(json.dumps({"minpoly": [-2, -2, 1], "d": 3}))
    rc = dispatch(["torus-check", "--base", str(p), "--window", "101000"])
    assert rc == 2


def test_missing_base_file_exits_2(tmp_path, capsys):
    rc = dispatch(["expand", "--base", str(tmp_path / "nope.json"),
                   "--x", "1/2"])
    assert rc == 2


def test_unknown_base_key_exits_2(tmp_path, capsys):
    p = tmp_path / "weird.json"
    p.write_text(json.dumps({"minpoly": [-1, -1, 1], "d": 2, "beta": 1.6}))
    rc = dispatch(["expand", "--base", str(p), "--x", "1/2"])
    assert rc == 2


def test_budget_exhaustion_exits_3(basefile, capsys):
    rc = dispatch(["normalize", "--base", basefile, "--word", "11111",
                   "--budget", "1"])
    assert rc == 3


def test_threads_must_be_positive(basefile, capsys):
    rc = dispatch(["--threads", "0", "normalize", "--base", basefile,
                   "--word", "11"])
    assert rc == 2


def test_no_partial_output_on_error(basefile, tmp_path):
    out = tmp_path / "never.json"
    rc = dispatch(["normalize", "--base", basefile, "--word", "binary?!",
                   "--out", str(out)])
    assert rc == 2
    assert not out.exists()
    assert [f for f in os.listdir(tmp_path) if f.endswith(".tmp")] == []


def test_unwritable_out_exits_1(basefile, tmp_path, capsys):
    rc = dispatch(["normalize", "--base", basefile, "--word", "11",
                   "--out", str(tmp_path / "no" / "dir" / "x.json")])
    assert rc == 1
