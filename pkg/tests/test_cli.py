"""Tests for the command-line front end (in-process, via main())."""

import csv
import json
import math

import pytest

from dirand.cli import build_parser, main

SQRT2 = math.sqrt(2.0)


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parser_subcommands():
    ap = build_parser()
    for argv in (["maxval", "--op", "chsh"],
                 ["entropy", "--cert", "chsh", "--p", "0.95"],
                 ["sweep", "--cert", "chsh", "--p", "0.9,0.95"],
                 ["tune", "--cert", "e0e1", "--p", "0.95"],
                 ["search", "--n", "3"],
                 ["tables", "--all"]):
        args = ap.parse_args(argv)
        assert callable(args.fn)


def test_missing_subcommand_exits_2():
    with pytest.raises(SystemExit) as ei:
        build_parser().parse_args([])
    assert ei.value.code == 2


def test_maxval_chsh(capsys):
    code, out, _ = _run(capsys, ["maxval", "--op", "chsh", "--level", "Q1",
                                 "--digits", "10"])
    assert code == 0
    val = float(out.split("maximum:")[1].split()[0])
    assert val == pytest.approx(2.0 * SQRT2, abs=1e-6)
    assert "classical 2" in out


def test_maxval_zero_operator(capsys):
    code, out, _ = _run(capsys, ["maxval", "--op", "zero"])
    assert code == 0
    assert "zero operator" in out


def test_maxval_unknown_operator(capsys):
    code, _, err = _run(capsys, ["maxval", "--op", "nope"])
    assert code == 2
    assert "error:" in err


def test_entropy_json(capsys):
    code, out, _ = _run(capsys, ["entropy", "--cert", "chsh", "--p", "0.95",
                                 "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["certificate"] == "chsh"
    assert doc["min_entropy"] == pytest.approx(0.58411, abs=5e-4)
    assert doc["pair"] == [1, 1]
    assert 2.0 ** -doc["min_entropy"] == pytest.approx(
        doc["guessing_probability"], abs=1e-9)


def test_entropy_param_alias(capsys):
    # --phi is an alias for --param on parameterized certificates
    code, out, _ = _run(capsys, ["entropy", "--cert", "e0e1", "--p", "0.95",
                                 "--phi", "0.55", "--format", "json"])
    assert code == 0
    assert json.loads(out)["param"] == 0.55


def test_entropy_rejects_bad_p(capsys):
    code, _, err = _run(capsys, ["entropy", "--cert", "chsh", "--p", "1.5"])
    assert code == 2
    assert "error:" in err


def test_sweep_csv(capsys, tmp_path):
    out_path = tmp_path / "sweep.csv"
    code, _, _ = _run(capsys, ["sweep", "--cert", "chsh",
                               "--p", "0.9,0.95", "--output", str(out_path)])
    assert code == 0
    rows = list(csv.DictReader(out_path.read_text().splitlines()))
    assert [r["p"] for r in rows] == ["0.9", "0.95"]
    assert all(r["ok"] == "1" for r in rows)
    h95 = float(rows[1]["min_entropy"])
    assert h95 == pytest.approx(0.58411, abs=5e-4)
    assert float(rows[0]["min_entropy"]) < h95


def test_tune_prints_optimum(capsys):
    code, out, _ = _run(capsys, ["tune", "--cert", "e0e1", "--p", "0.95",
                                 "--digits", "4"])
    assert code == 0
    phi = float(out.split("phi*=")[1].split()[0])
    assert phi == pytest.approx(0.6179, abs=0.02)


def test_tune_without_parameter_is_usage_error(capsys):
    code, _, err = _run(capsys, ["tune", "--cert", "chsh", "--p", "0.95"])
    assert code == 2
    assert "no tunable parameter" in err


def test_search_writes_histogram_and_classes(capsys, tmp_path):
    hist = tmp_path / "hist.csv"
    classes = tmp_path / "classes.json"
    code, _, err = _run(capsys, ["search", "--n", "4", "--seed", "2",
                                 "--output", str(hist),
                                 "--classes-output", str(classes)])
    assert code == 0
    rows = list(csv.DictReader(hist.read_text().splitlines()))
    assert sum(int(r["count"]) for r in rows) <= 4
    assert "evaluated=" in err
    doc = json.loads(classes.read_text())
    assert doc["p"] == 0.95
    assert isinstance(doc["classes"], list)


def test_tables_outdir(capsys, tmp_path):
    code, _, _ = _run(capsys, ["tables", "--table", "table2",
                               "--outdir", str(tmp_path)])
    assert code == 0
    body = (tmp_path / "table2.csv").read_text()
    rows = list(csv.DictReader(body.splitlines()))
    assert rows, "table CSV should have data rows"
    diff = list(csv.DictReader(
        (tmp_path / "table2_diff.csv").read_text().splitlines()))
    assert all(r["ok"] == "1" for r in diff)


def test_tables_requires_selection(capsys):
    code, _, err = _run(capsys, ["tables"])
    assert code == 2
    assert "no tables requested" in err
