import json

import pytest

import argabm.cli as cli
from argabm.experiment import CSV_COLUMNS, summarize
from argabm.engine import RunResult

RUN = ["run", "--agents", "10", "--theories", "2", "--share-prob", "1.0", "--seed", "42",
       "--depth", "2", "--branching", "3"]


def test_run_prints_one_json_object(capsys):
    assert cli.main(RUN) == 0
    out = capsys.readouterr().out
    assert out.count("\n") == 1
    result = json.loads(out)
    assert sum(result["agents_per_theory"].values()) == 10
    assert set(result) >= {"rounds", "success", "terminated_by_cap"}


def test_run_output_is_byte_identical(capsys):
    cli.main(RUN)
    first = capsys.readouterr().out
    cli.main(RUN)
    assert capsys.readouterr().out == first


@pytest.mark.parametrize(
    "argv",
    [
        ["run", "--share-prob", "1.5"],
        ["run", "--agents", "0"],
        ["run", "--bogus", "1"],
        ["run", "--direction", "sideways"],
        ["sweep", "--reps", "0"],
        ["validate", "--theories", "x"],
        [],
    ],
)
def test_usage_errors(argv, capsys):
    assert cli.main(argv) == 2
    captured = capsys.readouterr()
    assert captured.out == ""
    assert captured.err


def test_config_file_and_flag_precedence(tmp_path, capsys):
    conf = tmp_path / "sim.conf"
    conf.write_text("agents = 6\nseed = 3\ndepth = 1\nshare-prob = 0.5\n")
    assert cli.main(["run", "--config", str(conf)]) == 0
    from_file = json.loads(capsys.readouterr().out)
    assert sum(from_file["agents_per_theory"].values()) == 6
    assert cli.main(["run", "--config", str(conf), "--agents", "8"]) == 0
    flagged = json.loads(capsys.readouterr().out)
    assert sum(flagged["agents_per_theory"].values()) == 8


def test_unknown_config_key_is_a_usage_error(tmp_path, capsys):
    conf = tmp_path / "bad.conf"
    conf.write_text("agnets = 6\n")
    assert cli.main(["run", "--config", str(conf)]) == 2


def test_trace_written(tmp_path, capsys):
    trace = tmp_path / "trace.jsonl"
    assert cli.main(RUN[:1] + ["--agents", "4", "--depth", "1", "--network-size", "2", "--trace", str(trace)]) == 0
    result = json.loads(capsys.readouterr().out)
    lines = trace.read_text().splitlines()
    assert sum("counts" in json.loads(line) for line in lines) == result["rounds"]


def _fake_sweep(spec, parallelism=None, progress=None):
    return [summarize(c, [RunResult(50, True, (5, 5), False, 0)]) for c in spec.cells()]


@pytest.mark.parametrize("extra,rows", [([], 192), (["--theory-counts", "2"], 96)])
def test_full_grid_row_counts(monkeypatch, tmp_path, extra, rows):
    monkeypatch.setattr(cli, "run_sweep", _fake_sweep)
    out = tmp_path / "results.csv"
    argv = ["sweep", "--paper-grid", "--reps", "100", "--seed", "7", "--out", str(out)] + extra
    assert cli.main(argv) == 0
    lines = out.read_text().splitlines()
    assert lines[0].split(",") == list(CSV_COLUMNS)
    assert len(lines) == rows + 1


def test_small_real_sweep(tmp_path):
    out = tmp_path / "r.json"
    argv = ["sweep", "--agent-counts", "4", "--theory-counts", "2", "--share-probs", "0,1",
            "--compositions", "homogeneous", "--reliabilities", "reliable,biased", "--reps", "2",
            "--depth", "1", "--network-size", "2", "--out", str(out)]
    assert cli.main(argv) == 0
    rows = json.loads(out.read_text())
    assert len(rows) == 4
    assert {r["reliability"] for r in rows} == {"reliable", "biased"}
    first = out.read_text()
    assert cli.main(argv) == 0
    assert out.read_text() == first


def test_validate_checks_and_dumps(tmp_path, capsys):
    dump = tmp_path / "land.txt"
    assert cli.main(["validate", "--seed", "3", "--dump", str(dump)]) == 0
    assert dump.read_text().startswith("landscape theories=2 depth=3 branching=4")
    assert capsys.readouterr().out
