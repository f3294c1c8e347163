import json

import numpy as np
import pytest

from mdsearch.harness.cli import main
from mdsearch.harness import random_formula
from mdsearch.constraints.sat import render_dimacs


def run_cli(*argv):
    return main(list(argv))


def test_sample_prints_trace_and_result(capsys):
    code = run_cli("sample", "--task", "sat", "--steps", "6", "--css", "8",
                   "--rounds", "8", "--seed", "3")
    out = capsys.readouterr().out
    assert code == 0
    assert "t=  6" in out or "t=6" in out.replace("  ", " ")
    assert "result" in out and "feasible=" in out
    assert "total=" in out


def test_sample_search_off(capsys):
    code = run_cli("sample", "--task", "sat", "--steps", "4", "--search", "off",
                   "--seed", "1")
    assert code == 0
    out = capsys.readouterr().out
    assert "committed=" in out


def test_bench_writes_results(tmp_path, capsys):
    out = tmp_path / "bench.jsonl"
    code = run_cli("bench", "--task", "sat", "--steps", "4", "--css", "4",
                   "--rounds", "4", "--n-samples", "4", "--seed", "5",
                   "--out", str(out))
    assert code == 0
    stdout = capsys.readouterr().out
    assert stdout.startswith("task,label,")
    lines = out.read_text().splitlines()
    assert len(lines) == 5
    assert json.loads(lines[0])["task"] == "sat"
    assert (tmp_path / "bench.summary.csv").exists()


def test_bench_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("[run]\ntask = sat\nsteps = 4\nnum_samples = 2\nseed = 2\n"
                   "candidates = 4\nrounds = 2\n\n[sat]\nvars = 4\nclauses = 6\n",
                   encoding="utf-8")
    code = run_cli("bench", "--config", str(cfg), "--n-samples", "3")
    assert code == 0
    rows = capsys.readouterr().out.strip().splitlines()
    assert rows[1].split(",")[2] == "3"  # samples column reflects the override


def test_ablate_sweep(tmp_path, capsys):
    out_dir = tmp_path / "sweep"
    code = run_cli("ablate", "--task", "sat", "--steps", "4", "--css", "1,4",
                   "--search", "off,all", "--n-samples", "3", "--seed", "4",
                   "--rounds", "2", "--out", str(out_dir))
    assert code == 0
    rows = capsys.readouterr().out.strip().splitlines()
    assert len(rows) == 1 + 4  # header + 2 placements x 2 pool sizes
    assert (out_dir / "summary.csv").exists()
    assert len(list(out_dir.glob("*.jsonl"))) == 4


def test_summarize_from_files(tmp_path, capsys):
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    for path, placement in ((a, "off"), (b, "all")):
        assert run_cli("bench", "--task", "sat", "--steps", "4", "--css", "4",
                       "--rounds", "4", "--n-samples", "3", "--seed", "6",
                       "--search", placement, "--out", str(path)) == 0
    capsys.readouterr()
    code = run_cli("summarize", str(a), str(b), "--out", str(tmp_path / "sum.csv"))
    assert code == 0
    text = capsys.readouterr().out
    assert text.count("\n") == 3  # header + two rows
    assert (tmp_path / "sum.csv").read_text() == text


def test_summarize_mixed_tasks_is_usage_error(tmp_path, capsys):
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    run_cli("bench", "--task", "sat", "--steps", "4", "--css", "2", "--rounds", "2",
            "--n-samples", "2", "--out", str(a))
    run_cli("bench", "--task", "peptide", "--steps", "4", "--css", "2",
            "--rounds", "2", "--n-samples", "2", "--out", str(b))
    capsys.readouterr()
    assert run_cli("summarize", str(a), str(b)) == 2


def test_unknown_placement_is_usage_error(capsys):
    assert run_cli("sample", "--task", "sat", "--search", "never") == 2


def test_missing_result_file_is_runtime_error(tmp_path, capsys):
    assert run_cli("summarize", str(tmp_path / "nope.jsonl")) == 1


def test_bad_flag_exits_2():
    with pytest.raises(SystemExit) as err:
        run_cli("bench", "--task", "chess")
    assert err.value.code == 2


def test_sample_with_dimacs_instance(tmp_path, capsys):
    f = random_formula(4, 6, np.random.default_rng(0))
    path = tmp_path / "one.cnf"
    path.write_text(render_dimacs(f), encoding="utf-8")
    code = run_cli("sample", "--task", "sat", "--steps", "4", "--css", "4",
                   "--rounds", "4", "--instances", str(path), "--denoiser",
                   "uniform")
    assert code == 0
    assert "one" in capsys.readouterr().out
