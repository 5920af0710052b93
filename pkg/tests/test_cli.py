import csv
import json
import math
import os

import pytest

from mosp.cli import (
    BASELINE,
    RESULT_COLUMNS,
    ResultRow,
    format_bound,
    main,
    parse_bound,
    parse_configs,
    read_rows_csv,
    summarize_rows,
    write_rows_csv,
)
from mosp.core import UNBOUNDED
from mosp.problems import write_instance

from conftest import make_g1


@pytest.fixture
def g1_file(tmp_path):
    g = make_g1()
    g.meta = {"family": "grid", "rows": 2, "cols": 2, "k": 2, "M": 2, "seed": 0}
    path = tmp_path / "g1.json"
    write_instance(g, path)
    return str(path)


def test_parse_bound():
    assert parse_bound("0", 2) == (0, 0)
    assert parse_bound("inf", 3) == (UNBOUNDED,) * 3
    assert parse_bound("1|2", 2) == (1, 2)
    assert parse_bound("inf|4", 2) == (UNBOUNDED, 4)
    with pytest.raises(ValueError):
        parse_bound("1|2|3", 2)
    with pytest.raises(ValueError):
        parse_bound("-1", 2)


def test_format_bound_roundtrip():
    for text in ("0", "3", "inf", "1|2", "inf|4"):
        assert format_bound(parse_bound(text, 2)) == text


def test_parse_configs():
    pairs = parse_configs("inf:0;0:0;3:16", 2)
    assert pairs == [((UNBOUNDED, UNBOUNDED), (0, 0)),
                     ((0, 0), (0, 0)),
                     ((3, 3), (16, 16))]
    with pytest.raises(ValueError):
        parse_configs("inf", 2)


def test_gen_writes_instances(tmp_path, capsys):
    out = tmp_path / "inst"
    rc = main(["gen", "grid", "--rows", "4", "--cols", "4", "--k", "3",
               "--m", "2", "--count", "3", "--seed", "7",
               "--out", str(out)])
    assert rc == 0
    files = sorted(os.listdir(out))
    assert files == ["grid_7.json", "grid_8.json", "grid_9.json"]


def test_gen_count_zero(tmp_path):
    out = tmp_path / "none"
    assert main(["gen", "grid", "--count", "0", "--out", str(out)]) == 0
    assert os.listdir(out) == []


def test_solve_csv_row(g1_file, capsys):
    rc = main(["solve", g1_file, "--C", "0", "--D", "0"])
    assert rc == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].split(",") == RESULT_COLUMNS
    row = ResultRow.from_list(next(csv.reader([lines[1]])))
    assert row.status == "completed"
    assert row.num_solutions == 3
    assert row.C == "0" and row.D == "0"


def test_solve_json_and_paths(g1_file, capsys):
    rc = main(["solve", g1_file, "--C", "inf", "--D", "0",
               "--format", "json", "--paths"])
    assert rc == 0
    out = capsys.readouterr().out.strip().splitlines()
    payload = json.loads(out[0])
    assert payload["num_solutions"] == 3
    path_lines = out[1:]
    assert len(path_lines) == 3
    assert any(line.startswith("5,5 0 3") for line in path_lines)


def test_solve_pure_dfs_same_solutions(g1_file, capsys):
    rc = main(["solve", g1_file, "--C", "0", "--D", "inf"])
    assert rc == 0
    lines = capsys.readouterr().out.strip().splitlines()
    row = ResultRow.from_list(next(csv.reader([lines[1]])))
    assert row.num_solutions == 3
    assert row.reexpansions == 0
    assert row.dfs_expansions > 0


def test_solve_trace_file(g1_file, tmp_path, capsys):
    trace = tmp_path / "trace.txt"
    assert main(["solve", g1_file, "--C", "inf", "--D", "0",
                 "--trace", str(trace)]) == 0
    lines = trace.read_text().splitlines()
    assert lines and lines[0].startswith("expand 0 ")


def test_solve_missing_file(tmp_path, capsys):
    rc = main(["solve", str(tmp_path / "nope.json")])
    assert rc == 3


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["solve"])
    assert exc.value.code == 2


def test_bench_matrix_and_summary(tmp_path, capsys):
    out = tmp_path / "rows.csv"
    rc = main(["bench", "--family", "grid", "--rows", "5", "--cols", "5",
               "--k", "3", "--m", "2", "--count", "4", "--seed", "11",
               "--configs", "inf:0;0:0;3:0", "--out", str(out)])
    assert rc == 0
    rows = read_rows_csv(out)
    assert len(rows) == 12
    assert {(r.C, r.D) for r in rows} == {("inf", "0"), ("0", "0"), ("3", "0")}
    summary = json.loads((tmp_path / "rows.csv.summary.json").read_text())
    assert summary["baseline_present"] is True
    entries = {(e["C"], e["D"]): e for e in summary["configs"]}
    assert "memory_ratio_geomean" in entries[("0", "0")]

    # ratios recomputed independently match to 1e-9 relative
    base = {r.instance_id: r for r in rows if (r.C, r.D) == BASELINE}
    for key, entry in entries.items():
        if key == BASELINE:
            continue
        ratios = [r.max_stored_labels / base[r.instance_id].max_stored_labels
                  for r in rows if (r.C, r.D) == key]
        expect = math.exp(sum(math.log(x) for x in ratios) / len(ratios))
        assert abs(entry["memory_ratio_geomean"] - expect) <= 1e-9 * expect


def test_bench_single_run(tmp_path):
    out = tmp_path / "one.csv"
    rc = main(["bench", "--rows", "4", "--cols", "4", "--count", "1",
               "--configs", "inf:0", "--out", str(out)])
    assert rc == 0
    assert len(read_rows_csv(out)) == 1


def test_bench_no_baseline_warns(tmp_path, capsys):
    out = tmp_path / "nb.csv"
    rc = main(["bench", "--rows", "4", "--cols", "4", "--count", "2",
               "--configs", "0:0", "--out", str(out)])
    assert rc == 0
    assert "baseline" in capsys.readouterr().err
    summary = json.loads((tmp_path / "nb.csv.summary.json").read_text())
    assert summary["baseline_present"] is False
    for entry in summary["configs"]:
        assert "memory_ratio_geomean" not in entry


def test_bench_parallel_matches_serial(tmp_path):
    args = ["bench", "--rows", "5", "--cols", "5", "--k", "2", "--count", "3",
            "--seed", "3", "--configs", "inf:0;0:0"]
    out1, out2 = tmp_path / "serial.csv", tmp_path / "par.csv"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2), "--jobs", "2"]) == 0
    r1 = [(r.instance_id, r.C, r.D, r.max_stored_labels, r.num_solutions)
          for r in read_rows_csv(out1)]
    r2 = [(r.instance_id, r.C, r.D, r.max_stored_labels, r.num_solutions)
          for r in read_rows_csv(out2)]
    assert r1 == r2


def test_result_row_roundtrip(tmp_path):
    row = ResultRow("g_1", "grid", 8, 8, "3", 2, "inf", "0", 0.125, 42, 3,
                    10, 2, 0, "completed")
    path = tmp_path / "r.csv"
    write_rows_csv([row], path)
    assert read_rows_csv(path) == [row]


def test_verify_passes_and_detects_fault(g1_file, tmp_path, capsys):
    rc = main(["verify", g1_file, "--configs", "0:0;inf:0;0:inf"])
    out = capsys.readouterr().out
    assert rc == 0
    assert out.count("PASS") == 3

    # a graph with a dominated start-goal path makes the dropped
    # solution checks visible
    g = make_g1()
    g.vertex_count = 5
    g.adjacency.append([(3, (9, 9))])
    g.adjacency[0].append((4, (4, 4)))
    g.adjacency[0].sort()
    faulty = tmp_path / "dom.json"
    write_instance(g, faulty)
    rc = main(["verify", str(faulty), "--configs", "inf:0"])
    assert rc == 0
    rc = main(["verify", str(faulty), "--configs", "inf:0",
               "--inject-fault", "drop-solution-check"])
    out = capsys.readouterr().out
    assert rc == 1
    assert "FAIL" in out


def test_verify_empty_instance(tmp_path, capsys):
    doc = {"M": 2, "vertex_count": 2, "start": 0, "goal": 1, "edges": [],
           "meta": None}
    path = tmp_path / "empty.json"
    path.write_text(json.dumps(doc) + "\n")
    rc = main(["verify", str(path), "--configs", "inf:0;0:0"])
    assert rc == 0
    assert capsys.readouterr().out.count("(0 solutions)") == 2


def test_oracle_subcommand(g1_file, capsys):
    rc = main(["oracle", g1_file])
    assert rc == 0
    assert capsys.readouterr().out.splitlines() == ["2,6", "5,5", "6,2"]


def test_oracle_guard_exit(g1_file, capsys):
    rc = main(["oracle", g1_file, "--max-vertices", "2"])
    assert rc == 3
