"""Command-line interface: argument handling, outputs, and exit codes."""

import json

import pytest

from revopt import benchdata, cli, perm


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bfs_reports_counts(capsys):
    code, out, _ = run(capsys, "bfs", "--k", "3", "--n", "3", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["reduced"] == [1, 3, 14, 68]
    assert rep["total"] == [1, 12, 102, 625]


def test_bfs_writes_table(capsys, tmp_path):
    path = str(tmp_path / "t.rvtb")
    code, out, _ = run(capsys, "bfs", "--k", "2", "--n", "3", "--out", path)
    assert code == 0 and path in out
    code, out, _ = run(capsys, "table-info", "--tables", path, "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["n"] == 3 and rep["k"] == 2 and rep["reduced"] == [1, 3, 14]


def test_verify_pass_and_fail(capsys):
    code, out, _ = run(capsys, "verify", "--spec", "[0,1,3,2]",
                       "--circuit", "CNOT(b,a)")
    assert code == 0 and "PASS" in out
    code, out, _ = run(capsys, "verify", "--spec", "[0,1,3,2]",
                       "--circuit", "CNOT(a,b)")
    assert code == 1 and "FAIL" in out and "differs at rows" in out


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--spec", "[1,0,3,2,5,4,7,6]",
                       "--circuit", "NOT(a) CNOT(a,b) CNOT(a,b)", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["pass"] is True and rep["simulated"] == [1, 0, 3, 2, 5, 4, 7, 6]


def test_synth_with_in_process_table(capsys):
    spec = perm.format_truth_table([x ^ 1 for x in range(16)])
    code, out, _ = run(capsys, "synth", "--spec", spec, "--k", "2", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["size"] == 1 and rep["verified"] is True
    assert rep["circuit"] == "NOT(a)"


def test_synth_with_table_file(capsys, full_k7_path):
    spec = perm.format_truth_table(benchdata.BENCHMARKS["rd32"]["spec"])
    code, out, _ = run(capsys, "synth", "--spec", spec,
                       "--tables", full_k7_path, "--json")
    assert code == 0
    assert json.loads(out)["size"] == 4


def test_synth_bad_spec_exits_2(capsys, tmp_path):
    code, _, err = run(capsys, "synth", "--spec", "[0,0,1,1]", "--k", "2")
    assert code == 2 and "error" in err
    code, _, err = run(capsys, "synth", "--spec", "[0,1,3,2]",
                       "--tables", str(tmp_path / "missing.rvtb"))
    assert code == 2 and "error" in err


def test_linear_requires_deep_table(capsys):
    code, _, err = run(capsys, "linear", "--k", "4")
    assert code == 2 and "k >= 5" in err


def test_random_seeded_and_deterministic(capsys, full_k7_path):
    args = ("random", "--samples", "4", "--seed", "9",
            "--tables", full_k7_path, "--json")
    code, out1, _ = run(capsys, *args)
    assert code == 0
    code, out2, _ = run(capsys, *args)
    rep = json.loads(out1)
    assert json.loads(out2) ["histogram"] == rep["histogram"]
    assert rep["unsolved"] + sum(rep["histogram"].values()) == 4


def test_searchall_sparse_step(capsys):
    code, out, _ = run(capsys, "searchall", "--n", "3", "--from-size", "2",
                       "--sparse", "--json")
    assert code == 0
    rep = json.loads(out)
    assert (rep["size"], rep["reduced"], rep["total"]) == (3, 68, 625)


def test_searchall_pipeline(capsys, tmp_path):
    code, out, _ = run(capsys, "searchall", "--n", "3", "--from-size", "1",
                       "--to-size", "4", "--workdir", str(tmp_path), "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["counts"]["4"] == [267, 2780]
    assert (tmp_path / "size4.rvbv").exists()


def test_searchall_budget_exit(capsys):
    code, _, err = run(capsys, "searchall", "--n", "4", "--from-size", "1",
                       "--to-size", "2", "--budget-bytes", "1000000")
    assert code == 2 and "budget" in err


def test_unknown_command_rejected(capsys):
    with pytest.raises(SystemExit):
        cli.main(["frobnicate"])
