import json

import pytest

from clocal.cli import log_star, main, resolve_graph
from clocal.errors import InputError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_color_json(capsys):
    code, out, _ = run(capsys, "color", "ring:40", "--json", "--verify")
    assert code == 0
    data = json.loads(out)
    assert data["queries"] == 40 and data["constant"] == 16
    assert {r["vertex"] for r in data["answers"]} == set(range(1, 41))


def test_single_vertex_query(capsys):
    code, out, _ = run(capsys, "color", "ring:40", "--vertex", "7")
    assert code == 0 and "vertex=7" in out


@pytest.mark.parametrize("cmd", ["mis", "mm", "color-seq"])
def test_greedy_commands_verify(capsys, cmd):
    assert run(capsys, cmd, "random:30,4,50", "--seed", "3", "--verify")[0] == 0


def test_orient_stats(capsys):
    code, out, _ = run(capsys, "orient", "random-regular:40,3", "--stats", "--json")
    data = json.loads(out)
    assert code == 0 and data["acyclic"] and data["reach"] <= data["reach_bound"]


def test_orient_edge_csv(capsys):
    code, out, _ = run(capsys, "orient", "ring:10", "--edge", "1", "2", "--csv")
    assert code == 0
    header, row = out.strip().splitlines()
    assert header == "edge,tail,head" and row.startswith("1-2,")


def test_mcm_and_mwm_verify(capsys):
    assert run(capsys, "mcm", "random:10,3,13", "--eps", "1/2", "--verify")[0] == 0
    code, out, _ = run(capsys, "mwm", "random:8,3,10", "--weighted", "--eps", "0.9", "--verify", "--json")
    data = json.loads(out)
    assert code == 0 and (data["k"], data["L"]) == (2, 8)


def test_mcm_verification_failure(capsys, monkeypatch):
    import clocal.harness as h

    monkeypatch.setattr(h, "brute_mcm", lambda g: 10**6)
    code, _, err = run(capsys, "mcm", "ring:8", "--eps", "1/2", "--verify")
    assert code == 1 and "verification failed" in err


def test_dist_rounds_report(capsys):
    code, out, _ = run(capsys, "dist", "mis", "ring:30", "--rounds-report", "--json")
    data = json.loads(out)
    assert code == 0 and data["log_star_n"] == log_star(30) == 4
    assert len(data["messages_per_round"]) == data["rounds"]


def test_dist_needs_eps(capsys):
    code, _, err = run(capsys, "dist", "mcm", "ring:8")
    assert code == 2 and "--eps" in err


def test_verify_command(capsys):
    code, out, _ = run(capsys, "verify", "random:20,3,25", "--eps", "1", "--trials", "2", "--json")
    assert code == 0 and json.loads(out)["result"] == "PASS"


def test_bench_command(tmp_path, capsys):
    specs = tmp_path / "specs.json"
    specs.write_text(json.dumps([{"algorithm": "mis", "graph": {"generator": "ring", "params": [50]}, "verify": True}]))
    out_file = tmp_path / "out.csv"
    assert run(capsys, "bench", str(specs), "--output", str(out_file))[0] == 0
    assert out_file.read_text().startswith("algorithm,n,")
    code, _, err = run(capsys, "bench", str(tmp_path / "missing.json"))
    assert code == 2 and "error" in err


def test_graph_file(tmp_path, capsys):
    p = tmp_path / "g.txt"
    from clocal.graph import ring, save_graph

    save_graph(ring(6), p)
    assert run(capsys, "mis", str(p), "--verify")[0] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["color", "nosuch:5"],
        ["color", "ring:2"],
        ["mis", "ring:6", "--query", "9"],
        ["mm", "ring:6", "--query", "1,3"],
        ["mwm", "ring:6", "--eps", "1"],
        ["mcm", "ring:6", "--eps", "zero"],
    ],
)
def test_bad_input_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_usage_error(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "--help")[0] == 0


def test_resolve_graph_rejects_garbage():
    with pytest.raises(InputError):
        resolve_graph("definitely-not-a-file")
