"""End-to-end command checks, run in process through main()."""

import json
import subprocess
import sys

import pytest

from pebblecc.cli import main
from pebblecc.graph import chain, dag_to_json, layered_random


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def graph_file(tmp_path, g, name="g.json"):
    return write(tmp_path, name, dag_to_json(g))


def test_gen_chain(capsys):
    assert main(["gen", "chain", "4"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data == {"n": 4, "edges": [[1, 2], [2, 3], [3, 4]]}


def test_gen_layered_random_uses_seed(capsys):
    assert main(["gen", "layered_random", "8", "--seed", "3"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data == json.loads(dag_to_json(layered_random(8, 3)))


def test_gen_rejects_unknown_kind():
    with pytest.raises(SystemExit) as exc:
        main(["gen", "torus", "4"])
    assert exc.value.code == 2


def test_depth_human_and_json(tmp_path, capsys):
    gf = graph_file(tmp_path, chain(5))
    assert main(["depth", "--graph", gf]) == 0
    assert capsys.readouterr().out.strip() == "depth (nodes) = 5"
    assert main(["depth", "--graph", gf, "--convention", "edges", "--json"]) == 0
    assert json.loads(capsys.readouterr().out) == {"depth": 4, "convention": "edges"}


def test_pebble_check_verdicts(tmp_path, capsys):
    gf = graph_file(tmp_path, chain(3))
    good = write(tmp_path, "p.json", '{"mode": "parallel", "rounds": [[1], [2], [3]]}')
    bad = write(tmp_path, "q.json", '{"mode": "parallel", "rounds": [[3]]}')
    assert main(["pebble-check", "--graph", gf, good]) == 0
    assert capsys.readouterr().out.strip() == "legal"
    assert main(["pebble-check", "--graph", gf, bad]) == 1
    assert "missing_parent" in capsys.readouterr().out


def test_cost_report(tmp_path, capsys):
    pf = write(tmp_path, "p.json", '{"mode": "parallel", "rounds": [[1], [1, 2]]}')
    assert main(["cost", pf, "--json"]) == 0
    assert json.loads(capsys.readouterr().out) == {
        "cc": 3,
        "st": 4,
        "t": 2,
        "max_space": 2,
    }


def test_pcc_json(tmp_path, capsys):
    gf = graph_file(tmp_path, chain(4))
    assert main(["pcc", "--graph", gf, "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["pcc"] == 4 and data["proven"]
    assert data["witness"] == [[1], [2], [3], [4]]


def test_pcc_bounded_infeasible_exit(tmp_path, capsys):
    gf = graph_file(tmp_path, chain(3))
    assert main(["pcc-bounded", "--graph", gf, "--horizon", "2"]) == 1
    assert "infeasible" in capsys.readouterr().err


def test_pcc_node_cap_exit(tmp_path, capsys):
    gf = graph_file(tmp_path, chain(25))
    assert main(["pcc", "--graph", gf]) == 3
    assert "limit hit" in capsys.readouterr().err


def test_pcc_state_cap_exit(tmp_path, capsys):
    from pebblecc.graph import pyramid

    gf = graph_file(tmp_path, pyramid(3))
    assert main(["pcc", "--graph", gf, "--max-states", "3"]) == 3
    assert "limit hit" in capsys.readouterr().err


def test_min_st_and_min_space(tmp_path, capsys):
    from pebblecc.graph import pyramid

    gf = graph_file(tmp_path, pyramid(2))
    assert main(["min-st", "--graph", gf, "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["min_st"] == 4
    assert main(["min-space", "--graph", gf, "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["min_space"] == 2


def test_b2lc_solve_exit_codes(tmp_path, capsys):
    yes = write(tmp_path, "yes.json", '{"n_vars": 2, "m": 1, "equations": [[1, 1, 2]]}')
    no = write(
        tmp_path, "no.json", '{"n_vars": 2, "m": 1, "equations": [[1, 1, 2], [2, 1, 1]]}'
    )
    assert main(["b2lc-solve", yes, "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["covered"]
    assert main(["b2lc-solve", no]) == 1
    assert "not coverable" in capsys.readouterr().out


def test_3part_solve(tmp_path, capsys):
    inst = write(tmp_path, "tp.json", '{"n": 1, "elements": [1, 2, 3]}')
    assert main(["3part-solve", inst, "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["partitionable"]


def test_reduce_3part_to_b2lc(tmp_path, capsys):
    inst = write(tmp_path, "tp.json", '{"n": 1, "elements": [1, 2, 3]}')
    assert main(["reduce", "3part-to-b2lc", inst]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["m"] == 1
    assert len(data["equations"]) == 4  # 3n^2 + n


def test_reduce_b2lc_to_graph_worked_instance(tmp_path, capsys):
    inst = write(
        tmp_path, "b.json", '{"n_vars": 2, "m": 2, "equations": [[1, 1, 2], [1, 2, 2]]}'
    )
    assert main(["reduce", "b2lc-to-graph", "--tau", "2", inst]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["graph"]["n"] == 28


def test_reduce_vc(tmp_path, capsys):
    inst = write(tmp_path, "vc.json", '{"n": 3, "edges": [[1, 2], [2, 3]]}')
    assert main(["reduce", "vc", inst]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["dag"]["n"] == 9
    assert data["originals"] == [1, 5, 9]


def test_reduce_counterexample(capsys):
    assert main(["reduce", "counterexample"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["n"] == 16 and len(data["edges"]) == 22


def test_reduce_append_chain(tmp_path, capsys):
    gf = graph_file(tmp_path, chain(2))
    assert main(["reduce", "append-chain", "--graph", gf, "3"]) == 0
    assert json.loads(capsys.readouterr().out)["n"] == 5


def test_depth_check_forms(tmp_path, capsys):
    gf = graph_file(tmp_path, chain(5))
    assert main(["depth-check", "--graph", gf, "2", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data == {"e_min": 1, "witness_set": [3]}
    assert main(["depth-check", "--graph", gf, "2", "1"]) == 0
    assert "[3]" in capsys.readouterr().out
    assert main(["depth-check", "--graph", gf, "1", "1"]) == 1


def test_lp_build_summaries(tmp_path, capsys):
    gf = graph_file(tmp_path, chain(2))
    assert main(["lp", "build-pebbling", "--graph", gf, "--horizon", "4", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data == {
        "variables": 10,
        "constraints": 5,
        "sink_constraints": 1,
        "move_constraints": 4,
    }
    assert main(["lp", "build-reducible", "--graph", gf, "1", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["variables"] == 6


def test_lp_emit_and_relax(tmp_path, capsys):
    gf = graph_file(tmp_path, chain(2))
    assert main(["lp", "emit", "pebbling", "--graph", gf, "--horizon", "2"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("Minimize") and "Generals" in text
    assert main(["lp", "relax", "pebbling", "--graph", gf, "--horizon", "2"]) == 0
    assert "Generals" not in capsys.readouterr().out
    assert main(["lp", "emit", "reducible", "--graph", gf, "--d", "1"]) == 0
    assert "path_1_1_2" in capsys.readouterr().out
    # reducible without --d is a usage error
    assert main(["lp", "emit", "reducible", "--graph", gf]) == 2


def test_lp_fractional_commands(tmp_path, capsys):
    gf = graph_file(tmp_path, chain(4))
    assert main(["lp", "frac-pebbling", "--graph", gf]) == 0
    assert "objective = 17/2" in capsys.readouterr().out
    assert main(["lp", "frac-timed", "--graph", gf, "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["feasible"] and data["objective"] == "6"
    assert main(["lp", "frac-reducible", "--graph", gf, "2", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["objective"] == "2"


def test_lp_frac_timed_infeasible_exit(tmp_path, capsys):
    from pebblecc.reductions import counterexample_dag

    gf = graph_file(tmp_path, counterexample_dag())
    assert main(["lp", "frac-timed", "--graph", gf]) == 1
    assert "move_7_12" in capsys.readouterr().out


def test_lp_verify(tmp_path, capsys):
    gf = graph_file(tmp_path, chain(1))
    good = write(tmp_path, "s.json", '{"values": {"x_1_0": 0, "x_1_1": 1}}')
    bad = write(tmp_path, "t.json", '{"values": {"x_1_0": 0, "x_1_1": "1/2"}}')
    assert main(["lp", "verify", "pebbling", "--graph", gf, good, "--horizon", "1"]) == 0
    capsys.readouterr()
    assert main(["lp", "verify", "pebbling", "--graph", gf, bad, "--horizon", "1"]) == 1
    assert "sink_1" in capsys.readouterr().out


def test_lp_gap(tmp_path, capsys):
    gf = graph_file(tmp_path, chain(8))
    assert main(["lp", "gap", "--graph", gf, "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["pcc"] == 8 and data["fractional_objective"] == "37/2"
    assert data["ratio"] == "16/37"


def test_verify_paper_subset_passes(capsys):
    rc = main(["verify-paper", "counterexample-upper", "space-bounds", "--json"])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert [d["name"] for d in data] == ["counterexample-upper", "space-bounds"]
    assert all(d["passed"] for d in data)


def test_verify_paper_reports_failing_check(capsys):
    assert main(["verify-paper", "vc-threshold"]) == 1
    out = capsys.readouterr().out
    assert out.startswith("FAIL")
    assert "no single threshold" in out


def test_verify_paper_unknown_check_is_usage_error(capsys):
    assert main(["verify-paper", "not-a-check"]) == 2
    assert "unknown checks" in capsys.readouterr().err


def test_missing_file_is_usage_error(tmp_path, capsys):
    assert main(["depth", "--graph", str(tmp_path / "nope.json")]) == 2
    assert "error" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "pebblecc", "gen", "chain", "3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["n"] == 3
