import json

import numpy as np
import pytest

from ungas.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_group_info_d6(capsys):
    code, out, _ = run(capsys, "group-info", "--family", "D", "6", "--json")
    rec = json.loads(out)
    assert code == 0
    assert rec["n"] == 6 and rec["class_sizes"] == [1, 2, 3]
    assert rec["dual"] == [0, 1, 2] and rec["ambivalent"]


def test_group_info_z6_duals(capsys):
    code, out, _ = run(capsys, "group-info", "--family", "Z", "6", "--json")
    rec = json.loads(out)
    assert len(rec["class_sizes"]) == 6
    assert rec["dual"][1] == 5 and not rec["ambivalent"]


def test_non_square_table(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 2, "table": [[0, 1], [1]]}))
    code, out, err = run(capsys, "group-info", "--table", str(bad))
    assert code != 0 and out == ""
    assert "not square" in err


@pytest.mark.parametrize("content, msg", [
    ("{not json", "malformed JSON"),
    (json.dumps({"table": [[0, 1], [0, 1]]}), "Latin square"),
    (json.dumps({"n": 3, "table": [[0]]}), "n = 3"),
])
def test_bad_table_files(tmp_path, capsys, content, msg):
    f = tmp_path / "t.json"
    f.write_text(content)
    code, _, err = run(capsys, "group-info", "--table", str(f))
    assert code == 2 and msg in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "group-info", "--table", "/nonexistent/g.json")
    assert code == 2 and "cannot read" in err


def test_missing_group_source(capsys):
    code, _, err = run(capsys, "group-info")
    assert code == 2 and "--family" in err


def test_chartable_d6(capsys):
    code, out, _ = run(capsys, "chartable", "--family", "D", "6", "--json")
    rec = json.loads(out)
    chi = np.array([[complex(*v) for v in row] for row in rec["chi"]])
    assert code == 0
    assert np.allclose(chi, [[1, 1, 1], [1, 1, -1], [2, -1, 0]])


def test_chartable_sl23(capsys):
    _, out, _ = run(capsys, "chartable", "--family", "SL2", "3", "--json")
    rec = json.loads(out)
    assert rec["dims"] == [1, 1, 1, 3, 2, 2, 2]
    assert rec["d"] == 6 and rec["d_prime"] == 4


def test_chartable_from_file_matches_family(tmp_path, capsys):
    f = tmp_path / "z6.json"
    f.write_text(json.dumps({"n": 6, "table": [[(i + j) % 6 for j in range(6)] for i in range(6)]}))
    _, out_file, _ = run(capsys, "chartable", "--table", str(f), "--json")
    _, out_fam, _ = run(capsys, "chartable", "--family", "Z", "6", "--json")
    to_set = lambda rec: {tuple(tuple(np.round(v, 9)) for v in row) for row in rec["chi"]}
    assert to_set(json.loads(out_file)) == to_set(json.loads(out_fam))


def test_scheme_check(capsys):
    code, out, _ = run(capsys, "scheme-check", "--family", "SL2", "3", "--json")
    rec = json.loads(out)
    assert code == 0
    assert rec["bose_mesner_residual"] == 0 and rec["intersection_match"]
    assert rec["axioms"]["AS4"] and not rec["axioms"]["AS3_symmetric"]


def test_scheme_check_edges(capsys):
    _, out, _ = run(capsys, "scheme-check", "--family", "D", "6", "--edges", "--json")
    edges = json.loads(out)["edges"]
    assert len(edges) == 30
    assert sum(1 for e in edges if e[2] == 2) == 18


def test_simulate_zero_time(capsys):
    code, out, _ = run(capsys, "simulate", "--family", "D", "6", "--couplings", "0,1,2", "--t-max", "0", "--json")
    rec = json.loads(out)
    assert code == 0 and len(rec["rows"]) == 1
    assert rec["rows"][0][1:4] == pytest.approx([1, 0, 0], abs=1e-12)


def test_simulate_peaks_at_optimum(capsys):
    _, out, _ = run(capsys, "simulate", "--family", "D", "6", "--stratum", "1",
                    "--t-max", "1", "--steps", "201", "--json")
    rows = np.array(json.loads(out)["rows"])
    # column p1 is kappa_1 |alpha_1|^2 with kappa_1 = 2
    assert np.sqrt(rows[:, 2].max() / 2) == pytest.approx(2 / 3, abs=1e-6)
    assert rows[:, -1].max() < 1e-10


def test_simulate_csv(capsys):
    code, out, _ = run(capsys, "simulate", "--family", "Z", "4", "--couplings", "0,1,0,1",
                       "--steps", "5", "--csv")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 6
    assert lines[0].startswith("t,p0")


def test_simulate_rejects_non_dual_couplings(capsys):
    code, out, err = run(capsys, "simulate", "--family", "Z", "6", "--couplings", "0,1,0,0,0,0")
    assert code == 2 and out == "" and "dual" in err


def test_optimize_same_stratum(capsys):
    code, out, _ = run(capsys, "optimize", "--family", "D", "6", "--stratum", "1", "--json")
    rec = json.loads(out)
    assert code == 0
    assert rec["concurrence"] == pytest.approx(8 / 9, abs=1e-11)
    assert len(rec["couplings"]) == 3
    assert set(rec) >= {"group", "pair", "concurrence", "bounds", "phases", "couplings", "t_star", "converged"}


def test_optimize_cross(capsys):
    code, out, _ = run(capsys, "optimize", "--family", "D", "6", "--pair", "0", "1", "--json")
    rec = json.loads(out)
    assert code == 0 and rec["converged"]
    assert rec["concurrence"] == pytest.approx(0.7071, abs=1e-3)
    assert rec["bounds"]["product"] == pytest.approx(1.3333, abs=1e-3)
    assert rec["bounds"]["conservation"] == pytest.approx(0.7071, abs=1e-3)


def test_optimize_stratum_zero_rejected(capsys):
    code, _, err = run(capsys, "optimize", "--family", "D", "6", "--stratum", "0")
    assert code == 2 and "kappa = 1" in err


def test_bounds(capsys):
    _, out, _ = run(capsys, "bounds", "--family", "D", "6", "--csv")
    assert out.splitlines()[1] == "0,1,1.33333333333,0.707106781187"


def test_reproduce_ok(capsys):
    for args in (("sl23",), ("z2k", "--k", "2"), ("d6-strata",), ("v8k", "--k", "5")):
        code, _, _ = run(capsys, "reproduce", *args)
        assert code == 0, args


def test_reproduce_z2k_values(capsys):
    _, out, _ = run(capsys, "reproduce", "z2k", "--k", "2", "--json")
    rows = json.loads(out)["rows"]
    assert [r["computed"] for r in rows[:3]] == pytest.approx([1, 0.5, 1])


def test_reproduce_unknown_id(capsys):
    code, _, err = run(capsys, "reproduce", "nope")
    assert code != 0 and "d6-cross" in err


def test_out_file_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for f in (a, b):
        assert main(["optimize", "--family", "V", "24", "--pair", "0", "2", "--out", str(f)]) == 0
    assert capsys.readouterr().out == ""
    assert a.read_bytes() == b.read_bytes() and a.read_bytes()


def test_bad_family(capsys):
    code, _, err = run(capsys, "group-info", "--family", "V", "12")
    assert code == 2 and "divisible by 8" in err
    code, _, err = run(capsys, "group-info", "--family", "SL2", "4")
    assert code == 2 and "prime" in err
