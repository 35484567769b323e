import json

import pytest

from ccrkit.cli import run
from ccrkit.serialize import load_json


def test_usage_errors():
    assert run([]) == 2
    assert run(["nonsense"]) == 2
    assert run(["pair"]) == 2
    assert run(["ring", "info", "--ring", "zmod:0"]) == 2


def test_ring_info(capsys, tmp_path):
    out = str(tmp_path / "ring.json")
    assert run(["ring", "info", "--ring", "mat:2:gf:2", "--out", out]) == 0
    text = capsys.readouterr().out
    assert "order 16" in text and "noncommutative" in text
    data = load_json(out)
    assert data["order"] == 16 and data["commutative"] is False


def test_char_check_reports_conditions(capsys, tmp_path):
    out = str(tmp_path / "char.json")
    assert run(["char", "check", "--ring", "zmod:4", "--lambda", "2",
                "--out", out]) == 0
    text = capsys.readouterr().out
    assert "sym=True iso=False faith=False" in text
    assert "pairing kernel [0, 2]" in text
    assert load_json(out)["iso"] is False


def test_pair_build_and_verify(capsys, tmp_path):
    pfile = str(tmp_path / "p.json")
    assert run(["pair", "schrodinger", "--ring", "zmod:5", "--d", "1",
                "--lambda", "1", "--out", pfile]) == 0
    assert run(["pair", "verify-ccr", pfile]) == 0
    text = capsys.readouterr().out
    assert "pass" in text and "fail" not in text.replace("0 failed", "")


def test_verify_rejects_tampered_pair(capsys, tmp_path):
    pfile = str(tmp_path / "p.json")
    run(["pair", "schrodinger", "--ring", "zmod:4", "--d", "1",
         "--lambda", "1", "--out", pfile])
    data = load_json(pfile)
    data["u"]["nums"][1][0] = (data["u"]["nums"][1][0] + 1) % data["u"]["den"]
    with open(pfile, "w") as fh:
        json.dump(data, fh)
    assert run(["pair", "verify-ccr", pfile]) == 1


def test_verify_malformed_file_is_a_usage_error(tmp_path, capsys):
    bad = str(tmp_path / "garbage.json")
    with open(bad, "w") as fh:
        fh.write("{not json")
    assert run(["pair", "verify-ccr", bad]) == 2
    assert run(["pair", "verify-ccr", str(tmp_path / "missing.json")]) == 2


def test_random_pair_round_trip_decomposes(capsys, tmp_path):
    pfile = str(tmp_path / "r.json")
    assert run(["pair", "random", "--ring", "zmod:3", "--lambda", "1",
                "--mult", "3", "--seed", "7", "--out", pfile]) == 0
    out = str(tmp_path / "dec.json")
    assert run(["svn", "decompose", "--pair", pfile, "--out", out]) == 0
    text = capsys.readouterr().out
    assert "multiplicity 3" in text
    assert load_json(out)["multiplicity"] == 3


def test_intertwine_success_and_refusal(capsys, tmp_path):
    wfile = str(tmp_path / "w.json")
    assert run(["svn", "intertwine", "--ring", "zmod:3", "--lambda", "1",
                "--out", wfile]) == 0
    assert load_json(wfile)["record"] == "equivalence-witness"
    assert run(["svn", "intertwine", "--ring", "zmod:4", "--lambda", "2"]) == 1
    err = capsys.readouterr().err
    assert "kernel contains [2]" in err


def test_commutant_and_equivalent_queries(capsys, tmp_path):
    a = str(tmp_path / "a.json")
    b = str(tmp_path / "b.json")
    run(["pair", "random", "--ring", "zmod:3", "--lambda", "1", "--mult", "3",
         "--seed", "1", "--out", a])
    run(["pair", "regular", "--ring", "zmod:3", "--lambda", "1", "--out", b])
    assert run(["svn", "commutant", "--pair", a]) == 0
    assert "commutant dimension 9" in capsys.readouterr().out
    assert run(["svn", "equivalent", "--pair", a, "--other", b]) == 0
    assert "equivalent: True" in capsys.readouterr().out


def test_heis_commands(capsys, tmp_path):
    tfile = str(tmp_path / "t.json")
    assert run(["heis", "table", "--ring", "zmod:2", "--d", "1",
                "--out", tfile]) == 0
    data = load_json(tfile)
    assert data["order"] == 8 and len(data["table"]) == 8
    assert run(["heis", "rep-check", "--ring", "zmod:3", "--lambda", "1",
                "--source", "regular"]) == 0
    assert run(["heis", "induce", "--ring", "zmod:4"]) == 0
    text = capsys.readouterr().out
    assert "4/4 checks passed" in text  # one trace check per character


def test_approx_sample_and_epsilon(capsys, tmp_path):
    assert run(["approx", "sample", "--theta", "golden", "--grid", "8",
                "--window", "50"]) == 0
    assert "64/64 cells covered" in capsys.readouterr().out
    # rational theta leaves gaps: strict mode refuses, --fill certifies
    assert run(["approx", "epsilon", "--theta", "1/2", "--grid", "16",
                "--k=-5..5"]) == 1
    assert "edges" in capsys.readouterr().err
    cfile = str(tmp_path / "c.json")
    assert run(["approx", "epsilon", "--theta", "1/2", "--grid", "16",
                "--k=-5..5", "--fill", "--out", cfile]) == 0
    assert load_json(cfile)["eps"] == 2.0
    assert run(["approx", "epsilon", "--theta", "golden", "--grid", "64",
                "--k=-5..5", "--window", "300"]) == 0
    out = capsys.readouterr().out
    assert "eps = 0.485960359807" in out


def test_approx_study_csv(capsys, tmp_path):
    csv_file = str(tmp_path / "s.csv")
    assert run(["approx", "study", "--theta", "golden", "--grids", "8,16",
                "--out", csv_file]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "g,W,eps_exact,eps_bound,uncovered_cells"
    assert len([l for l in lines if l and l[0].isdigit()]) == 2
    with open(csv_file) as fh:
        saved = fh.read().strip().splitlines()
    assert saved[0] == lines[0] and len(saved) == 3


def test_reports_are_reproducible(tmp_path):
    pfile = str(tmp_path / "p.json")
    run(["pair", "schrodinger", "--ring", "zmod:4", "--lambda", "1",
         "--out", pfile])
    r1 = str(tmp_path / "r1.json")
    r2 = str(tmp_path / "r2.json")
    assert run(["pair", "verify-ccr", pfile, "--out", r1]) == 0
    assert run(["pair", "verify-ccr", pfile, "--out", r2]) == 0
    a, b = load_json(r1), load_json(r2)
    a.pop("wall_time_s"), b.pop("wall_time_s")
    assert a == b
    assert a["config_hash"] == b["config_hash"]
    assert a["all_passed"] is True
