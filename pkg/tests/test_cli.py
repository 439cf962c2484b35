import json
from pathlib import Path

import pytest

from nmlab import catalog
from nmlab.choice import parse_choice
from nmlab.circuits import parse_circuit
from nmlab.cli import run
from nmlab.inheritance import parse_net
from nmlab.sequents import parse_sequents, six_atom_example
from nmlab.structures import parse_structure

DATA = Path(__file__).resolve().parent.parent / "data"


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_data_files_match_builders():
    assert parse_choice((DATA / "need-pr.cf").read_text()).table == catalog.pr_failure().table
    assert parse_choice((DATA / "cum-not-subsup.cf").read_text()).table == catalog.cumulative_not_subsup().table
    assert parse_net((DATA / "tweety.net").read_text()).links == catalog.penguin().links
    assert parse_net((DATA / "nixon.net").read_text()).links == catalog.diamond().links
    assert parse_circuit((DATA / "jk1.ckt").read_text()) == catalog.feedback_circuit(1)
    assert parse_circuit((DATA / "jk2.ckt").read_text()) == catalog.feedback_circuit(2)
    assert parse_sequents((DATA / "six-atoms.seq").read_text()) == six_atom_example()


def test_mu_check_exit_codes(capsys):
    code, out, _ = call(capsys, "check", "mu", "--cond", "mu-PR", DATA / "need-pr.cf")
    assert code == 1 and "mu-PR" in out and "{a,b}" in out
    code, out, _ = call(capsys, "check", "mu", "--cond", "mu-SC", DATA / "identity.cf")
    assert code == 0


def test_json_report(capsys):
    code, out, _ = call(capsys, "check", "mu", "--cond", "mu-PR", DATA / "need-pr.cf", "--format", "json")
    rep = json.loads(out)
    assert code == 1 and rep["schema"] == "nmlab-report/1" and rep["ok"] is False
    assert rep["results"][0]["counterexample"] == [["a", "b", "c"], ["a", "b"]]
    assert len(rep["input_digest"]) == 64


def test_repeat_runs_are_identical(capsys):
    args = ("check", "agm", "--vars", "p,q,r", "--sample", "300", "--seed", "4", "--format", "json")
    first = call(capsys, *args)
    second = call(capsys, *args)
    assert first == second and first[0] == 0


def test_cum_alpha(capsys):
    assert call(capsys, "check", "cum-alpha", "--alpha", "1", DATA / "inf-cum-k1.cf")[0] == 1
    assert call(capsys, "check", "cum-alpha", "--alpha", "0", "--transitive", DATA / "inf-cum-k1.cf")[0] == 0


def test_represent_round_trip(capsys, tmp_path):
    target = tmp_path / "s.pref"
    code, _, _ = call(capsys, "represent", "smooth", DATA / "identity.cf", "--verify", "-o", target)
    assert code == 0
    s = parse_structure(target.read_text())
    f = parse_choice((DATA / "identity.cf").read_text())
    assert s.mu_table(f.domain) == f.table


def test_represent_ranked_refuses(capsys):
    code, out, err = call(capsys, "represent", "ranked", DATA / "rank-copies.cf")
    assert code == 1 and "fails on {a,b}" in out + err


def test_inherit(capsys):
    assert call(capsys, "inherit", DATA / "tweety.net", "--query", "a", "d", "-")[0] == 0
    assert call(capsys, "inherit", DATA / "tweety.net", "--query", "a", "d", "+")[0] == 1
    assert call(capsys, "inherit", DATA / "nixon.net", "--query", "a", "d", "+")[0] == 1


def test_circuit(capsys):
    code, out, _ = call(capsys, "circuit", DATA / "jk1.ckt", "--steps", "12")
    assert code == 0 and "oscillating with period 4 from step 5" in out
    code, out, _ = call(capsys, "circuit", DATA / "jk2.ckt", "--steps", "12")
    assert "stable from step 6" in out


def test_revise(capsys):
    code, out, _ = call(capsys, "revise", "p&q", "~p")
    assert code == 0 and "~p & q" in out


def test_sequent(capsys):
    code, out, _ = call(capsys, "sequent", "derive", DATA / "six-atoms.seq", "--goal", "a b |~ c e")
    assert code == 0 and out.rstrip().splitlines()[-1].split("[")[0].strip() == "a b |~ c e"
    code, _, _ = call(capsys, "sequent", "derive", DATA / "six-atoms.seq", "--goal", "a |~ e")
    assert code == 1


@pytest.mark.parametrize("argv,code", [
    (("check", "mu", "--cond", "mu-PR", "/nonexistent.cf"), 2),
    (("check", "mu", "--cond", "no-such-condition", str(DATA / "identity.cf")), 2),
    (("sequent", "close", str(DATA / "six-atoms.seq"), "--rules", "C"), 3),
])
def test_error_exit_codes(capsys, argv, code):
    assert call(capsys, *argv)[0] == code
