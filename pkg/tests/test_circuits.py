import pytest

from nmlab import catalog
from nmlab.circuits import circuit_run, parse_circuit, settled_outputs
from nmlab.errors import InputError


@pytest.mark.parametrize("delay,status,start,period", [(1, "oscillating", 5, 4), (2, "stable", 6, None)])
def test_classification_is_stable_under_longer_runs(delay, status, start, period):
    c = catalog.feedback_circuit(delay)
    for steps in (9, 20, 50):
        r = circuit_run(c, steps)
        assert (r.status, r.start, r.period) == (status, start, period)
        assert len(r.rows) == steps


def test_prefix_consistency():
    c = catalog.feedback_circuit(1)
    assert circuit_run(c, 50).rows[:9] == circuit_run(c, 9).rows


def test_constant_circuit():
    r = circuit_run(parse_circuit("input In = F\nOut = In"), 4)
    assert (r.status, r.start) == ("stable", 1)


def test_settled_outputs():
    c = catalog.feedback_circuit(2)
    got = settled_outputs(c, ["Out1", "Out2"], ["Out1"])
    assert got == {"Out1": False, "Out2": True}
    assert settled_outputs(catalog.feedback_circuit(1), ["Out1"], []) is None


def test_table_text():
    t = circuit_run(catalog.feedback_circuit(1), 3).table().splitlines()
    assert t[0].split() == list(catalog.feedback_circuit(1).names)
    assert len(t) == 4


@pytest.mark.parametrize("text", ["input x = maybe", "A = B &", "A = x\nA = x", "init Z = T", "junk"])
def test_parse_errors(text):
    with pytest.raises(InputError):
        parse_circuit(text)


def test_bad_steps():
    with pytest.raises(InputError):
        circuit_run(catalog.feedback_circuit(1), 0)
