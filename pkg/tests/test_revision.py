import random

import hypothesis.strategies as st
import pytest
from hypothesis import given

from nmlab.errors import ConditionError, InputError
from nmlab.logic import Language, format_formula, parse_formula
from nmlab.revision import (Distance, check_agm, check_loop, check_suite, collective_revise, distance_revision,
                            hamming, individual_revise, interdefine, operators_equal, parse_distance,
                            random_distance, revise_theories, table_revision, neighbourhood, ambiguous_distance_demo)
from nmlab.sets import bits


def distances(max_points=4):
    @st.composite
    def build(draw):
        n = draw(st.integers(2, max_points))
        return random_distance(random.Random(draw(st.integers(0, 10**6))), n)
    return build()


def brute_revise(a, b, d):
    pairs = [(d(i, j), j) for i in bits(a) for j in bits(b)]
    if not pairs:
        return 0
    best = min(p for p, _ in pairs)
    return sum({1 << j for p, j in pairs if p == best})


@given(distances(), st.integers(1, 15), st.integers(0, 15))
def test_collective_revision_matches_pairwise_minimum(d, a, b):
    U = (1 << d.n) - 1
    a, b = a & U or 1, b & U
    assert collective_revise(a, b, d) == brute_revise(a, b, d)
    assert collective_revise(a, b, d) & ~individual_revise(a, b, d) == 0


@given(distances(), st.integers(1, 15), st.integers(1, 15), st.integers(0, 15))
def test_neighbourhood_meets_iff_revision_meets(d, x, y, z):
    U = (1 << d.n) - 1
    x, y, z = x & U or 1, y & U or 1, z & U
    assert bool(neighbourhood(x, y, d) & z) == bool(collective_revise(x, y | z, d) & z)


def test_hamming_revision_of_theories():
    lang = Language(["p", "q"])
    out = revise_theories([parse_formula("p & q")], [parse_formula("~p")], lang)
    assert [format_formula(f) for f in out] == ["~p & q"]


def test_postulates_for_hamming_and_failures():
    op = distance_revision(hamming(Language(["p", "q"])))
    assert all(r.holds for r in check_suite(op))
    assert check_agm(op, "K*1").holds and "automatic" in check_agm(op, "K*1").detail
    empty = table_revision(2, {(x, a): 0 for x in range(4) for a in range(4)})
    assert not check_agm(empty, "X|5").holds
    keep = table_revision(2, {(x, a): a for x in range(4) for a in range(4)})
    assert not check_agm(keep, "X|4").holds


def test_interdefinition_round_trip():
    r = distance_revision(hamming(Language(["p", "q"])))
    c = interdefine(r, "contraction")
    assert all(rep.holds for rep in check_suite(c))
    back = interdefine(c, "revision")
    assert operators_equal(r, back) is None
    e = interdefine(r, "entrenchment")
    assert all(rep.holds for rep in check_suite(e))
    with pytest.raises(ConditionError):
        interdefine(table_revision(2, {(x, a): 0 for x in range(4) for a in range(4)}), "contraction")


def test_loop_holds_for_symmetric_distances_and_can_fail_otherwise():
    rng = random.Random(1)
    for _ in range(30):
        assert check_loop(random_distance(rng, rng.randint(2, 4)), max_len=4).holds
    d = Distance(tuple("abc"), ((0, 4, 4), (1, 0, 3), (4, 4, 0)))
    rep = check_loop(d, max_len=4)
    assert not rep.holds and rep.counterexample == (2, 4, 1)


def test_indistinguishable_configurations():
    w = ambiguous_distance_demo()
    assert w.indistinguishable and w.entries == 225
    assert w.d_xy_vs_ab == (True, False)


def test_distance_text_round_trip():
    d = hamming(Language(["p", "q"]))
    assert parse_distance(d.to_text()) == d
    with pytest.raises(InputError):
        parse_distance("points: a,b\n1 2\n")
