import random

import hypothesis.strategies as st
import pytest
from hypothesis import given

from conftest import structures
from nmlab.choice import ChoiceFunction, parse_choice
from nmlab.errors import InputError
from nmlab.structures import (PrefStructure, is_cycle_free, is_ranked, is_smooth, is_transitive,
                              mu_equal, parse_structure, random_ranked, to_one_infinity)
from nmlab.sets import subsets


def brute_mu(s, X):
    """Elements with a copy in X that no copy of an X element points at."""
    out = 0
    for k, (e, _) in enumerate(s.nodes):
        if X >> e & 1 and not any(j == k and X >> s.nodes[i][0] & 1 for i, j in s.arrows):
            out |= 1 << e
    return out


@given(structures())
def test_mu_matches_definition(s):
    for X in subsets(s.universe):
        assert s.mu_mask(X) == brute_mu(s, X)


@given(structures())
def test_text_round_trip(s):
    assert parse_structure(s.to_text()) == s


@given(st.integers(0, 10**6))
def test_one_infinity_keeps_mu(seed):
    s = random_ranked(random.Random(seed), 3)
    t = to_one_infinity(s)
    assert mu_equal(s, t)[0]


def test_parse_defaults_to_one_copy():
    s = parse_structure("elements: a, b\narrows: a < b\n")
    assert s.mu({"a", "b"}) == frozenset({"a"})
    assert len(s.nodes) == 2


def test_parse_rejects_unknown_node():
    with pytest.raises(InputError):
        parse_structure("elements: a\narrows: a < z\n")


def test_smoothness_witness():
    # a < b < c without a < c: c is not minimal in {a,b,c} and nothing minimal sits below it
    s = PrefStructure.single_copy("abc", [("a", "b"), ("b", "c")])
    chk = is_smooth(s, [0b111])
    assert not chk.holds and chk.witness == (0b111, 2)
    assert not is_transitive(s).holds
    t = PrefStructure.single_copy("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    assert is_smooth(t, subsets(7)).holds and is_transitive(t).holds


def test_cycles():
    s = PrefStructure.single_copy("ab", [("a", "b"), ("b", "a")])
    assert not is_cycle_free(s).holds
    assert s.mu_mask(0b11) == 0


def test_random_ranked_structures_are_ranked():
    rng = random.Random(3)
    for _ in range(50):
        assert is_ranked(random_ranked(rng, 3)).holds


def test_choice_text_round_trip():
    f = ChoiceFunction.identity("abc")
    assert parse_choice(f.to_text()) == f
    with pytest.raises(InputError):
        parse_choice("domain: {a,b}; f{a}={a}")
