import random

import pytest
from hypothesis import given, strategies as st

from nmlab import catalog
from nmlab.errors import ContractError, InputError
from nmlab.ibrs import (check_essential_smooth, check_total_smooth, higher_mu, ibrs_consequence,
                        parse_ibrs, point_subsets, random_ibrs, subsumes, subsumes_level3, to_pref_structure)


def test_shortcut_values():
    g = catalog.attacked_shortcut()
    assert higher_mu(g, "abc") == frozenset("a")
    assert higher_mu(g, "ac") == frozenset("ac")
    assert higher_mu(g, "bc") == frozenset("b")


def test_smoothness_examples():
    c = catalog.copy_chain()
    assert check_essential_smooth(c, "abc").holds
    assert not check_total_smooth(c, "abc").holds
    assert not check_total_smooth(catalog.attacked_chain(False), "abc").holds
    assert check_total_smooth(catalog.attacked_chain(True), "abc").holds


def test_text_round_trip():
    for g in (catalog.attacked_shortcut(), catalog.copy_chain(), catalog.attacked_chain(True)):
        h = parse_ibrs(g.to_text())
        assert h.nodes == g.nodes and h.arrows == g.arrows
    assert "digraph" in catalog.attacked_shortcut().to_dot()


def test_parse_errors():
    with pytest.raises(InputError):
        parse_ibrs("node a\narrow x: a => a")
    with pytest.raises(InputError):
        parse_ibrs("node a\nnode a")


def _level_one_mu(g, X):
    # brute force: a point survives if one of its copies has no attacker starting in X
    X = frozenset(X)
    return frozenset(x for x in X if any(
        not any(a.target == n and g.nodes[a.origin] in X for a in g.arrows.values())
        for n in g.nodes if g.nodes[n] == x))


@given(st.integers(0, 10_000))
def test_level_one_matches_plain_structure(seed):
    g = random_ibrs(random.Random(seed), 3, 4, max_level=1, extra_copies=1)
    s = to_pref_structure(g)
    pts = list(s.elements)
    for X in point_subsets(g):
        mask = sum(1 << pts.index(x) for x in X)
        plain = frozenset(pts[i] for i in range(len(pts)) if s.mu_mask(mask) >> i & 1)
        assert higher_mu(g, X) == plain == _level_one_mu(g, X)


@given(st.integers(0, 10_000))
def test_subsumption_routes_agree(seed):
    g = random_ibrs(random.Random(seed), 3, 5, max_level=3, extra_copies=1)
    for X2 in point_subsets(g):
        for X in point_subsets(g):
            if X <= X2:
                assert subsumes(g, X, X2).holds == subsumes_level3(g, X, X2)


def test_higher_level_has_no_plain_structure():
    with pytest.raises(ContractError):
        to_pref_structure(catalog.attacked_shortcut())


def test_labelled_consequence():
    g = parse_ibrs("node a; node b; arrow r: a -> b; h(p,a)=1; h(p,b)=1; h(q,a)=1; h(q,b)=0")
    assert ibrs_consequence(g, "p", "q")
    assert not ibrs_consequence(g, "p", "~q")
