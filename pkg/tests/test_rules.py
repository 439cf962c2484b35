import hypothesis.strategies as st
import pytest
from hypothesis import given

from nmlab.choice import ChoiceFunction
from nmlab.conditions import check_mu_condition
from nmlab.errors import InputError, ResourceError
from nmlab.logic import Language
from nmlab.rules import SYSTEM_P, check_logical_rule, choice_from_structure_over, normalize_rule
from nmlab.structures import PrefStructure, is_smooth
from nmlab.sets import subsets

LANG = Language(["p", "q"])


@st.composite
def valuation_structures(draw):
    nodes = [(e, c) for e in range(4) for c in range(draw(st.integers(1, 2)))]
    m = len(nodes)
    pairs = draw(st.sets(st.tuples(st.integers(0, m - 1), st.integers(0, m - 1)), max_size=8))
    return PrefStructure((0, 1, 2, 3), tuple(nodes), frozenset(pairs))


@st.composite
def model_choice(draw):
    table = {X: draw(st.integers(0, 15)) & X for X in range(16)}
    return ChoiceFunction((0, 1, 2, 3), table)


@given(valuation_structures())
def test_preferential_rules(s):
    f = choice_from_structure_over(LANG, s)
    for r in ("AND", "OR", "LLE", "RW", "CCL", "SC", "REF", "PR", "CUT"):
        assert check_logical_rule(f, LANG, r).holds, r


@given(valuation_structures())
def test_smooth_structures_give_cumulative_rules(s):
    if is_smooth(s, subsets(15)).holds:
        f = choice_from_structure_over(LANG, s)
        assert check_logical_rule(f, LANG, "CM").holds
        assert check_logical_rule(f, LANG, "CUM").holds


@given(model_choice())
def test_rule_and_condition_routes_agree(f):
    # on all model sets of a finite language the rule and its condition coincide
    pairs = [("PR", "mu-PR"), ("CUT", "mu-CUT"), ("CM", "mu-CM"), ("OR", "mu-OR"), ("RatM", "mu-RatM")]
    for rule, cond in pairs:
        assert check_logical_rule(f, LANG, rule).holds == check_mu_condition(f, cond).holds, rule


def test_indexed_rules():
    ident = ChoiceFunction((0, 1, 2, 3), {X: X for X in range(16)})
    assert check_logical_rule(ident, LANG, "AND_3").holds
    assert check_logical_rule(ident, LANG, "CM", n=None).holds
    assert normalize_rule("CM4") == ("CM_n", 4)
    with pytest.raises(InputError):
        check_logical_rule(ident, LANG, "AND_7")


def test_names_and_limits():
    assert "CUM" in SYSTEM_P
    assert normalize_rule("(RatM)") == ("RatM", None)
    with pytest.raises(InputError):
        normalize_rule("nothing")
    big = Language(["a", "b", "c", "d"])
    f = ChoiceFunction(tuple(range(16)), {X: X for X in range(1 << 16)})
    with pytest.raises(ResourceError):
        check_logical_rule(f, big, "AND")
    assert check_logical_rule(f, big, "AND", sample=50, seed=1).holds
