import pytest
from hypothesis import given

from conftest import structures
from nmlab import catalog
from nmlab.choice import ChoiceFunction
from nmlab.errors import ConditionError, ResourceError
from nmlab.representation import (check_total_preorder_extension, equiv_transitive, extend_to_total_preorder,
                                  represent_general, represent_ranked, represent_smooth,
                                  represent_smooth_transitive, represent_transitive, verify_round_trip)
from nmlab.structures import is_ranked, is_smooth, is_transitive
from nmlab.sets import subsets


@given(structures(max_elements=3))
def test_general_and_transitive_round_trip(s):
    f = ChoiceFunction.from_structure(s)
    verify_round_trip(f, represent_general(f))
    t = represent_transitive(f)
    verify_round_trip(f, t)
    assert is_transitive(t).holds


@given(structures(max_elements=3))
def test_smooth_round_trip_on_smooth_inputs(s):
    if not is_smooth(s, subsets(s.universe)).holds:
        return
    f = ChoiceFunction.from_structure(s)
    for build in (represent_smooth, represent_smooth_transitive):
        out = build(f, verify=True)
        assert is_smooth(out, f.domain).holds


@given(structures(max_elements=3))
def test_equivalent_transitive_structure(s):
    t = equiv_transitive(s)
    assert is_transitive(t).holds
    assert t.mu_table() == s.mu_table()


def test_identity_gives_arrow_free_structure():
    s = represent_general(ChoiceFunction.identity("abc"))
    assert not s.arrows


def test_ranked_strict_preference():
    f = ChoiceFunction.from_names("ab", {("a", "b"): ("a",), ("a",): ("a",), ("b",): ("b",)})
    s = represent_ranked(f, verify=True)
    assert s.arrows == frozenset({(0, 1)})
    assert is_ranked(s).holds


def test_condition_failures_are_named():
    with pytest.raises(ConditionError, match="μPR"):
        represent_general(catalog.pr_failure())
    with pytest.raises(ConditionError, match="μ∅"):
        represent_ranked(catalog.empty_pair())
    # preferential but not cumulative: a < b < c without a < c
    f = ChoiceFunction.from_names("abc", {("a", "b", "c"): ("a",), ("a", "c"): ("a", "c"),
                                          ("a", "b"): ("a",), ("b", "c"): ("b",),
                                          ("a",): ("a",), ("b",): ("b",), ("c",): ("c",)})
    with pytest.raises(ConditionError, match="μCUM"):
        represent_smooth(f)


def test_budget():
    with pytest.raises(ResourceError):
        represent_general(ChoiceFunction.from_structure(
            catalog.ladder_structure(1)), budget=3)


def test_total_preorder_extension():
    rel = [(0, 1), (1, 2), (3, 2)]
    rank = extend_to_total_preorder(4, rel)
    assert check_total_preorder_extension(4, rel, rank)
    # a cycle collapses into one class
    rank = extend_to_total_preorder(3, [(0, 1), (1, 0), (1, 2)])
    assert rank[0] == rank[1] < rank[2]
