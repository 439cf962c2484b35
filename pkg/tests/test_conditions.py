import numpy as np
import pytest
from hypothesis import given

from conftest import choice_functions, structures
from nmlab import catalog
from nmlab.choice import ChoiceFunction
from nmlab.conditions import (MU_CONDITIONS, check_cum_alpha, check_mu_condition, compute_hu, holds,
                              isomorphic, normalize_condition, verify_mu_base_row)
from nmlab.errors import InputError
from nmlab.sets import subsets
from nmlab.structures import is_smooth
from nmlab.sweeps import _check_tables


@given(structures())
def test_structures_satisfy_basic_conditions(s):
    f = ChoiceFunction.from_structure(s)
    assert check_mu_condition(f, "mu-subset").holds
    assert check_mu_condition(f, "mu-PR").holds


@given(structures(max_elements=3))
def test_smooth_structures_are_cumulative(s):
    if is_smooth(s, subsets(s.universe)).holds:
        assert check_mu_condition(ChoiceFunction.from_structure(s), "mu-CUM").holds


def pr_brute(f):
    dom = f.domain
    for X in dom:
        for Y in dom:
            if X & ~Y == 0 and f(Y) & X & ~f(X):
                return False
    return True


@given(choice_functions())
def test_pr_against_direct_loop(f):
    assert check_mu_condition(f, "mu-PR").holds == pr_brute(f)


@given(choice_functions())
def test_vectorised_tables_agree_with_checkers(f):
    row = np.array([[f(X) for X in range(8)]], dtype=np.uint8)
    fast = _check_tables(row, 3, ("mu-subset", "mu-PR", "mu-CUM"))
    for key, bad in fast.items():
        assert bool(bad[0]) == (not holds(f.table, 7, key))


def test_named_inputs():
    f = catalog.pr_failure()
    rep = check_mu_condition(f, "(μPR)")
    assert not rep.holds and rep.counterexample == (0b111, 0b011)
    assert "fails at ({a,b,c}, {a,b})" in rep.describe(f.elements)
    g = catalog.cumulative_not_subsup()
    assert check_mu_condition(g, "mu-CUM").holds
    assert not check_mu_condition(g, "mu-⊆⊇").holds


def test_aliases_and_unknown_names():
    assert normalize_condition("mu-SC") == "mu-subset"
    assert normalize_condition("(μ=)") == "mu-="
    with pytest.raises(InputError):
        normalize_condition("mu-nothing")
    assert set(MU_CONDITIONS) >= {"mu-PR", "mu-CUM", "mu-RatM", "mu-par", "mu-cup", "mu-in"}


@pytest.mark.parametrize("k", [1, 2, 3])
def test_cumulativity_ladder(k):
    f = catalog.ladder(k)
    for b in range(k):
        assert check_cum_alpha(f, b).holds
        assert check_cum_alpha(f, b, transitive=True).holds
    assert not check_cum_alpha(f, k).holds
    assert not check_cum_alpha(f, k, transitive=True).holds


def test_neighbourhood_of_identity():
    f = ChoiceFunction.identity("ab")
    hu = compute_hu(f, 0b11)
    assert hu.H == 0b11


def test_negative_row_finds_renamed_example():
    rep = verify_mu_base_row("9", bound=3)
    assert rep.holds and rep.counterexamples
    g = catalog.cumulative_not_subsup()
    # the four-point example restricted to the points it uses is found at size four
    rep4 = verify_mu_base_row("9", bound=4, max_sets=2, limit=None)
    assert any(isomorphic(g, c) for c in rep4.counterexamples)
